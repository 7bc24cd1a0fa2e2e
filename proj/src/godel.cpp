#include "ht/godel.hpp"

#include <algorithm>

namespace ht {

NameRegistry::NameRegistry(std::vector<std::string> names) : names_(std::move(names)) {
  std::sort(names_.begin(), names_.end());
  names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
}

namespace {

void collect_idents(const FormulaPtr& f, std::vector<std::string>& out) {
  switch (f->kind()) {
    case Kind::Atom:
    case Kind::Name:
      out.push_back(f->ident());
      break;
    case Kind::And:
    case Kind::Or:
    case Kind::Imp:
      collect_idents(f->left(), out);
      collect_idents(f->right(), out);
      break;
    case Kind::Prov:
      collect_idents(f->quoted(), out);
      break;
    default:
      break;
  }
}

} // namespace

NameRegistry NameRegistry::collect(const FormulaPtr& f, const DefEnv& env) {
  return collect(std::vector<FormulaPtr>{f}, env);
}

NameRegistry NameRegistry::collect(const std::vector<FormulaPtr>& fs, const DefEnv& env) {
  std::vector<std::string> ids;
  for (const auto& f : fs) collect_idents(f, ids);
  for (const auto& [n, body] : env.bindings()) {
    ids.push_back(n);
    collect_idents(body, ids);
  }
  return NameRegistry(std::move(ids));
}

std::optional<size_t> NameRegistry::index_of(const std::string& id) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), id);
  if (it == names_.end() || *it != id) return std::nullopt;
  return static_cast<size_t>(it - names_.begin());
}

const std::string& NameRegistry::at(size_t i) const {
  if (i >= names_.size()) throw Error("registry index out of range");
  return names_[i];
}

GodelCode cantor_pair(const GodelCode& x, const GodelCode& y) {
  GodelCode s = x + y;
  return s * (s + 1) / 2 + y;
}

std::pair<GodelCode, GodelCode> cantor_unpair(const GodelCode& z) {
  // Largest s with s(s+1)/2 <= z.
  GodelCode discriminant = 8 * z + 1;
  GodelCode root = boost::multiprecision::sqrt(discriminant);
  GodelCode s = (root - 1) / 2;
  while (s * (s + 1) / 2 > z) s -= 1;
  while ((s + 1) * (s + 2) / 2 <= z) s += 1;
  GodelCode y = z - s * (s + 1) / 2;
  GodelCode x = s - y;
  return {x, y};
}

namespace {

constexpr unsigned kTagAtom = 0;
constexpr unsigned kTagFalsum = 1;
constexpr unsigned kTagAnd = 2;
constexpr unsigned kTagOr = 3;
constexpr unsigned kTagImp = 4;
constexpr unsigned kTagProv = 5;
constexpr unsigned kTagName = 6;

GodelCode ident_index(const FormulaPtr& f, const NameRegistry& reg) {
  auto idx = reg.index_of(f->ident());
  if (!idx) throw Error("identifier not in registry: " + f->ident());
  return GodelCode(*idx);
}

} // namespace

GodelCode encode(const FormulaPtr& f, const NameRegistry& reg) {
  switch (f->kind()) {
    case Kind::Atom:
      return cantor_pair(kTagAtom, ident_index(f, reg));
    case Kind::Falsum:
      return cantor_pair(kTagFalsum, 0);
    case Kind::And:
      return cantor_pair(kTagAnd, cantor_pair(encode(f->left(), reg), encode(f->right(), reg)));
    case Kind::Or:
      return cantor_pair(kTagOr, cantor_pair(encode(f->left(), reg), encode(f->right(), reg)));
    case Kind::Imp:
      return cantor_pair(kTagImp, cantor_pair(encode(f->left(), reg), encode(f->right(), reg)));
    case Kind::Prov:
      return cantor_pair(kTagProv, encode(f->quoted(), reg));
    case Kind::Name:
      return cantor_pair(kTagName, ident_index(f, reg));
    case Kind::Hole:
      throw Error("template holes have no code");
  }
  throw Error("unreachable");
}

FormulaPtr decode(const GodelCode& code, const NameRegistry& reg) {
  if (code < 0) throw NotACodeError(code.str());
  auto [tag, payload] = cantor_unpair(code);
  if (tag == kTagAtom || tag == kTagName) {
    if (payload >= reg.size()) throw NotACodeError("identifier index " + payload.str());
    size_t i = static_cast<size_t>(payload);
    return tag == kTagAtom ? Formula::atom(reg.at(i)) : Formula::name(reg.at(i));
  }
  if (tag == kTagFalsum) {
    if (payload != 0) throw NotACodeError(code.str());
    return Formula::falsum();
  }
  if (tag == kTagProv) return Formula::prov(decode(payload, reg));
  if (tag == kTagAnd || tag == kTagOr || tag == kTagImp) {
    auto [a, b] = cantor_unpair(payload);
    FormulaPtr l = decode(a, reg);
    FormulaPtr r = decode(b, reg);
    if (tag == kTagAnd) return Formula::conj(l, r);
    if (tag == kTagOr) return Formula::disj(l, r);
    return Formula::imp(l, r);
  }
  throw NotACodeError("constructor tag " + tag.str());
}

} // namespace ht
