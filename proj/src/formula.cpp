#include "ht/formula.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

namespace ht {

namespace {

// Printing precedence: atoms/Prov bind tightest, then ~, &, |, ->.
constexpr int kPrecAtom = 5;
constexpr int kPrecNeg = 4;
constexpr int kPrecAnd = 3;
constexpr int kPrecOr = 2;
constexpr int kPrecImp = 1;

int node_prec(const Formula& f) {
  switch (f.kind()) {
    case Kind::Atom:
    case Kind::Falsum:
    case Kind::Name:
    case Kind::Prov:
    case Kind::Hole:
      return kPrecAtom;
    case Kind::And:
      return kPrecAnd;
    case Kind::Or:
      return kPrecOr;
    case Kind::Imp:
      return is_neg(f) ? kPrecNeg : kPrecImp;
  }
  return kPrecAtom;
}

std::string wrap(const FormulaPtr& f, int min_prec) {
  if (node_prec(*f) < min_prec) return "(" + f->text() + ")";
  return f->text();
}

} // namespace

bool is_neg(const Formula& f) {
  return f.kind() == Kind::Imp && f.right()->kind() == Kind::Falsum;
}

FormulaPtr Formula::make(Kind k, std::string id, FormulaPtr l, FormulaPtr r) {
  auto node = std::shared_ptr<Formula>(new Formula());
  node->kind_ = k;
  node->id_ = std::move(id);
  node->left_ = std::move(l);
  node->right_ = std::move(r);

  switch (k) {
    case Kind::Atom:
      node->size_ = 1;
      node->text_ = node->id_;
      node->key_ = "a:" + node->id_;
      break;
    case Kind::Name:
      node->size_ = 1;
      node->text_ = node->id_;
      node->key_ = "n:" + node->id_;
      break;
    case Kind::Falsum:
      node->size_ = 1;
      node->text_ = "0=1";
      node->key_ = "f";
      break;
    case Kind::Hole:
      node->size_ = 1;
      node->has_hole_ = true;
      node->text_ = "@";
      node->key_ = "@";
      break;
    case Kind::Prov:
      node->size_ = 1 + node->left_->size();
      node->quote_depth_ = 1 + node->left_->quote_depth();
      node->has_hole_ = node->left_->has_hole();
      node->text_ = "Prov(#" + node->left_->text() + "#)";
      node->key_ = "P(" + node->left_->key() + ")";
      break;
    case Kind::And:
    case Kind::Or:
    case Kind::Imp: {
      node->size_ = 1 + node->left_->size() + node->right_->size();
      node->quote_depth_ =
          std::max(node->left_->quote_depth(), node->right_->quote_depth());
      node->has_hole_ = node->left_->has_hole() || node->right_->has_hole();
      const char* tag = k == Kind::And ? "&" : (k == Kind::Or ? "|" : ">");
      node->key_ = std::string(tag) + "(" + node->left_->key() + "," +
                   node->right_->key() + ")";
      if (k == Kind::And) {
        node->text_ = wrap(node->left_, kPrecAnd) + " & " + wrap(node->right_, kPrecAnd + 1);
      } else if (k == Kind::Or) {
        node->text_ = wrap(node->left_, kPrecOr) + " | " + wrap(node->right_, kPrecOr + 1);
      } else if (is_neg(*node)) {
        node->text_ = "~" + wrap(node->left_, kPrecNeg);
      } else {
        node->text_ = wrap(node->left_, kPrecImp + 1) + " -> " + wrap(node->right_, kPrecImp);
      }
      break;
    }
  }
  return node;
}

FormulaPtr Formula::atom(std::string id) {
  return make(Kind::Atom, std::move(id), nullptr, nullptr);
}

FormulaPtr Formula::falsum() {
  static const FormulaPtr instance = make(Kind::Falsum, "", nullptr, nullptr);
  return instance;
}

FormulaPtr Formula::conj(FormulaPtr l, FormulaPtr r) {
  return make(Kind::And, "", std::move(l), std::move(r));
}

FormulaPtr Formula::disj(FormulaPtr l, FormulaPtr r) {
  return make(Kind::Or, "", std::move(l), std::move(r));
}

FormulaPtr Formula::imp(FormulaPtr l, FormulaPtr r) {
  return make(Kind::Imp, "", std::move(l), std::move(r));
}

FormulaPtr Formula::prov(FormulaPtr quoted) {
  return make(Kind::Prov, "", std::move(quoted), nullptr);
}

FormulaPtr Formula::name(std::string id) {
  return make(Kind::Name, std::move(id), nullptr, nullptr);
}

FormulaPtr Formula::hole() {
  static const FormulaPtr instance = make(Kind::Hole, "", nullptr, nullptr);
  return instance;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->key() == b->key();
}

FormulaPtr neg(FormulaPtr f) { return Formula::imp(std::move(f), Formula::falsum()); }

std::string print_formula(const FormulaPtr& f) { return f->text(); }

std::set<std::string> referenced_names(const FormulaPtr& f) {
  std::set<std::string> out;
  std::vector<const Formula*> stack{f.get()};
  while (!stack.empty()) {
    const Formula* cur = stack.back();
    stack.pop_back();
    switch (cur->kind()) {
      case Kind::Name:
        out.insert(cur->ident());
        break;
      case Kind::And:
      case Kind::Or:
      case Kind::Imp:
        stack.push_back(cur->left().get());
        stack.push_back(cur->right().get());
        break;
      case Kind::Prov:
        stack.push_back(cur->quoted().get());
        break;
      default:
        break;
    }
  }
  return out;
}

const FormulaPtr& DefEnv::body(const std::string& name) const {
  auto it = bindings_.find(name);
  if (it == bindings_.end()) throw UnboundNameError(name);
  return it->second;
}

const FormulaPtr* DefEnv::find(const std::string& name) const {
  auto it = bindings_.find(name);
  return it == bindings_.end() ? nullptr : &it->second;
}

void DefEnv::bind(const std::string& name, FormulaPtr body) {
  if (bindings_.count(name)) throw DuplicateBindingError(name);
  bindings_.emplace(name, std::move(body));
}

std::vector<std::string> DefEnv::names() const {
  std::vector<std::string> out;
  out.reserve(bindings_.size());
  for (const auto& [n, _] : bindings_) out.push_back(n);
  return out;
}

namespace {

FormulaPtr substitute(const FormulaPtr& f, Kind leaf, const std::string& id,
                      const FormulaPtr& replacement) {
  switch (f->kind()) {
    case Kind::Atom:
    case Kind::Falsum:
      return f;
    case Kind::Hole:
      return leaf == Kind::Hole ? replacement : f;
    case Kind::Name:
      return (leaf == Kind::Name && f->ident() == id) ? replacement : f;
    case Kind::Prov: {
      FormulaPtr q = substitute(f->quoted(), leaf, id, replacement);
      return q == f->quoted() ? f : Formula::prov(q);
    }
    case Kind::And:
    case Kind::Or:
    case Kind::Imp: {
      FormulaPtr l = substitute(f->left(), leaf, id, replacement);
      FormulaPtr r = substitute(f->right(), leaf, id, replacement);
      if (l == f->left() && r == f->right()) return f;
      if (f->kind() == Kind::And) return Formula::conj(l, r);
      if (f->kind() == Kind::Or) return Formula::disj(l, r);
      return Formula::imp(l, r);
    }
  }
  return f;
}

} // namespace

FormulaPtr unfold_once(const FormulaPtr& f, const DefEnv& env, const std::string& target) {
  const FormulaPtr& body = env.body(target); // throws if unbound
  return substitute(f, Kind::Name, target, body);
}

FormulaPtr fill_holes(const FormulaPtr& f, const FormulaPtr& filler) {
  return substitute(f, Kind::Hole, "", filler);
}

namespace {

// Forward unfold frontier: minimal step count per structural key.
std::unordered_map<std::string, FormulaPtr> unfold_layers(
    const FormulaPtr& start, const DefEnv& env, int depth,
    std::unordered_map<std::string, int>& dist) {
  std::unordered_map<std::string, FormulaPtr> seen;
  std::queue<FormulaPtr> frontier;
  seen.emplace(start->key(), start);
  dist.emplace(start->key(), 0);
  frontier.push(start);
  while (!frontier.empty()) {
    FormulaPtr cur = frontier.front();
    frontier.pop();
    int d = dist[cur->key()];
    if (d >= depth) continue;
    for (const std::string& n : referenced_names(cur)) {
      if (!env.contains(n)) continue;
      FormulaPtr next = unfold_once(cur, env, n);
      if (next == cur) continue;
      auto [it, inserted] = dist.emplace(next->key(), d + 1);
      (void)it;
      if (inserted) {
        seen.emplace(next->key(), next);
        frontier.push(next);
      }
    }
  }
  return seen;
}

} // namespace

bool defeq(const FormulaPtr& a, const FormulaPtr& b, const DefEnv& env, int depth_bound) {
  if (equal(a, b)) return true;
  if (depth_bound <= 0) return false;
  std::unordered_map<std::string, int> da, db;
  auto fa = unfold_layers(a, env, depth_bound, da);
  unfold_layers(b, env, depth_bound, db);
  for (const auto& [key, steps] : da) {
    auto it = db.find(key);
    if (it != db.end() && steps + it->second <= depth_bound) return true;
  }
  (void)fa;
  return false;
}

} // namespace ht
