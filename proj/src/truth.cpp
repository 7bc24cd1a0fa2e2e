#include "ht/truth.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "ht/parser.hpp"

namespace ht {

const char* three_val_name(ThreeVal v) {
  switch (v) {
    case ThreeVal::T: return "T";
    case ThreeVal::F: return "F";
    case ThreeVal::U: return "U";
  }
  return "?";
}

TSentencePtr TSentence::make(TKind k, std::string name, bool value, int level, TSentencePtr l,
                             TSentencePtr r) {
  auto node = std::shared_ptr<TSentence>(new TSentence());
  node->kind_ = k;
  node->name_ = std::move(name);
  node->value_ = value;
  node->level_ = level;
  node->left_ = std::move(l);
  node->right_ = std::move(r);
  node->mentions_true_n_ = k == TKind::TrueN ||
                           (node->left_ && node->left_->mentions_true_n()) ||
                           (node->right_ && node->right_->mentions_true_n());
  return node;
}

TSentencePtr TSentence::base_atom(std::string name, bool value) {
  return make(TKind::BaseAtom, std::move(name), value, 0, nullptr, nullptr);
}
TSentencePtr TSentence::tnot(TSentencePtr s) {
  return make(TKind::Not, "", false, 0, std::move(s), nullptr);
}
TSentencePtr TSentence::tand(TSentencePtr l, TSentencePtr r) {
  return make(TKind::And, "", false, 0, std::move(l), std::move(r));
}
TSentencePtr TSentence::tor(TSentencePtr l, TSentencePtr r) {
  return make(TKind::Or, "", false, 0, std::move(l), std::move(r));
}
TSentencePtr TSentence::true_pred(std::string target) {
  return make(TKind::TruePred, std::move(target), false, 0, nullptr, nullptr);
}
TSentencePtr TSentence::true_n(int level, std::string target) {
  return make(TKind::TrueN, std::move(target), false, level, nullptr, nullptr);
}
TSentencePtr TSentence::ref(std::string target) {
  return make(TKind::Ref, std::move(target), false, 0, nullptr, nullptr);
}

std::string TSentence::text() const {
  switch (kind_) {
    case TKind::BaseAtom:
      return "atom(" + name_ + ", " + (value_ ? "T" : "F") + ")";
    case TKind::Not:
      return "~" + left_->text();
    case TKind::And:
      return "(" + left_->text() + " & " + right_->text() + ")";
    case TKind::Or:
      return "(" + left_->text() + " | " + right_->text() + ")";
    case TKind::TruePred:
      return "true(" + name_ + ")";
    case TKind::TrueN:
      return "true_" + std::to_string(level_) + "(" + name_ + ")";
    case TKind::Ref:
      return name_;
  }
  return "?";
}

void SentenceUniverse::bind(const std::string& name, TSentencePtr body) {
  if (bindings_.count(name)) throw DuplicateBindingError(name);
  bindings_.emplace(name, std::move(body));
}

const TSentencePtr& SentenceUniverse::body(const std::string& name) const {
  auto it = bindings_.find(name);
  if (it == bindings_.end()) throw UnboundNameError(name);
  return it->second;
}

namespace {

void check_refs(const TSentencePtr& s, const SentenceUniverse& u) {
  switch (s->kind()) {
    case TKind::TruePred:
    case TKind::TrueN:
    case TKind::Ref:
      if (!u.contains(s->target())) throw UnboundNameError(s->target());
      break;
    case TKind::Not:
      check_refs(s->left(), u);
      break;
    case TKind::And:
    case TKind::Or:
      check_refs(s->left(), u);
      check_refs(s->right(), u);
      break;
    case TKind::BaseAtom:
      break;
  }
}

} // namespace

void SentenceUniverse::validate() const {
  for (const auto& [_, body] : bindings_) check_refs(body, *this);
}

namespace {

ThreeVal kleene_not(ThreeVal v) {
  if (v == ThreeVal::T) return ThreeVal::F;
  if (v == ThreeVal::F) return ThreeVal::T;
  return ThreeVal::U;
}

ThreeVal kleene_and(ThreeVal a, ThreeVal b) {
  if (a == ThreeVal::F || b == ThreeVal::F) return ThreeVal::F;
  if (a == ThreeVal::T && b == ThreeVal::T) return ThreeVal::T;
  return ThreeVal::U;
}

ThreeVal kleene_or(ThreeVal a, ThreeVal b) {
  if (a == ThreeVal::T || b == ThreeVal::T) return ThreeVal::T;
  if (a == ThreeVal::F && b == ThreeVal::F) return ThreeVal::F;
  return ThreeVal::U;
}

ThreeVal eval_kleene(const TSentencePtr& s, const Valuation& v) {
  switch (s->kind()) {
    case TKind::BaseAtom:
      return s->atom_value() ? ThreeVal::T : ThreeVal::F;
    case TKind::Not:
      return kleene_not(eval_kleene(s->left(), v));
    case TKind::And:
      return kleene_and(eval_kleene(s->left(), v), eval_kleene(s->right(), v));
    case TKind::Or:
      return kleene_or(eval_kleene(s->left(), v), eval_kleene(s->right(), v));
    case TKind::TruePred:
    case TKind::TrueN: // transparent truth in the fixpoint reading
    case TKind::Ref:
      return v.at(s->target());
  }
  return ThreeVal::U;
}

} // namespace

KripkeResult kripke_fixpoint(const SentenceUniverse& u) {
  u.validate();
  KripkeResult r;
  for (const auto& [name, _] : u.bindings()) {
    r.fixpoint[name] = ThreeVal::U;
    r.stabilized_at[name] = 0;
  }

  int stage = 0;
  while (true) {
    stage++;
    Valuation next;
    bool changed = false;
    for (const auto& [name, body] : u.bindings()) {
      ThreeVal nv = eval_kleene(body, r.fixpoint);
      next[name] = nv;
      if (nv != r.fixpoint.at(name)) {
        changed = true;
        r.stabilized_at[name] = stage;
      }
    }
    if (!changed) break;
    r.fixpoint = std::move(next);
    r.trace.push_back(r.fixpoint);
    r.stages = stage;
  }
  return r;
}

Groundedness classify_grounded(const SentenceUniverse& u, const std::string& name) {
  if (!u.contains(name)) throw UnboundNameError(name);
  KripkeResult r = kripke_fixpoint(u);
  ThreeVal v = r.fixpoint.at(name);
  if (v == ThreeVal::U) return Groundedness{false, ThreeVal::U, 0};
  return Groundedness{true, v, r.stabilized_at.at(name)};
}

namespace {

struct LevelScan {
  bool blocked = false; // some dependency has no level yet (or never will)
  int level = 0;
};

// max of: TrueN indices used, levels of referenced sentences. true_k may only
// target a sentence already leveled below k.
LevelScan scan_level(const TSentencePtr& s, const std::map<std::string, TarskiEntry>& acc) {
  switch (s->kind()) {
    case TKind::BaseAtom:
      return {false, 0};
    case TKind::Not:
      return scan_level(s->left(), acc);
    case TKind::And:
    case TKind::Or: {
      LevelScan l = scan_level(s->left(), acc);
      LevelScan r = scan_level(s->right(), acc);
      return {l.blocked || r.blocked, std::max(l.level, r.level)};
    }
    case TKind::TrueN: {
      auto it = acc.find(s->target());
      if (it == acc.end() || !it->second.level || *it->second.level >= s->level())
        return {true, 0};
      return {false, s->level()};
    }
    case TKind::Ref: {
      auto it = acc.find(s->target());
      if (it == acc.end() || !it->second.level) return {true, 0};
      return {false, *it->second.level};
    }
    case TKind::TruePred:
      throw Error("tarski levels need indexed truth predicates (true_n), got true(" +
                  s->target() + ")");
  }
  return {true, 0};
}

bool eval_classical(const TSentencePtr& s, const std::map<std::string, TarskiEntry>& acc) {
  switch (s->kind()) {
    case TKind::BaseAtom:
      return s->atom_value();
    case TKind::Not:
      return !eval_classical(s->left(), acc);
    case TKind::And:
      return eval_classical(s->left(), acc) && eval_classical(s->right(), acc);
    case TKind::Or:
      return eval_classical(s->left(), acc) || eval_classical(s->right(), acc);
    case TKind::TrueN:
    case TKind::Ref:
      return *acc.at(s->target()).value;
    case TKind::TruePred:
      throw Error("tarski levels need indexed truth predicates");
  }
  return false;
}

} // namespace

std::map<std::string, TarskiEntry> tarski_levels(const SentenceUniverse& u) {
  u.validate();
  std::map<std::string, TarskiEntry> acc;
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& [name, body] : u.bindings()) {
      if (acc.count(name)) continue;
      LevelScan scan = scan_level(body, acc);
      if (scan.blocked) continue;
      TarskiEntry e;
      e.level = scan.level;
      acc[name] = e; // value filled below, once deps are known leveled
      acc[name].value = eval_classical(body, acc);
      progress = true;
    }
  }
  for (const auto& [name, _] : u.bindings())
    if (!acc.count(name)) acc[name] = TarskiEntry{};
  return acc;
}

namespace {

TSentencePtr strip_indices(const TSentencePtr& s) {
  switch (s->kind()) {
    case TKind::TrueN:
      return TSentence::true_pred(s->target());
    case TKind::Not:
      return TSentence::tnot(strip_indices(s->left()));
    case TKind::And:
      return TSentence::tand(strip_indices(s->left()), strip_indices(s->right()));
    case TKind::Or:
      return TSentence::tor(strip_indices(s->left()), strip_indices(s->right()));
    default:
      return s;
  }
}

} // namespace

SentenceUniverse with_unindexed_truth(const SentenceUniverse& u) {
  SentenceUniverse out;
  for (const auto& [name, body] : u.bindings()) out.bind(name, strip_indices(body));
  return out;
}

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

class TParser {
 public:
  TParser(std::string_view src, int line) : src_(src), line_(line) {}

  TSentencePtr parse() {
    TSentencePtr s = disj();
    skip();
    if (pos_ != src_.size()) throw ParseError("trailing text in sentence", line_, col());
    return s;
  }

 private:
  TSentencePtr disj() {
    TSentencePtr l = conj();
    while (peek() == '|') {
      take();
      l = TSentence::tor(l, conj());
    }
    return l;
  }

  TSentencePtr conj() {
    TSentencePtr l = unary();
    while (peek() == '&') {
      take();
      l = TSentence::tand(l, unary());
    }
    return l;
  }

  TSentencePtr unary() {
    skip();
    if (peek() == '~') {
      take();
      return TSentence::tnot(unary());
    }
    if (peek() == '(') {
      take();
      TSentencePtr s = disj();
      expect(')');
      return s;
    }
    std::string id = ident();
    if (id == "true") {
      if (peek() == '_') {
        take();
        int n = number();
        expect('(');
        std::string target = ident();
        expect(')');
        return TSentence::true_n(n, target);
      }
      expect('(');
      std::string target = ident();
      expect(')');
      return TSentence::true_pred(target);
    }
    if (id == "atom") {
      expect('(');
      std::string name = ident();
      expect(',');
      skip();
      std::string v = ident();
      if (v != "T" && v != "F") throw ParseError("atom value must be T or F", line_, col());
      expect(')');
      return TSentence::base_atom(name, v == "T");
    }
    return TSentence::ref(id);
  }

  char peek() {
    skip();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }
  void take() { pos_++; }
  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) pos_++;
  }
  void expect(char c) {
    if (peek() != c)
      throw ParseError(std::string("expected '") + c + "'", line_, col());
    take();
  }
  std::string ident() {
    skip();
    size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                  src_[pos_] == '_' || src_[pos_] == '\'')) {
      // `true_3(` stops before the index so the caller can read it
      if (src_.substr(start, pos_ - start) == "true" && src_[pos_] == '_') break;
      pos_++;
    }
    if (pos_ == start) throw ParseError("expected an identifier", line_, col());
    return std::string(src_.substr(start, pos_ - start));
  }
  int number() {
    skip();
    size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) pos_++;
    if (pos_ == start) throw ParseError("expected a truth-predicate index", line_, col());
    return std::stoi(std::string(src_.substr(start, pos_ - start)));
  }
  int col() const { return static_cast<int>(pos_) + 1; }

  std::string_view src_;
  size_t pos_ = 0;
  int line_;
};

} // namespace

SentenceUniverse parse_universe(std::istream& in, const std::string& source_name) {
  SentenceUniverse u;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    lineno++;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("sent ", 0) != 0)
      throw ParseError(source_name + ": expected 'sent <name> := <t-expr>'", lineno, 1);
    std::string rest = trim(line.substr(5));
    size_t assign = rest.find(":=");
    if (assign == std::string::npos)
      throw ParseError(source_name + ": expected ':=' in sentence binding", lineno, 1);
    std::string name = trim(rest.substr(0, assign));
    std::string body = trim(rest.substr(assign + 2));
    u.bind(name, TParser(body, lineno).parse());
  }
  u.validate();
  return u;
}

SentenceUniverse load_universe(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open universe file: " + path);
  return parse_universe(in, path);
}

} // namespace ht
