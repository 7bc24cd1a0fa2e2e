#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ht/formula.hpp"

namespace ht {

enum class ThreeVal { T, F, U };

const char* three_val_name(ThreeVal v);

class TSentence;
using TSentencePtr = std::shared_ptr<const TSentence>;

enum class TKind { BaseAtom, Not, And, Or, TruePred, TrueN, Ref };

// Sentences of the truth-model language. Truth ascriptions target sentence
// names, not quoted syntax; BaseAtom values are given, not computed.
class TSentence {
 public:
  static TSentencePtr base_atom(std::string name, bool value);
  static TSentencePtr tnot(TSentencePtr s);
  static TSentencePtr tand(TSentencePtr l, TSentencePtr r);
  static TSentencePtr tor(TSentencePtr l, TSentencePtr r);
  static TSentencePtr true_pred(std::string target);
  static TSentencePtr true_n(int level, std::string target);
  static TSentencePtr ref(std::string target);

  TKind kind() const { return kind_; }
  const std::string& atom_name() const { return name_; }
  bool atom_value() const { return value_; }
  const std::string& target() const { return name_; } // TruePred/TrueN/Ref
  int level() const { return level_; }                // TrueN
  const TSentencePtr& left() const { return left_; }
  const TSentencePtr& right() const { return right_; }

  bool mentions_true_n() const { return mentions_true_n_; }
  std::string text() const;

 private:
  TSentence() = default;
  static TSentencePtr make(TKind k, std::string name, bool value, int level, TSentencePtr l,
                           TSentencePtr r);

  TKind kind_ = TKind::BaseAtom;
  std::string name_;
  bool value_ = false;
  int level_ = 0;
  TSentencePtr left_, right_;
  bool mentions_true_n_ = false;
};

// Finite, name-closed map from sentence names to sentences.
class SentenceUniverse {
 public:
  void bind(const std::string& name, TSentencePtr body); // throws on duplicates
  const std::map<std::string, TSentencePtr>& bindings() const { return bindings_; }
  const TSentencePtr& body(const std::string& name) const;
  bool contains(const std::string& name) const { return bindings_.count(name) != 0; }
  size_t size() const { return bindings_.size(); }

  // Throws UnboundNameError if any referenced name is unbound.
  void validate() const;

 private:
  std::map<std::string, TSentencePtr> bindings_;
};

using Valuation = std::map<std::string, ThreeVal>;

struct KripkeResult {
  Valuation fixpoint;
  int stages = 0;                     // stages that changed at least one value
  std::map<std::string, int> stabilized_at; // first stage reaching the final value
  std::vector<Valuation> trace;       // valuation after each changing stage
};

// Least fixed point under strong Kleene, starting from all-undefined and
// re-evaluating every sentence simultaneously each stage. Always terminates:
// values only move up the information order, so at most |u|+1 stages change.
KripkeResult kripke_fixpoint(const SentenceUniverse& u);

struct Groundedness {
  bool grounded = false;
  ThreeVal value = ThreeVal::U;
  int stage = 0; // meaningful when grounded
};

Groundedness classify_grounded(const SentenceUniverse& u, const std::string& name);

struct TarskiEntry {
  std::optional<int> level;  // nullopt: unstratifiable
  std::optional<bool> value; // classical value for leveled sentences
};

// Stratified truth levels: a sentence's level is the greatest truth-predicate
// index it uses (or a referenced sentence's level), 0 when it uses none;
// true_k may only target sentences of level below k. Sentences that cannot be
// stratified that way get no level and no value.
std::map<std::string, TarskiEntry> tarski_levels(const SentenceUniverse& u);

// TrueN(k, t) -> TruePred(t), for comparing the hierarchy against the fixpoint.
SentenceUniverse with_unindexed_truth(const SentenceUniverse& u);

// Universe file: lines `sent <name> := <t-expr>`, `#` comments.
//   t-expr := `true(<name>)` | `true_<n>(<name>)` | `atom(<name>, T|F)`
//           | `~` t-expr | t-expr `&` t-expr | t-expr `|` t-expr | `(` t-expr `)`
//           | <name>
SentenceUniverse parse_universe(std::istream& in, const std::string& source_name);
SentenceUniverse load_universe(const std::string& path);

} // namespace ht
