#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ht {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct UnboundNameError : Error {
  explicit UnboundNameError(const std::string& name)
      : Error("unbound name: " + name), name(name) {}
  std::string name;
};

struct DuplicateBindingError : Error {
  explicit DuplicateBindingError(const std::string& name)
      : Error("duplicate binding: " + name), name(name) {}
  std::string name;
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

enum class Kind { Atom, Falsum, And, Or, Imp, Prov, Name, Hole };

// Immutable formula tree. Negation is not a constructor: ~A is Imp(A, Falsum).
// Prov quotes its argument structurally. Name nodes carry no body; bodies live
// in a DefEnv. Hole appears only in diagonalization templates.
//
// Every node caches its canonical text, a structural key, node count and
// Prov-nesting depth, so printing and set membership stay cheap.
class Formula : public std::enable_shared_from_this<Formula> {
 public:
  static FormulaPtr atom(std::string id);
  static FormulaPtr falsum();
  static FormulaPtr conj(FormulaPtr l, FormulaPtr r);
  static FormulaPtr disj(FormulaPtr l, FormulaPtr r);
  static FormulaPtr imp(FormulaPtr l, FormulaPtr r);
  static FormulaPtr prov(FormulaPtr quoted);
  static FormulaPtr name(std::string id);
  static FormulaPtr hole();

  Kind kind() const { return kind_; }
  const std::string& ident() const { return id_; }   // Atom, Name
  const FormulaPtr& left() const { return left_; }   // And, Or, Imp
  const FormulaPtr& right() const { return right_; } // And, Or, Imp
  const FormulaPtr& quoted() const { return left_; } // Prov

  int size() const { return size_; }               // AST node count
  int quote_depth() const { return quote_depth_; } // max Prov nesting
  bool has_hole() const { return has_hole_; }

  // Canonical text: ~ for Imp(.,Falsum), minimal parentheses, "0=1" falsum.
  const std::string& text() const { return text_; }
  // Structural key: distinguishes Atom "L" from Name "L"; used for set/map keys.
  const std::string& key() const { return key_; }

 private:
  Formula() = default;
  static FormulaPtr make(Kind k, std::string id, FormulaPtr l, FormulaPtr r);

  Kind kind_ = Kind::Falsum;
  std::string id_;
  FormulaPtr left_, right_;
  int size_ = 1;
  int quote_depth_ = 0;
  bool has_hole_ = false;
  std::string text_;
  std::string key_;
};

bool equal(const FormulaPtr& a, const FormulaPtr& b);

// Ordering by canonical text, structural key as tie-break.
struct FormulaLess {
  bool operator()(const FormulaPtr& a, const FormulaPtr& b) const {
    if (a->text() != b->text()) return a->text() < b->text();
    return a->key() < b->key();
  }
};

using FormulaSet = std::set<FormulaPtr, FormulaLess>;

// ~f, i.e. Imp(f, Falsum).
FormulaPtr neg(FormulaPtr f);
bool is_neg(const Formula& f);

std::string print_formula(const FormulaPtr& f);

// Names of Name nodes occurring in f (including under Prov).
std::set<std::string> referenced_names(const FormulaPtr& f);

// Finite map from identifiers to defining formulas. A body may mention any
// bound identifier, including its own, inside or outside Prov.
class DefEnv {
 public:
  DefEnv() = default;

  bool contains(const std::string& name) const { return bindings_.count(name) != 0; }
  const FormulaPtr& body(const std::string& name) const; // throws UnboundNameError
  const FormulaPtr* find(const std::string& name) const;
  void bind(const std::string& name, FormulaPtr body);   // throws DuplicateBindingError

  const std::map<std::string, FormulaPtr>& bindings() const { return bindings_; }
  std::vector<std::string> names() const;
  bool empty() const { return bindings_.empty(); }

 private:
  std::map<std::string, FormulaPtr> bindings_;
};

// Replaces every occurrence of Name(target) in f, including occurrences inside
// Prov quotations, by env's body for target. The inserted body is not rescanned.
FormulaPtr unfold_once(const FormulaPtr& f, const DefEnv& env, const std::string& target);

// Substitute every Hole leaf by `filler`.
FormulaPtr fill_holes(const FormulaPtr& f, const FormulaPtr& filler);

// True iff a and b meet within depth_bound single-name unfold steps taken from
// either side (forward unfolding from both, i + j <= depth_bound). Reflexive at
// bound 0 exactly for structural equality; symmetric by construction.
bool defeq(const FormulaPtr& a, const FormulaPtr& b, const DefEnv& env, int depth_bound);

} // namespace ht
