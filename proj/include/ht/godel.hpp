#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ht/formula.hpp"

namespace ht {

using GodelCode = boost::multiprecision::cpp_int;

struct NotACodeError : Error {
  explicit NotACodeError(const std::string& what) : Error("not a code: " + what) {}
};

// Lexicographically ordered identifier registry. Atoms and Names index the
// same list; the constructor tags keep the codes apart. Codes are only
// comparable across formulas encoded against the same registry.
class NameRegistry {
 public:
  NameRegistry() = default;
  explicit NameRegistry(std::vector<std::string> names);

  // All identifiers occurring in f (atoms and names) plus env binding names.
  static NameRegistry collect(const FormulaPtr& f, const DefEnv& env = DefEnv());
  static NameRegistry collect(const std::vector<FormulaPtr>& fs, const DefEnv& env = DefEnv());

  std::optional<size_t> index_of(const std::string& id) const;
  const std::string& at(size_t i) const;
  size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_; // sorted, unique
};

// pair(x, y) = (x+y)(x+y+1)/2 + y, a bijection N x N -> N.
GodelCode cantor_pair(const GodelCode& x, const GodelCode& y);
std::pair<GodelCode, GodelCode> cantor_unpair(const GodelCode& z);

// Constructor tags: Atom 0, Falsum 1, And 2, Or 3, Imp 4, Prov 5, Name 6.
// code(Atom i) = pair(0, i); code(Falsum) = pair(1, 0);
// code(And a b) = pair(2, pair(code a, code b)), likewise Or/Imp;
// code(Prov a) = pair(5, code a); code(Name i) = pair(6, i).
GodelCode encode(const FormulaPtr& f, const NameRegistry& reg);

// Inverse of encode; throws NotACodeError on values outside encode's range.
FormulaPtr decode(const GodelCode& code, const NameRegistry& reg);

} // namespace ht
