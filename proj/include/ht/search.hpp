#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "ht/kernel.hpp"

namespace ht {

struct SearchBounds {
  int quote_depth = 2;  // max Prov nesting in generated formulas
  int formula_size = 16; // max AST node count
  int iterations = 64;  // max saturation rounds

  void validate() const;
};

// The finite formula frame saturation works inside: the subformula closure of
// the seeds, closed under one definitional unfold per name, negation,
// Prov-wrapping up to quote_depth, and one pass of pairwise &, |, -> joins
// (re-closed afterwards), everything truncated at formula_size. Seeds are kept
// even when they exceed the bounds. Deterministic order.
std::vector<FormulaPtr> build_universe(const std::vector<FormulaPtr>& seeds, const DefEnv& env,
                                       const SearchBounds& b);

class WitnessStore;

struct SaturationResult {
  std::vector<FormulaPtr> derived; // theorems inside the universe, sorted
  int rounds_used = 0;
  bool saturated = false; // a full round added nothing before the bound
  std::shared_ptr<const WitnessStore> witnesses;

  bool contains(const FormulaPtr& f) const;
};

// Forward chaining over the universe. Axiom instances enter as universe
// members matching a scheme shape; the schemes additionally act as derived
// rules (their instances and bookkeeping conjunctions live only inside
// witnesses), hypothetical steps assume one universe member at a time, and
// impI/orE conclusions are kept when the corresponding formula is in the
// universe. Every derived formula carries a kernel-checkable trace.
// Negative answers mean "not derivable within these bounds", nothing stronger.
SaturationResult saturate(const std::vector<FormulaPtr>& universe, const LogicConfig& config,
                          const DefEnv& env, const SearchBounds& b);

// Reconstructs a proof script for a derived formula from the saturation
// witnesses; nullopt when the formula was not derived.
std::optional<ProofScript> witness_script(const SaturationResult& result, const FormulaPtr& goal);

// build_universe({goal}) + saturate + witness_script.
std::optional<ProofScript> prove_bounded(const FormulaPtr& goal, const LogicConfig& config,
                                         const DefEnv& env, const SearchBounds& b);

} // namespace ht
