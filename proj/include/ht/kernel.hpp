#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ht/formula.hpp"

namespace ht {

// Minimal logic is the base; each flag enables one extra rule family.
struct LogicConfig {
  bool ex_falso = false;        // efq: 0=1 |- A
  bool excluded_middle = false; // lem: |- A | ~A
  bool reflection = false;      // axRefl: Prov(#A#) -> A
  bool prov_axioms = false;     // axS1..axS5

  bool superset_of(const LogicConfig& other) const {
    return (ex_falso || !other.ex_falso) && (excluded_middle || !other.excluded_middle) &&
           (reflection || !other.reflection) && (prov_axioms || !other.prov_axioms);
  }
};

inline LogicConfig ht_config() { return LogicConfig{false, false, false, true}; }

enum class RuleId {
  Hyp,
  AndI,
  AndE1,
  AndE2,
  OrI1,
  OrI2,
  OrE,
  ImpI,
  ImpE,
  Def,
  Efq,
  Lem,
  AxS1,
  AxS2a,
  AxS2b,
  AxS3,
  AxS4,
  AxS5,
  AxRefl,
};

enum class SchemeId { S1, S2a, S2b, S3, S4, S5, Refl };

std::string rule_name(RuleId r);
std::optional<RuleId> rule_from_name(const std::string& s);
std::string scheme_name(SchemeId s);

// Hypotheses form an ordered, duplicate-free list with set-style membership.
struct Sequent {
  std::vector<FormulaPtr> hyps;
  FormulaPtr concl;

  bool has_hyp(const FormulaPtr& f) const;
  std::string text() const; // "[h1, h2] |- f" or "|- f"
};

bool same_sequent(const Sequent& a, const Sequent& b);

using Subst = std::map<std::string, FormulaPtr>; // metavariable -> formula

struct ProofStep {
  int index = 0; // 1-based; steps are numbered consecutively
  RuleId rule = RuleId::Hyp;
  std::vector<int> premises; // step indices, all < index
  FormulaPtr formula;        // the formula this step claims to derive
  Subst subst;               // ax* steps only
  std::optional<int> discharge; // impI: index of the assumption step
  std::string note;
};

struct ProofScript {
  DefEnv env;
  LogicConfig config;
  Sequent goal;
  std::vector<ProofStep> steps;
  std::string source_name;
};

struct CheckError {
  int step = 0; // 0 when the failure is not tied to a step
  std::string kind;
  std::string expected;
  std::string actual;

  std::string message() const;
};

struct StepFailure : Error {
  explicit StepFailure(CheckError e) : Error(e.message()), error(std::move(e)) {}
  CheckError error;
};

struct CheckResult {
  bool ok = false;
  std::vector<Sequent> derived; // one per checked step
  std::optional<CheckError> error;
};

// The closed instance of a provability axiom scheme.
//   S1:   A -> Prov(#A#)
//   S2a:  Prov(#A#) & Prov(#B#) -> Prov(#A & B#)
//   S2b:  Prov(#A & B#) -> Prov(#A#) & Prov(#B#)
//   S3:   Prov(#A#) | Prov(#B#) -> Prov(#A | B#)
//   S4:   Prov(#A | B#) & Prov(#A -> C#) & Prov(#B -> C#) -> Prov(#C#)
//   S5:   Prov(#A#) & Prov(#A -> B#) -> Prov(#B#)
//   Refl: Prov(#A#) -> A
// subst must cover exactly the scheme's metavariables. Refl requires
// config.reflection; the S schemes require config.prov_axioms.
FormulaPtr instantiate_axiom(SchemeId scheme, const Subst& subst, const LogicConfig& config);

// Number of unfold steps the def rule (and goal matching) may take.
inline constexpr int kDefRuleUnfoldBound = 2;

// Derives the sequent for one step given the sequents of all earlier steps.
// Throws StepFailure on any violation.
Sequent check_step(const std::vector<Sequent>& state, const ProofStep& step,
                   const LogicConfig& config, const DefEnv& env);

// Checks every step in order, then matches the final sequent against the goal
// (conclusion up to defeq, hypotheses a subset of the goal's). Deterministic.
CheckResult check_script(const ProofScript& script);

} // namespace ht
