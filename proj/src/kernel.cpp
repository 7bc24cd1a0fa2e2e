#include "ht/kernel.hpp"

#include <algorithm>

namespace ht {

std::string rule_name(RuleId r) {
  switch (r) {
    case RuleId::Hyp: return "assume";
    case RuleId::AndI: return "andI";
    case RuleId::AndE1: return "andE1";
    case RuleId::AndE2: return "andE2";
    case RuleId::OrI1: return "orI1";
    case RuleId::OrI2: return "orI2";
    case RuleId::OrE: return "orE";
    case RuleId::ImpI: return "impI";
    case RuleId::ImpE: return "impE";
    case RuleId::Def: return "def";
    case RuleId::Efq: return "efq";
    case RuleId::Lem: return "lem";
    case RuleId::AxS1: return "axS1";
    case RuleId::AxS2a: return "axS2a";
    case RuleId::AxS2b: return "axS2b";
    case RuleId::AxS3: return "axS3";
    case RuleId::AxS4: return "axS4";
    case RuleId::AxS5: return "axS5";
    case RuleId::AxRefl: return "axRefl";
  }
  return "?";
}

std::optional<RuleId> rule_from_name(const std::string& s) {
  static const std::map<std::string, RuleId> table = {
      {"assume", RuleId::Hyp},  {"hyp", RuleId::Hyp},     {"andI", RuleId::AndI},
      {"andE1", RuleId::AndE1}, {"andE2", RuleId::AndE2}, {"orI1", RuleId::OrI1},
      {"orI2", RuleId::OrI2},   {"orE", RuleId::OrE},     {"impI", RuleId::ImpI},
      {"impE", RuleId::ImpE},   {"def", RuleId::Def},     {"efq", RuleId::Efq},
      {"lem", RuleId::Lem},     {"axS1", RuleId::AxS1},   {"axS2a", RuleId::AxS2a},
      {"axS2b", RuleId::AxS2b}, {"axS3", RuleId::AxS3},   {"axS4", RuleId::AxS4},
      {"axS5", RuleId::AxS5},   {"axRefl", RuleId::AxRefl}};
  auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::string scheme_name(SchemeId s) {
  switch (s) {
    case SchemeId::S1: return "S1";
    case SchemeId::S2a: return "S2a";
    case SchemeId::S2b: return "S2b";
    case SchemeId::S3: return "S3";
    case SchemeId::S4: return "S4";
    case SchemeId::S5: return "S5";
    case SchemeId::Refl: return "Refl";
  }
  return "?";
}

bool Sequent::has_hyp(const FormulaPtr& f) const {
  return std::any_of(hyps.begin(), hyps.end(),
                     [&](const FormulaPtr& h) { return equal(h, f); });
}

std::string Sequent::text() const {
  std::string out;
  if (!hyps.empty()) {
    out += "[";
    for (size_t i = 0; i < hyps.size(); i++) {
      if (i) out += ", ";
      out += hyps[i]->text();
    }
    out += "] ";
  }
  out += "|- " + concl->text();
  return out;
}

bool same_sequent(const Sequent& a, const Sequent& b) {
  if (!equal(a.concl, b.concl)) return false;
  if (a.hyps.size() != b.hyps.size()) return false;
  for (size_t i = 0; i < a.hyps.size(); i++)
    if (!equal(a.hyps[i], b.hyps[i])) return false;
  return true;
}

std::string CheckError::message() const {
  std::string out = kind;
  if (step > 0) out = "step " + std::to_string(step) + ": " + out;
  if (!expected.empty()) out += "; expected " + expected;
  if (!actual.empty()) out += "; got " + actual;
  return out;
}

namespace {

[[noreturn]] void fail(int step, std::string kind, std::string expected = "",
                       std::string actual = "") {
  throw StepFailure(CheckError{step, std::move(kind), std::move(expected), std::move(actual)});
}

const FormulaPtr& subst_value(const Subst& subst, const char* var, SchemeId scheme) {
  auto it = subst.find(var);
  if (it == subst.end())
    throw StepFailure(CheckError{0, "bad-subst",
                                 scheme_name(scheme) + " needs metavariable " + var, ""});
  return it->second;
}

void require_vars(const Subst& subst, std::initializer_list<const char*> vars, SchemeId scheme) {
  if (subst.size() != vars.size()) {
    std::string names;
    for (const char* v : vars) names += names.empty() ? v : std::string(", ") + v;
    throw StepFailure(CheckError{0, "bad-subst",
                                 scheme_name(scheme) + " takes exactly {" + names + "}",
                                 std::to_string(subst.size()) + " metavariables given"});
  }
  for (const char* v : vars) subst_value(subst, v, scheme);
}

// Ordered union, duplicates dropped by structural equality.
std::vector<FormulaPtr> merge_hyps(const std::vector<const Sequent*>& premises) {
  std::vector<FormulaPtr> out;
  for (const Sequent* s : premises)
    for (const FormulaPtr& h : s->hyps) {
      bool present = std::any_of(out.begin(), out.end(),
                                 [&](const FormulaPtr& g) { return equal(g, h); });
      if (!present) out.push_back(h);
    }
  return out;
}

std::vector<FormulaPtr> without(const std::vector<FormulaPtr>& hyps, const FormulaPtr& f) {
  std::vector<FormulaPtr> out;
  for (const FormulaPtr& h : hyps)
    if (!equal(h, f)) out.push_back(h);
  return out;
}

} // namespace

FormulaPtr instantiate_axiom(SchemeId scheme, const Subst& subst, const LogicConfig& config) {
  if (scheme == SchemeId::Refl) {
    if (!config.reflection)
      throw StepFailure(CheckError{0, "rule-disabled", "reflection", "axRefl used"});
  } else if (!config.prov_axioms) {
    throw StepFailure(CheckError{0, "rule-disabled", "prov_axioms",
                                 "ax" + scheme_name(scheme) + " used"});
  }

  auto P = [](const FormulaPtr& f) { return Formula::prov(f); };
  switch (scheme) {
    case SchemeId::S1: {
      require_vars(subst, {"A"}, scheme);
      const FormulaPtr& a = subst_value(subst, "A", scheme);
      return Formula::imp(a, P(a));
    }
    case SchemeId::S2a: {
      require_vars(subst, {"A", "B"}, scheme);
      const FormulaPtr& a = subst_value(subst, "A", scheme);
      const FormulaPtr& b = subst_value(subst, "B", scheme);
      return Formula::imp(Formula::conj(P(a), P(b)), P(Formula::conj(a, b)));
    }
    case SchemeId::S2b: {
      require_vars(subst, {"A", "B"}, scheme);
      const FormulaPtr& a = subst_value(subst, "A", scheme);
      const FormulaPtr& b = subst_value(subst, "B", scheme);
      return Formula::imp(P(Formula::conj(a, b)), Formula::conj(P(a), P(b)));
    }
    case SchemeId::S3: {
      require_vars(subst, {"A", "B"}, scheme);
      const FormulaPtr& a = subst_value(subst, "A", scheme);
      const FormulaPtr& b = subst_value(subst, "B", scheme);
      return Formula::imp(Formula::disj(P(a), P(b)), P(Formula::disj(a, b)));
    }
    case SchemeId::S4: {
      require_vars(subst, {"A", "B", "C"}, scheme);
      const FormulaPtr& a = subst_value(subst, "A", scheme);
      const FormulaPtr& b = subst_value(subst, "B", scheme);
      const FormulaPtr& c = subst_value(subst, "C", scheme);
      FormulaPtr ante = Formula::conj(
          Formula::conj(P(Formula::disj(a, b)), P(Formula::imp(a, c))), P(Formula::imp(b, c)));
      return Formula::imp(ante, P(c));
    }
    case SchemeId::S5: {
      require_vars(subst, {"A", "B"}, scheme);
      const FormulaPtr& a = subst_value(subst, "A", scheme);
      const FormulaPtr& b = subst_value(subst, "B", scheme);
      return Formula::imp(Formula::conj(P(a), P(Formula::imp(a, b))), P(b));
    }
    case SchemeId::Refl: {
      require_vars(subst, {"A"}, scheme);
      const FormulaPtr& a = subst_value(subst, "A", scheme);
      return Formula::imp(P(a), a);
    }
  }
  throw Error("unreachable");
}

namespace {

std::optional<SchemeId> rule_scheme(RuleId r) {
  switch (r) {
    case RuleId::AxS1: return SchemeId::S1;
    case RuleId::AxS2a: return SchemeId::S2a;
    case RuleId::AxS2b: return SchemeId::S2b;
    case RuleId::AxS3: return SchemeId::S3;
    case RuleId::AxS4: return SchemeId::S4;
    case RuleId::AxS5: return SchemeId::S5;
    case RuleId::AxRefl: return SchemeId::Refl;
    default: return std::nullopt;
  }
}

void require_premises(const ProofStep& step, size_t n) {
  if (step.premises.size() != n)
    fail(step.index, "premise-mismatch",
         rule_name(step.rule) + " takes " + std::to_string(n) + " premises",
         std::to_string(step.premises.size()) + " given");
}

} // namespace

Sequent check_step(const std::vector<Sequent>& state, const ProofStep& step,
                   const LogicConfig& config, const DefEnv& env) {
  // Resolve premises first; indices are 1-based and must point backwards.
  std::vector<const Sequent*> prem;
  prem.reserve(step.premises.size());
  for (int p : step.premises) {
    if (p < 1 || p > static_cast<int>(state.size()) || (step.index > 0 && p >= step.index))
      fail(step.index, "bad-premise", "index in [1, " + std::to_string(step.index - 1) + "]",
           std::to_string(p));
    prem.push_back(&state[p - 1]);
  }

  if (auto scheme = rule_scheme(step.rule)) {
    require_premises(step, 0);
    FormulaPtr instance;
    try {
      instance = instantiate_axiom(*scheme, step.subst, config);
    } catch (const StepFailure& f) {
      CheckError e = f.error;
      e.step = step.index;
      throw StepFailure(e);
    }
    if (!equal(instance, step.formula))
      fail(step.index, "premise-mismatch", instance->text(), step.formula->text());
    return Sequent{{}, instance};
  }

  switch (step.rule) {
    case RuleId::Hyp:
      // A fresh assumption: [A] |- A. Undischarged assumptions surface as the
      // final sequent's hypotheses.
      require_premises(step, 0);
      return Sequent{{step.formula}, step.formula};

    case RuleId::AndI: {
      require_premises(step, 2);
      FormulaPtr want = Formula::conj(prem[0]->concl, prem[1]->concl);
      if (!equal(want, step.formula))
        fail(step.index, "premise-mismatch", want->text(), step.formula->text());
      return Sequent{merge_hyps(prem), want};
    }

    case RuleId::AndE1:
    case RuleId::AndE2: {
      require_premises(step, 1);
      const FormulaPtr& c = prem[0]->concl;
      if (c->kind() != Kind::And)
        fail(step.index, "premise-mismatch", "a conjunction", c->text());
      const FormulaPtr& part = step.rule == RuleId::AndE1 ? c->left() : c->right();
      if (!equal(part, step.formula))
        fail(step.index, "premise-mismatch", part->text(), step.formula->text());
      return Sequent{prem[0]->hyps, part};
    }

    case RuleId::OrI1:
    case RuleId::OrI2: {
      require_premises(step, 1);
      if (step.formula->kind() != Kind::Or)
        fail(step.index, "premise-mismatch", "a disjunction", step.formula->text());
      const FormulaPtr& side =
          step.rule == RuleId::OrI1 ? step.formula->left() : step.formula->right();
      if (!equal(side, prem[0]->concl))
        fail(step.index, "premise-mismatch", prem[0]->concl->text(), side->text());
      return Sequent{prem[0]->hyps, step.formula};
    }

    case RuleId::OrE: {
      require_premises(step, 3);
      const FormulaPtr& major = prem[0]->concl;
      if (major->kind() != Kind::Or)
        fail(step.index, "premise-mismatch", "a disjunction major premise", major->text());
      if (!equal(prem[1]->concl, step.formula) || !equal(prem[2]->concl, step.formula))
        fail(step.index, "premise-mismatch",
             "both case premises concluding " + step.formula->text(),
             prem[1]->concl->text() + " / " + prem[2]->concl->text());
      Sequent left{without(prem[1]->hyps, major->left()), step.formula};
      Sequent right{without(prem[2]->hyps, major->right()), step.formula};
      std::vector<const Sequent*> parts{prem[0], &left, &right};
      return Sequent{merge_hyps(parts), step.formula};
    }

    case RuleId::ImpI: {
      require_premises(step, 1);
      if (step.formula->kind() != Kind::Imp)
        fail(step.index, "premise-mismatch", "an implication", step.formula->text());
      const FormulaPtr& ante = step.formula->left();
      if (!equal(step.formula->right(), prem[0]->concl))
        fail(step.index, "premise-mismatch", prem[0]->concl->text(),
             step.formula->right()->text());
      if (step.discharge) {
        int d = *step.discharge;
        if (d < 1 || d >= step.index)
          fail(step.index, "discharge-mismatch", "an earlier assumption step",
               std::to_string(d));
        if (!equal(state[d - 1].concl, ante))
          fail(step.index, "discharge-mismatch", ante->text(), state[d - 1].concl->text());
      }
      // Vacuous discharge is allowed: a proof of B not using A also proves B
      // from A.
      return Sequent{without(prem[0]->hyps, ante), step.formula};
    }

    case RuleId::ImpE: {
      require_premises(step, 2);
      // Accept minor/major in either order.
      for (int minor = 0; minor < 2; minor++) {
        const Sequent* mn = prem[minor];
        const Sequent* mj = prem[1 - minor];
        if (mj->concl->kind() == Kind::Imp && equal(mj->concl->left(), mn->concl) &&
            equal(mj->concl->right(), step.formula)) {
          std::vector<const Sequent*> parts{prem[0], prem[1]};
          return Sequent{merge_hyps(parts), step.formula};
        }
      }
      fail(step.index, "premise-mismatch",
           "premises matching A and A -> " + step.formula->text(),
           prem[0]->concl->text() + " / " + prem[1]->concl->text());
    }

    case RuleId::Def: {
      require_premises(step, 1);
      if (!defeq(prem[0]->concl, step.formula, env, kDefRuleUnfoldBound))
        fail(step.index, "premise-mismatch",
             "a formula definitionally equal to " + prem[0]->concl->text(),
             step.formula->text());
      return Sequent{prem[0]->hyps, step.formula};
    }

    case RuleId::Efq: {
      if (!config.ex_falso) fail(step.index, "rule-disabled", "ex_falso", "efq used");
      require_premises(step, 1);
      if (prem[0]->concl->kind() != Kind::Falsum)
        fail(step.index, "premise-mismatch", "0=1", prem[0]->concl->text());
      return Sequent{prem[0]->hyps, step.formula};
    }

    case RuleId::Lem: {
      if (!config.excluded_middle)
        fail(step.index, "rule-disabled", "excluded_middle", "lem used");
      require_premises(step, 0);
      if (step.formula->kind() != Kind::Or || !equal(step.formula->right(), neg(step.formula->left())))
        fail(step.index, "premise-mismatch", "a formula of shape A | ~A",
             step.formula->text());
      return Sequent{{}, step.formula};
    }

    default:
      break;
  }
  fail(step.index, "premise-mismatch", "a known rule", rule_name(step.rule));
}

CheckResult check_script(const ProofScript& script) {
  CheckResult result;
  try {
    for (size_t i = 0; i < script.steps.size(); i++) {
      const ProofStep& step = script.steps[i];
      if (step.index != static_cast<int>(i) + 1)
        fail(step.index, "bad-step-number", std::to_string(i + 1), std::to_string(step.index));
      result.derived.push_back(check_step(result.derived, step, script.config, script.env));
    }

    if (script.steps.empty())
      throw StepFailure(CheckError{0, "goal-mismatch", script.goal.text(), "empty script"});

    const Sequent& last = result.derived.back();
    if (!defeq(last.concl, script.goal.concl, script.env, kDefRuleUnfoldBound))
      throw StepFailure(CheckError{static_cast<int>(script.steps.size()), "goal-mismatch",
                                   script.goal.text(), last.text()});
    for (const FormulaPtr& h : last.hyps) {
      bool covered = std::any_of(
          script.goal.hyps.begin(), script.goal.hyps.end(),
          [&](const FormulaPtr& g) { return defeq(h, g, script.env, kDefRuleUnfoldBound); });
      if (!covered)
        throw StepFailure(CheckError{static_cast<int>(script.steps.size()), "goal-mismatch",
                                     script.goal.text(),
                                     "undischarged hypothesis " + h->text()});
    }
    result.ok = true;
  } catch (const StepFailure& f) {
    result.ok = false;
    result.error = f.error;
  }
  return result;
}

} // namespace ht
