#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "ht/kernel.hpp"
#include "ht/parser.hpp"
#include "ht/script.hpp"
#include "testutil.hpp"

using namespace ht;

namespace {

DefEnv liar_env() {
  std::istringstream in("diag L := Prov(#~@#)\n");
  return parse_defenv(in, "liar");
}

ProofStep step(int index, RuleId rule, std::vector<int> premises, FormulaPtr f,
               Subst subst = {}, std::optional<int> discharge = std::nullopt) {
  ProofStep s;
  s.index = index;
  s.rule = rule;
  s.premises = std::move(premises);
  s.formula = std::move(f);
  s.subst = std::move(subst);
  s.discharge = discharge;
  return s;
}

} // namespace

TEST_CASE("axiom schemes instantiate to their closed forms") {
  DefEnv env = liar_env();
  LogicConfig cfg = ht_config();
  cfg.reflection = true;

  CHECK(instantiate_axiom(SchemeId::S1, {{"A", Formula::name("L")}}, cfg)->text() ==
        "L -> Prov(#L#)");

  FormulaPtr land = parse_formula("L & ~L", env);
  CHECK(instantiate_axiom(SchemeId::S5, {{"A", land}, {"B", Formula::falsum()}}, cfg)->text() ==
        "Prov(#L & ~L#) & Prov(#~(L & ~L)#) -> Prov(#0=1#)");

  FormulaPtr f = Formula::falsum();
  CHECK(instantiate_axiom(SchemeId::S2a, {{"A", f}, {"B", f}}, cfg)->text() ==
        "Prov(#0=1#) & Prov(#0=1#) -> Prov(#0=1 & 0=1#)");

  CHECK(instantiate_axiom(SchemeId::S2b, {{"A", f}, {"B", f}}, cfg)->text() ==
        "Prov(#0=1 & 0=1#) -> Prov(#0=1#) & Prov(#0=1#)");
  CHECK(instantiate_axiom(SchemeId::S3, {{"A", Formula::atom("A")}, {"B", Formula::atom("B")}}, cfg)
            ->text() == "Prov(#A#) | Prov(#B#) -> Prov(#A | B#)");
  CHECK(instantiate_axiom(SchemeId::S4,
                          {{"A", Formula::atom("A")},
                           {"B", Formula::atom("B")},
                           {"C", Formula::atom("C")}},
                          cfg)
            ->text() ==
        "Prov(#A | B#) & Prov(#A -> C#) & Prov(#B -> C#) -> Prov(#C#)");
  // the negation convention folds `Prov(#0=1#) -> 0=1` into a printed negation
  CHECK(instantiate_axiom(SchemeId::Refl, {{"A", f}}, cfg)->text() == "~Prov(#0=1#)");
  CHECK(equal(instantiate_axiom(SchemeId::Refl, {{"A", f}}, cfg),
              parse_formula("Prov(#0=1#) -> 0=1")));
}

TEST_CASE("axiom instantiation errors") {
  LogicConfig cfg = ht_config();
  FormulaPtr a = Formula::atom("A");

  CHECK_THROWS_AS(instantiate_axiom(SchemeId::S1, {}, cfg), StepFailure);
  CHECK_THROWS_AS(instantiate_axiom(SchemeId::S1, {{"A", a}, {"B", a}}, cfg), StepFailure);
  CHECK_THROWS_AS(instantiate_axiom(SchemeId::S5, {{"A", a}}, cfg), StepFailure);

  // gates
  CHECK_THROWS_AS(instantiate_axiom(SchemeId::Refl, {{"A", a}}, cfg), StepFailure);
  LogicConfig minimal;
  CHECK_THROWS_AS(instantiate_axiom(SchemeId::S1, {{"A", a}}, minimal), StepFailure);
}

TEST_CASE("check_step on the core rules") {
  DefEnv env = liar_env();
  LogicConfig cfg = ht_config();

  std::vector<Sequent> state;
  state.push_back(check_step(state, step(1, RuleId::Hyp, {}, Formula::name("L")), cfg, env));
  CHECK(state[0].text() == "[L] |- L");

  state.push_back(check_step(
      state, step(2, RuleId::AxS1, {}, parse_formula("L -> Prov(#L#)", env),
                  {{"A", Formula::name("L")}}),
      cfg, env));
  CHECK(state[1].hyps.empty());

  Sequent got = check_step(state, step(3, RuleId::ImpE, {1, 2}, parse_formula("Prov(#L#)", env)),
                           cfg, env);
  CHECK(got.text() == "[L] |- Prov(#L#)");

  // premise order is free
  Sequent swapped = check_step(
      state, step(3, RuleId::ImpE, {2, 1}, parse_formula("Prov(#L#)", env)), cfg, env);
  CHECK(swapped.text() == got.text());
}

TEST_CASE("disabled rules name the missing toggle") {
  DefEnv env;
  LogicConfig minimal;
  std::vector<Sequent> state;
  state.push_back(check_step(state, step(1, RuleId::Hyp, {}, Formula::falsum()), minimal, env));
  try {
    check_step(state, step(2, RuleId::Efq, {1}, Formula::atom("A")), minimal, env);
    CHECK(false);
  } catch (const StepFailure& f) {
    CHECK(f.error.kind == "rule-disabled");
    CHECK(f.error.expected == "ex_falso");
    CHECK(f.error.step == 2);
  }
  CHECK_THROWS_AS(
      check_step(state, step(2, RuleId::Lem, {}, parse_formula("A | ~A")), minimal, env),
      StepFailure);
}

TEST_CASE("hypothesis management: discharge and case splits") {
  DefEnv env;
  LogicConfig cfg{true, true, false, false};
  std::vector<Sequent> state;
  auto push = [&](ProofStep s) { state.push_back(check_step(state, s, cfg, env)); };

  // commutativity of disjunction via a case split
  push(step(1, RuleId::Hyp, {}, parse_formula("A | B")));
  push(step(2, RuleId::Hyp, {}, parse_formula("A")));
  push(step(3, RuleId::OrI2, {2}, parse_formula("B | A")));
  push(step(4, RuleId::Hyp, {}, parse_formula("B")));
  push(step(5, RuleId::OrI1, {4}, parse_formula("B | A")));
  push(step(6, RuleId::OrE, {1, 3, 5}, parse_formula("B | A")));
  CHECK(state[5].text() == "[A | B] |- B | A");

  push(step(7, RuleId::ImpI, {6}, parse_formula("A | B -> B | A"), {}, 1));
  CHECK(state[6].text() == "|- A | B -> B | A");

  // vacuous discharge is fine
  push(step(8, RuleId::Hyp, {}, parse_formula("C")));
  push(step(9, RuleId::ImpI, {8}, parse_formula("D -> C")));
  CHECK(state[8].text() == "[C] |- D -> C");

  // discharge annotation must match the antecedent
  CHECK_THROWS_AS(push(step(10, RuleId::ImpI, {8}, parse_formula("D -> C"), {}, 1)), StepFailure);
}

TEST_CASE("premise mismatches are reported with both sides") {
  DefEnv env;
  LogicConfig cfg;
  std::vector<Sequent> state;
  state.push_back(check_step(state, step(1, RuleId::Hyp, {}, parse_formula("A")), cfg, env));
  try {
    check_step(state, step(2, RuleId::AndE1, {1}, parse_formula("A")), cfg, env);
    CHECK(false);
  } catch (const StepFailure& f) {
    CHECK(f.error.kind == "premise-mismatch");
    CHECK(f.error.expected == "a conjunction");
    CHECK(f.error.actual == "A");
  }
  CHECK_THROWS_AS(check_step(state, step(2, RuleId::ImpE, {1, 1}, parse_formula("B")), cfg, env),
                  StepFailure);
  CHECK_THROWS_AS(check_step(state, step(2, RuleId::AndI, {1, 7}, parse_formula("A & A")), cfg, env),
                  StepFailure);
}

TEST_CASE("the def rule moves along definitional equality, bound 2") {
  DefEnv env = liar_env();
  LogicConfig cfg = ht_config();
  std::vector<Sequent> state;
  state.push_back(check_step(state, step(1, RuleId::Hyp, {}, Formula::name("L")), cfg, env));
  Sequent s = check_step(state, step(2, RuleId::Def, {1}, parse_formula("Prov(#~L#)", env)), cfg, env);
  CHECK(s.text() == "[L] |- Prov(#~L#)");
  CHECK_THROWS_AS(check_step(state, step(2, RuleId::Def, {1}, parse_formula("Prov(#L#)", env)),
                             cfg, env),
                  StepFailure);
}

TEST_CASE("check_script verdicts") {
  DefEnv env = liar_env();

  ProofScript script;
  script.env = env;
  script.config = ht_config();
  script.goal = Sequent{{}, parse_formula("~~L", env)};
  script.steps = {
      step(1, RuleId::Hyp, {}, parse_formula("~L", env)),
      step(2, RuleId::AxS1, {}, parse_formula("~L -> Prov(#~L#)", env),
           {{"A", parse_formula("~L", env)}}),
      step(3, RuleId::ImpE, {1, 2}, parse_formula("Prov(#~L#)", env)),
      step(4, RuleId::Def, {3}, parse_formula("L", env)),
      step(5, RuleId::ImpE, {4, 1}, Formula::falsum()),
      step(6, RuleId::ImpI, {5}, parse_formula("~~L", env), {}, 1),
  };

  CheckResult ok = check_script(script);
  REQUIRE(ok.ok);
  CHECK(ok.derived.size() == 6);
  CHECK(ok.derived.back().text() == "|- ~~L");

  SUBCASE("corrupting a premise index rejects at that step") {
    ProofScript bad = script;
    bad.steps[2].premises = {1, 1};
    CheckResult r = check_script(bad);
    REQUIRE_FALSE(r.ok);
    CHECK(r.error->step == 3);
  }
  SUBCASE("goal mismatch") {
    ProofScript bad = script;
    bad.goal.concl = parse_formula("~L", env);
    CheckResult r = check_script(bad);
    REQUIRE_FALSE(r.ok);
    CHECK(r.error->kind == "goal-mismatch");
  }
  SUBCASE("undischarged hypotheses must be covered by the goal") {
    ProofScript bad = script;
    bad.steps.resize(5); // stop before the discharge
    bad.goal = Sequent{{}, Formula::falsum()};
    CheckResult r = check_script(bad);
    REQUIRE_FALSE(r.ok);
    ProofScript good = bad;
    good.goal = Sequent{{parse_formula("~L", env)}, Formula::falsum()};
    CHECK(check_script(good).ok);
  }
  SUBCASE("determinism: checking twice gives identical results") {
    CheckResult a = check_script(script);
    CheckResult b = check_script(script);
    CHECK(a.ok == b.ok);
    REQUIRE(a.derived.size() == b.derived.size());
    for (size_t i = 0; i < a.derived.size(); i++)
      CHECK(a.derived[i].text() == b.derived[i].text());
  }
}

TEST_CASE("weakening: extra goal hypotheses never hurt") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; trial++) {
    ProofScript script = testutil::random_classical_script(rng, 12);
    REQUIRE(check_script(script).ok);
    script.goal.hyps.push_back(Formula::atom("Zunused"));
    CHECK(check_script(script).ok);
  }
}

TEST_CASE("config monotonicity on generated scripts") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; trial++) {
    ProofScript script = testutil::random_classical_script(rng, 10);
    // count the toggles the script actually needs
    LogicConfig used;
    for (const auto& s : script.steps) {
      if (s.rule == RuleId::Efq) used.ex_falso = true;
      if (s.rule == RuleId::Lem) used.excluded_middle = true;
    }
    for (int mask = 0; mask < 16; mask++) {
      LogicConfig cfg{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0, (mask & 8) != 0};
      if (!cfg.superset_of(used)) continue;
      ProofScript variant = script;
      variant.config = cfg;
      CHECK(check_script(variant).ok);
    }
  }
}

TEST_CASE("classical soundness oracle on random derivations") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 50; trial++) {
    ProofScript script = testutil::random_classical_script(rng, 14);
    CheckResult r = check_script(script);
    REQUIRE(r.ok);
    CHECK_MESSAGE(testutil::classically_valid(script.goal), script.goal.text());
  }
}

TEST_CASE("sequent hypothesis lists are duplicate-free unions in premise order") {
  DefEnv env;
  LogicConfig cfg;
  std::vector<Sequent> state;
  auto push = [&](ProofStep s) { state.push_back(check_step(state, s, cfg, env)); };
  push(step(1, RuleId::Hyp, {}, parse_formula("A")));
  push(step(2, RuleId::Hyp, {}, parse_formula("B")));
  push(step(3, RuleId::Hyp, {}, parse_formula("A")));
  push(step(4, RuleId::AndI, {1, 2}, parse_formula("A & B")));
  push(step(5, RuleId::AndI, {4, 3}, parse_formula("(A & B) & A")));
  CHECK(state[4].text() == "[A, B] |- A & B & A");
}
