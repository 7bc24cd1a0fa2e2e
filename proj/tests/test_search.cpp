#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "ht/parser.hpp"
#include "ht/search.hpp"
#include "testutil.hpp"

using namespace ht;

namespace {

DefEnv liar_env() {
  std::istringstream in("diag L := Prov(#~@#)\n");
  return parse_defenv(in, "liar");
}

bool universe_has(const std::vector<FormulaPtr>& u, const FormulaPtr& f) {
  return std::any_of(u.begin(), u.end(), [&](const FormulaPtr& g) { return equal(f, g); });
}

// Unit-test bounds: small enough to stay fast, big enough for the liar facts.
SearchBounds small_bounds() { return SearchBounds{2, 10, 64}; }

} // namespace

TEST_CASE("build_universe closes the liar seed") {
  DefEnv env = liar_env();
  SearchBounds b{2, 12, 64};
  auto u = build_universe({parse_formula("L", env)}, env, b);

  for (const char* t : {"L", "~L", "Prov(#~L#)", "Prov(#L#)", "0=1", "Prov(#0=1#)"})
    CHECK_MESSAGE(universe_has(u, parse_formula(t, env)), t);

  // bounds hold everywhere
  for (const auto& f : u) {
    CHECK(f->size() <= b.formula_size);
    CHECK(f->quote_depth() <= b.quote_depth);
  }
}

TEST_CASE("build_universe closes a bare falsum seed at quote depth 1") {
  DefEnv env;
  SearchBounds b{1, 8, 64};
  auto u = build_universe({Formula::falsum()}, env, b);
  for (const char* t : {"0=1", "~0=1", "Prov(#0=1#)"})
    CHECK_MESSAGE(universe_has(u, parse_formula(t)), t);
}

TEST_CASE("build_universe of nothing is nothing") {
  DefEnv env;
  CHECK(build_universe({}, env, small_bounds()).empty());
}

TEST_CASE("universe construction is deterministic") {
  DefEnv env = liar_env();
  auto a = build_universe({parse_formula("L", env)}, env, small_bounds());
  auto b = build_universe({parse_formula("L", env)}, env, small_bounds());
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); i++) CHECK(equal(a[i], b[i]));
}

TEST_CASE("saturation over the liar universe, three configurations") {
  DefEnv env = liar_env();
  SearchBounds b{2, 12, 64};
  auto u = build_universe({parse_formula("L", env)}, env, b);
  auto q = [&](const char* t) { return parse_formula(t, env); };

  SaturationResult ht = saturate(u, ht_config(), env, b);
  CHECK(ht.saturated);
  CHECK(ht.contains(q("~~L")));
  CHECK(ht.contains(q("L -> Prov(#0=1#)")));
  CHECK_FALSE(ht.contains(q("0=1")));
  CHECK_FALSE(ht.contains(q("Prov(#0=1#)")));

  LogicConfig with_refl = ht_config();
  with_refl.reflection = true;
  SaturationResult refl = saturate(u, with_refl, env, b);
  CHECK(refl.contains(q("0=1")));

  LogicConfig with_lem = ht_config();
  with_lem.excluded_middle = true;
  SaturationResult lem = saturate(u, with_lem, env, b);
  CHECK(lem.contains(q("Prov(#0=1#)")));
  CHECK_FALSE(lem.contains(q("0=1")));

  SUBCASE("config monotonicity: every HT theorem survives stronger configs") {
    for (const auto& f : ht.derived) {
      CHECK_MESSAGE(refl.contains(f), f->text());
      CHECK_MESSAGE(lem.contains(f), f->text());
    }
  }
}

TEST_CASE("every derived formula carries a kernel-checkable witness") {
  DefEnv env = liar_env();
  SearchBounds b = small_bounds();
  auto u = build_universe({parse_formula("L", env)}, env, b);
  SaturationResult r = saturate(u, ht_config(), env, b);
  REQUIRE(r.derived.size() > 10);
  for (const auto& f : r.derived) {
    auto script = witness_script(r, f);
    REQUIRE_MESSAGE(script.has_value(), f->text());
    CheckResult check = check_script(*script);
    REQUIRE_MESSAGE(check.ok, f->text() << ": " << check.error->message());
    CHECK(equal(script->goal.concl, f));
  }
}

TEST_CASE("witnesses under stronger configs also check") {
  DefEnv env = liar_env();
  SearchBounds b = small_bounds();
  auto u = build_universe({parse_formula("L", env)}, env, b);
  // every toggle combination that adds rules over the HT baseline, including
  // the explosive ex_falso ones
  for (int mask = 1; mask < 8; mask++) {
    LogicConfig cfg = ht_config();
    cfg.reflection = (mask & 1) != 0;
    cfg.excluded_middle = (mask & 2) != 0;
    cfg.ex_falso = (mask & 4) != 0;
    SaturationResult r = saturate(u, cfg, env, b);
    for (const auto& f : r.derived) {
      auto script = witness_script(r, f);
      REQUIRE(script.has_value());
      CheckResult check = check_script(*script);
      REQUIRE_MESSAGE(check.ok, f->text() << " [mask " << mask
                                          << "]: " << check.error->message());
    }
  }
}

TEST_CASE("saturation is deterministic") {
  DefEnv env = liar_env();
  SearchBounds b = small_bounds();
  auto u = build_universe({parse_formula("L", env)}, env, b);
  SaturationResult a = saturate(u, ht_config(), env, b);
  SaturationResult c = saturate(u, ht_config(), env, b);
  CHECK(a.rounds_used == c.rounds_used);
  REQUIRE(a.derived.size() == c.derived.size());
  for (size_t i = 0; i < a.derived.size(); i++) CHECK(equal(a.derived[i], c.derived[i]));
}

TEST_CASE("prove_bounded reconstructs checkable proofs") {
  DefEnv env = liar_env();
  SearchBounds b = small_bounds();

  auto script = prove_bounded(parse_formula("~~L", env), ht_config(), env, b);
  REQUIRE(script.has_value());
  CHECK(check_script(*script).ok);
  CHECK(script->goal.concl->text() == "~~L");

  CHECK_FALSE(prove_bounded(Formula::falsum(), ht_config(), env, b).has_value());

  // identity implication needs no axioms at all
  DefEnv empty;
  LogicConfig minimal;
  auto ident = prove_bounded(parse_formula("A -> A"), minimal, empty, SearchBounds{1, 6, 16});
  REQUIRE(ident.has_value());
  CHECK(check_script(*ident).ok);
}

TEST_CASE("iteration bound reports unsaturated instead of failing") {
  DefEnv env = liar_env();
  SearchBounds b{2, 10, 1};
  auto u = build_universe({parse_formula("L", env)}, env, SearchBounds{2, 10, 64});
  SaturationResult r = saturate(u, ht_config(), env, b);
  CHECK_FALSE(r.saturated);
  CHECK(r.rounds_used == 1);
}

TEST_CASE("bounds are validated") {
  DefEnv env;
  CHECK_THROWS_AS(build_universe({}, env, SearchBounds{0, 4, 4}), Error);
  CHECK_THROWS_AS(build_universe({}, env, SearchBounds{1, 0, 4}), Error);
  CHECK_THROWS_AS(saturate({}, ht_config(), env, SearchBounds{1, 4, 0}), Error);
}

TEST_CASE("derived sets grow weakly with the universe") {
  DefEnv env = liar_env();
  auto u_small = build_universe({parse_formula("L", env)}, env, SearchBounds{2, 8, 64});
  auto u_big = build_universe({parse_formula("L", env)}, env, SearchBounds{2, 10, 64});
  SaturationResult small = saturate(u_small, ht_config(), env, SearchBounds{2, 8, 64});
  SaturationResult big = saturate(u_big, ht_config(), env, SearchBounds{2, 10, 64});
  for (const auto& f : small.derived) CHECK_MESSAGE(big.contains(f), f->text());
}
