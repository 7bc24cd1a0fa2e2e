#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <thread>

#include "ht/parser.hpp"
#include "ht/report.hpp"
#include "ht/script.hpp"
#include "testutil.hpp"

using namespace ht;
namespace fs = std::filesystem;

namespace {

std::map<std::string, std::string> parse_overrides(const std::string& flags) {
  std::map<std::string, std::string> out;
  std::istringstream in(flags);
  std::string kv;
  while (in >> kv) {
    size_t eq = kv.find('=');
    REQUIRE(eq != std::string::npos);
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

std::vector<fs::path> bundled_scripts() {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(testutil::scripts_dir()))
    if (entry.path().extension() == ".ht") out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

TEST_CASE("every bundled script matches its declared verdict") {
  auto scripts = bundled_scripts();
  REQUIRE(scripts.size() >= 8);
  for (const auto& path : scripts) {
    INFO(path.string());
    ScriptFile file = load_script(path.string());
    CheckResult result = check_script(file.script);

    std::string expect = "ok";
    if (auto it = file.annotations.find("expect"); it != file.annotations.end())
      expect = it->second;
    CHECK(result.ok == (expect == "ok"));

    // and the header-declared failing configuration flips the verdict
    if (auto it = file.annotations.find("fails-under"); it != file.annotations.end()) {
      ProofScript flipped = file.script;
      flipped.config = apply_config_overrides(flipped.config, parse_overrides(it->second));
      CHECK_FALSE(check_script(flipped).ok);
    }
  }
}

TEST_CASE("the liar scripts derive the advertised sequents") {
  std::string dir = testutil::scripts_dir();

  ScriptFile a = load_script(dir + "/liar_entails_prov_contradiction.ht");
  CheckResult ra = check_script(a.script);
  REQUIRE(ra.ok);
  CHECK(ra.derived.back().text() == "|- L -> Prov(#0=1#)");

  ScriptFile b = load_script(dir + "/liar_double_negation.ht");
  CheckResult rb = check_script(b.script);
  REQUIRE(rb.ok);
  CHECK(rb.derived.back().text() == "|- ~~L");
}

TEST_CASE("reflection and excluded middle are load-bearing, not decorative") {
  std::string dir = testutil::scripts_dir();

  ScriptFile refl = load_script(dir + "/reflection_inconsistency.ht");
  REQUIRE(check_script(refl.script).ok);
  ProofScript plain = refl.script;
  plain.config.reflection = false;
  CheckResult r = check_script(plain);
  REQUIRE_FALSE(r.ok);
  CHECK(r.error->kind == "rule-disabled");
  CHECK(r.error->expected == "reflection");
  CHECK(rule_name(plain.steps[r.error->step - 1].rule) == "axRefl");

  ScriptFile lem = load_script(dir + "/lem_proves_prov_falsum.ht");
  REQUIRE(check_script(lem.script).ok);
  ProofScript nolem = lem.script;
  nolem.config.excluded_middle = false;
  CheckResult r2 = check_script(nolem);
  REQUIRE_FALSE(r2.ok);
  CHECK(r2.error->expected == "excluded_middle");
  CHECK(rule_name(nolem.steps[r2.error->step - 1].rule) == "lem");
}

TEST_CASE("script parse errors carry positions; config lines are validated") {
  std::istringstream bad_rule(
      "goal |- A\n"
      "1. frobnicate : A\n");
  CHECK_THROWS_AS(parse_script(bad_rule, "test", ""), ParseError);

  std::istringstream bad_config(
      "config ex_falso=maybe\n"
      "goal |- A\n");
  CHECK_THROWS_AS(parse_script(bad_config, "test", ""), ParseError);

  std::istringstream no_goal("1. assume : A\n");
  CHECK_THROWS_AS(parse_script(no_goal, "test", ""), ParseError);

  std::istringstream bad_index(
      "goal |- A\n"
      "2. assume : A\n");
  ScriptFile f = parse_script(bad_index, "test", "");
  CheckResult r = check_script(f.script);
  REQUIRE_FALSE(r.ok);
  CHECK(r.error->kind == "bad-step-number");
}

TEST_CASE("goals may declare hypotheses") {
  std::istringstream in(
      "goal [A, B] |- A & B\n"
      "1. assume : A\n"
      "2. assume : B\n"
      "3. andI [1, 2] : A & B\n");
  ScriptFile f = parse_script(in, "test", "");
  CHECK(f.script.goal.hyps.size() == 2);
  CHECK(check_script(f.script).ok);

  // a goal hypothesis the proof does not use is harmless weakening
  std::istringstream wider(
      "goal [A, B, C] |- A & B\n"
      "1. assume : A\n"
      "2. assume : B\n"
      "3. andI [1, 2] : A & B\n");
  CHECK(check_script(parse_script(wider, "test", "").script).ok);

  // but an assumption the goal does not cover is rejected
  std::istringstream narrower(
      "goal [A] |- A & B\n"
      "1. assume : A\n"
      "2. assume : B\n"
      "3. andI [1, 2] : A & B\n");
  CheckResult r = check_script(parse_script(narrower, "test", "").script);
  REQUIRE_FALSE(r.ok);
  CHECK(r.error->kind == "goal-mismatch");
}

TEST_CASE("subst clauses parse with commas and nested formulas") {
  std::istringstream in(
      "config prov_axioms=true\n"
      "goal |- Prov(#A | B#) & Prov(#A -> C#) & Prov(#B -> C#) -> Prov(#C#)\n"
      "1. axS4 : Prov(#A | B#) & Prov(#A -> C#) & Prov(#B -> C#) -> Prov(#C#)"
      "  (subst A=A, B=B, C=C)\n");
  ScriptFile f = parse_script(in, "test", "");
  REQUIRE(f.script.steps.size() == 1);
  CHECK(f.script.steps[0].subst.size() == 3);
  CHECK(check_script(f.script).ok);
}

TEST_CASE("render/parse round trip preserves the verdict and the sequents") {
  std::string dir = testutil::scripts_dir();
  struct Case {
    const char* script;
    const char* env;
  };
  for (auto [name, env_file] : {Case{"liar_double_negation.ht", "liar.env"},
                                Case{"variant_liar_negation.ht", "liar2.env"}}) {
    ScriptFile file = load_script(dir + "/" + name);
    std::string rendered = render_script(file.script, env_file);
    std::istringstream in(rendered);
    ScriptFile again = parse_script(in, "rendered", dir);
    CheckResult a = check_script(file.script);
    CheckResult b = check_script(again.script);
    REQUIRE(a.ok);
    REQUIRE(b.ok);
    CHECK(a.derived.back().text() == b.derived.back().text());
  }
}

TEST_CASE("JSON reports are schema-stable and deterministic") {
  std::string dir = testutil::scripts_dir();
  ScriptFile file = load_script(dir + "/liar_double_negation.ht");
  CheckResult result = check_script(file.script);

  auto j1 = check_report(file.script, result, "liar_double_negation.ht");
  auto j2 = check_report(file.script, check_script(file.script), "liar_double_negation.ht");
  CHECK(j1.dump() == j2.dump());
  CHECK(j1["status"] == "ok");
  CHECK(j1["goal"] == "|- ~~L");
  CHECK(j1["steps"].size() == file.script.steps.size());

  ScriptFile bad = load_script(dir + "/efq_under_minimal.ht");
  auto j3 = check_report(bad.script, check_script(bad.script), "efq_under_minimal.ht");
  CHECK(j3["status"] == "rejected");
  CHECK(j3["error"]["kind"] == "rule-disabled");
  CHECK(j3["error"]["expected"] == "ex_falso");
  CHECK(j3["error"]["step"] == 2);
}

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(HT_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

} // namespace

TEST_CASE("cli exit codes: 0 checked, 1 rejected, 2 unusable input") {
  std::string dir = testutil::scripts_dir();
  // every bundled script exits with the code its header declares
  for (const auto& path : bundled_scripts()) {
    ScriptFile file = load_script(path.string());
    std::string expect = "ok";
    if (auto it = file.annotations.find("expect"); it != file.annotations.end())
      expect = it->second;
    INFO(path.string());
    CHECK(run_cli("check " + path.string()).exit_code == (expect == "ok" ? 0 : 1));
  }
  CHECK(run_cli("check " + dir + "/no_such_file.ht").exit_code == 2);
  CHECK(run_cli("check " + dir + "/liar_double_negation.ht --reflection=false").exit_code == 0);
  CHECK(run_cli("check " + dir + "/lem_proves_prov_falsum.ht --excluded-middle=false").exit_code ==
        1);
  CHECK(run_cli("truth " + dir + "/truth/liar.tm --mode kripke").exit_code == 0);
  CHECK(run_cli("truth " + dir + "/truth/liar.tm --mode nonsense").exit_code == 2);
}

TEST_CASE("cli saturate honors --expect") {
  std::string dir = testutil::scripts_dir();
  std::string base = "saturate --env " + dir + "/liar.env --seed L --formula-size 10 ";
  CHECK(run_cli(base + "--query 0=1 --expect absent").exit_code == 0);
  CHECK(run_cli(base + "--query 0=1 --expect present").exit_code == 1);
  CHECK(run_cli(base + "--query \"~~L\" --expect present").exit_code == 0);
}

TEST_CASE("cli reruns are byte-identical") {
  std::string dir = testutil::scripts_dir();
  for (const std::string& args :
       {"--json check " + dir + "/liar_double_negation.ht",
        "--json saturate --env " + dir + "/liar.env --seed L --formula-size 8 --query 0=1",
        "truth " + dir + "/truth/tarski_hierarchy.tm --mode tarski",
        "--json encode \"L -> Prov(#0=1#)\" --env " + dir + "/liar.env"}) {
    RunResult a = run_cli(args);
    RunResult b = run_cli(args);
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.output == b.output);
    CHECK_FALSE(a.output.empty());
  }
}

TEST_CASE("checking is safe to run from several threads") {
  std::string dir = testutil::scripts_dir();
  ScriptFile file = load_script(dir + "/liar_entails_prov_contradiction.ht");
  std::vector<std::thread> workers;
  std::vector<int> verdicts(8, -1);
  for (int i = 0; i < 8; i++)
    workers.emplace_back([&, i] { verdicts[i] = check_script(file.script).ok ? 1 : 0; });
  for (auto& w : workers) w.join();
  for (int v : verdicts) CHECK(v == 1);
}
