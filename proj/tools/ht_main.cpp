// ht: proof checking, bounded saturation, and truth-model evaluation for
// minimal logic with a self-applicative provability operator.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ht/diagonal.hpp"
#include "ht/godel.hpp"
#include "ht/kernel.hpp"
#include "ht/parser.hpp"
#include "ht/report.hpp"
#include "ht/script.hpp"
#include "ht/search.hpp"
#include "ht/truth.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitUsage = 2;

struct ConfigFlags {
  std::string ex_falso, excluded_middle, reflection, prov_axioms;

  void attach(CLI::App* cmd) {
    cmd->add_option("--ex-falso", ex_falso, "override ex_falso (true|false)");
    cmd->add_option("--excluded-middle", excluded_middle, "override excluded_middle");
    cmd->add_option("--reflection", reflection, "override reflection");
    cmd->add_option("--prov-axioms", prov_axioms, "override prov_axioms");
  }

  std::map<std::string, std::string> overrides() const {
    std::map<std::string, std::string> o;
    if (!ex_falso.empty()) o["ex_falso"] = ex_falso;
    if (!excluded_middle.empty()) o["excluded_middle"] = excluded_middle;
    if (!reflection.empty()) o["reflection"] = reflection;
    if (!prov_axioms.empty()) o["prov_axioms"] = prov_axioms;
    return o;
  }
};

void print_trace(const ht::ProofScript& script, const ht::CheckResult& result) {
  for (size_t i = 0; i < result.derived.size(); i++) {
    std::cout << "  " << script.steps[i].index << ". " << ht::rule_name(script.steps[i].rule)
              << "\t" << result.derived[i].text() << "\n";
  }
}

int cmd_check(const std::vector<std::string>& paths,
              const std::map<std::string, std::string>& overrides, bool trace, bool as_json) {
  json reports = json::array();
  bool any_rejected = false;
  for (const std::string& path : paths) {
    ht::ScriptFile file = ht::load_script(path);
    file.script.config = ht::apply_config_overrides(file.script.config, overrides);
    ht::CheckResult result = ht::check_script(file.script);
    any_rejected = any_rejected || !result.ok;
    if (as_json) {
      reports.push_back(ht::check_report(file.script, result, path));
    } else {
      std::cout << path << ": " << (result.ok ? "OK" : "REJECTED") << "  (goal "
                << file.script.goal.text() << ")\n";
      if (trace) print_trace(file.script, result);
      if (result.error) std::cout << "  error: " << result.error->message() << "\n";
    }
  }
  if (as_json) std::cout << (reports.size() == 1 ? reports[0] : reports).dump(2) << "\n";
  return any_rejected ? kExitRejected : kExitOk;
}

ht::LogicConfig config_from_overrides(const std::map<std::string, std::string>& overrides) {
  // Saturation commands start from the provability-axiom configuration.
  return ht::apply_config_overrides(ht::ht_config(), overrides);
}

int cmd_saturate(const std::string& env_path, const std::vector<std::string>& seeds,
                 const std::vector<std::string>& queries, const std::vector<std::string>& expects,
                 ht::SearchBounds bounds, const std::map<std::string, std::string>& overrides,
                 bool as_json) {
  if (!expects.empty() && expects.size() != queries.size()) {
    std::cerr << "every --expect needs a matching --query\n";
    return kExitUsage;
  }
  ht::DefEnv env;
  if (!env_path.empty()) env = ht::load_defenv(env_path);
  ht::LogicConfig config = config_from_overrides(overrides);

  std::vector<ht::FormulaPtr> seed_formulas;
  for (const std::string& s : seeds) seed_formulas.push_back(ht::parse_formula(s, env));
  std::vector<ht::FormulaPtr> universe = ht::build_universe(seed_formulas, env, bounds);
  ht::SaturationResult result = ht::saturate(universe, config, env, bounds);

  json contains = json::object();
  bool expectations_met = true;
  for (size_t i = 0; i < queries.size(); i++) {
    ht::FormulaPtr q = ht::parse_formula(queries[i], env);
    bool present = result.contains(q);
    contains[q->text()] = present;
    if (!expects.empty()) {
      const std::string& e = expects[i];
      if (e != "present" && e != "absent") {
        std::cerr << "--expect must be 'present' or 'absent'\n";
        return kExitUsage;
      }
      if (present != (e == "present")) expectations_met = false;
    }
  }

  if (as_json) {
    std::map<std::string, bool> contains_map;
    for (auto& [formula, present] : contains.items()) contains_map[formula] = present.get<bool>();
    std::cout << ht::saturation_report(result, universe.size(), contains_map).dump(2) << "\n";
  } else {
    std::cout << "universe: " << universe.size() << " formulas, derived: "
              << result.derived.size() << ", rounds: " << result.rounds_used
              << (result.saturated ? " (fixpoint)" : " (iteration bound hit)") << "\n";
    for (auto& [formula, present] : contains.items())
      std::cout << "  " << formula << ": " << (present.get<bool>() ? "derived" : "not derived within bounds")
                << "\n";
  }
  return expectations_met ? kExitOk : kExitRejected;
}

int cmd_prove(const std::string& goal_text, const std::string& env_path, ht::SearchBounds bounds,
              const std::map<std::string, std::string>& overrides, bool as_json) {
  ht::DefEnv env;
  if (!env_path.empty()) env = ht::load_defenv(env_path);
  ht::LogicConfig config = config_from_overrides(overrides);
  ht::FormulaPtr goal = ht::parse_formula(goal_text, env);

  std::optional<ht::ProofScript> script = ht::prove_bounded(goal, config, env, bounds);
  if (!script) {
    if (as_json) {
      std::cout << json{{"command", "prove"}, {"goal", goal->text()}, {"proved", false}}.dump(2)
                << "\n";
    } else {
      std::cout << goal->text() << ": not derivable within bounds\n";
    }
    return kExitRejected;
  }
  if (as_json) {
    json report = {{"command", "prove"},
                   {"goal", goal->text()},
                   {"proved", true},
                   {"script", ht::render_script(*script)}};
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << ht::render_script(*script);
  }
  return kExitOk;
}

int cmd_truth(const std::string& path, const std::string& mode, bool) {
  ht::SentenceUniverse u = ht::load_universe(path);
  json report;
  if (mode == "kripke") {
    report = ht::kripke_report(u);
  } else if (mode == "tarski") {
    report = ht::tarski_report(u);
  } else {
    std::cerr << "--mode must be kripke or tarski\n";
    return kExitUsage;
  }
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

int cmd_encode(const std::string& formula_text, const std::string& decode_value,
               const std::string& env_path, const std::vector<std::string>& extra_names,
               bool as_json) {
  ht::DefEnv env;
  if (!env_path.empty()) env = ht::load_defenv(env_path);

  if (!decode_value.empty()) {
    std::vector<std::string> names = extra_names;
    for (const auto& n : env.names()) names.push_back(n);
    ht::NameRegistry reg = !formula_text.empty()
                               ? ht::NameRegistry::collect(ht::parse_formula(formula_text, env), env)
                               : ht::NameRegistry(names);
    ht::GodelCode code(decode_value);
    ht::FormulaPtr f = ht::decode(code, reg);
    if (as_json)
      std::cout << json{{"command", "encode"}, {"code", decode_value}, {"formula", f->text()}}.dump(2)
                << "\n";
    else
      std::cout << f->text() << "\n";
    return kExitOk;
  }

  ht::FormulaPtr f = ht::parse_formula(formula_text, env);
  std::vector<ht::FormulaPtr> all{f};
  ht::NameRegistry reg = ht::NameRegistry::collect(all, env);
  for (const std::string& n : extra_names) {
    std::vector<std::string> merged = reg.names();
    merged.push_back(n);
    reg = ht::NameRegistry(merged);
  }
  ht::GodelCode code = ht::encode(f, reg);
  if (as_json) {
    json names = json::array();
    for (const auto& n : reg.names()) names.push_back(n);
    std::cout << json{{"command", "encode"},
                      {"formula", f->text()},
                      {"code", code.str()},
                      {"registry", names}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << code.str() << "\n";
  }
  return kExitOk;
}

int cmd_diag(const std::string& name, const std::string& template_text,
             const std::string& env_path, const std::string& out_path) {
  ht::DefEnv env;
  if (!env_path.empty()) env = ht::load_defenv(env_path);
  ht::FormulaPtr tmpl = ht::parse_template(template_text, env);
  ht::DefEnv extended = ht::diagonalize(name, ht::Template(tmpl), env);

  std::ostringstream out;
  for (const auto& [n, body] : extended.bindings()) out << "def " << n << " := " << body->text() << "\n";
  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(out_path);
    if (!f) throw ht::Error("cannot write " + out_path);
    f << out.str();
  }
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"proof kernel, bounded saturation, and truth models for a "
               "provability logic over minimal logic"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may appear after the subcommand

  bool as_json = false;
  bool trace = false;
  app.add_flag("--json", as_json, "emit JSON reports");
  app.add_flag("--trace", trace, "print per-step traces");

  // check
  auto* check = app.add_subcommand("check", "check proof scripts");
  std::vector<std::string> check_paths;
  check->add_option("scripts", check_paths, "proof script files")->required();
  ConfigFlags check_cfg;
  check_cfg.attach(check);

  // saturate
  auto* saturate = app.add_subcommand("saturate", "bounded forward-chaining saturation");
  std::string sat_env;
  std::vector<std::string> sat_seeds, sat_queries, sat_expects;
  ht::SearchBounds sat_bounds;
  saturate->add_option("--env", sat_env, "definition file");
  saturate->add_option("--seed", sat_seeds, "seed formulas");
  saturate->add_option("--query", sat_queries, "formulas to test for derivability");
  saturate->add_option("--expect", sat_expects, "present|absent, one per query");
  saturate->add_option("--quote-depth", sat_bounds.quote_depth, "max Prov nesting");
  saturate->add_option("--formula-size", sat_bounds.formula_size, "max formula size");
  saturate->add_option("--iterations", sat_bounds.iterations, "max saturation rounds");
  ConfigFlags sat_cfg;
  sat_cfg.attach(saturate);

  // prove
  auto* prove = app.add_subcommand("prove", "search for a proof of one goal");
  std::string prove_goal, prove_env;
  ht::SearchBounds prove_bounds;
  prove->add_option("goal", prove_goal, "goal formula")->required();
  prove->add_option("--env", prove_env, "definition file");
  prove->add_option("--quote-depth", prove_bounds.quote_depth, "max Prov nesting");
  prove->add_option("--formula-size", prove_bounds.formula_size, "max formula size");
  prove->add_option("--iterations", prove_bounds.iterations, "max saturation rounds");
  ConfigFlags prove_cfg;
  prove_cfg.attach(prove);

  // truth
  auto* truth = app.add_subcommand("truth", "evaluate a truth-model universe");
  std::string truth_path, truth_mode = "kripke";
  truth->add_option("universe", truth_path, "universe file")->required();
  truth->add_option("--mode", truth_mode, "kripke|tarski");

  // encode
  auto* encode = app.add_subcommand("encode", "number a formula (or decode a number)");
  std::string enc_formula, enc_decode, enc_env;
  std::vector<std::string> enc_names;
  encode->add_option("formula", enc_formula, "formula to encode");
  encode->add_option("--decode", enc_decode, "decode this code instead");
  encode->add_option("--env", enc_env, "definition file for name resolution");
  encode->add_option("--names", enc_names, "extra registry identifiers");

  // diag
  auto* diag = app.add_subcommand("diag", "build a self-referential definition");
  std::string diag_name, diag_template, diag_env, diag_out;
  diag->add_option("--name", diag_name, "name to bind")->required();
  diag->add_option("--template", diag_template, "formula with @ for the hole")->required();
  diag->add_option("--env", diag_env, "existing definition file");
  diag->add_option("-o,--output", diag_out, "write the extended definitions here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(check_paths, check_cfg.overrides(), trace, as_json);
    if (saturate->parsed())
      return cmd_saturate(sat_env, sat_seeds, sat_queries, sat_expects, sat_bounds,
                          sat_cfg.overrides(), as_json);
    if (prove->parsed())
      return cmd_prove(prove_goal, prove_env, prove_bounds, prove_cfg.overrides(), as_json);
    if (truth->parsed()) return cmd_truth(truth_path, truth_mode, as_json);
    if (encode->parsed())
      return cmd_encode(enc_formula, enc_decode, enc_env, enc_names, as_json);
    if (diag->parsed()) return cmd_diag(diag_name, diag_template, diag_env, diag_out);
  } catch (const ht::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ht::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
