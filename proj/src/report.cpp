#include "ht/report.hpp"

namespace ht {

using nlohmann::json;

json check_report(const ProofScript& script, const CheckResult& result,
                  const std::string& input_name) {
  json steps = json::array();
  for (size_t i = 0; i < result.derived.size(); i++) {
    steps.push_back({{"index", script.steps[i].index},
                     {"rule", rule_name(script.steps[i].rule)},
                     {"sequent", result.derived[i].text()}});
  }
  json report = {{"command", "check"},
                 {"input", input_name},
                 {"config",
                  {{"ex_falso", script.config.ex_falso},
                   {"excluded_middle", script.config.excluded_middle},
                   {"reflection", script.config.reflection},
                   {"prov_axioms", script.config.prov_axioms}}},
                 {"status", result.ok ? "ok" : "rejected"},
                 {"goal", script.goal.text()},
                 {"steps", steps}};
  if (result.error) {
    report["error"] = {{"step", result.error->step},
                       {"kind", result.error->kind},
                       {"expected", result.error->expected},
                       {"actual", result.error->actual}};
  }
  return report;
}

json saturation_report(const SaturationResult& result, size_t universe_size,
                       const std::map<std::string, bool>& contains) {
  json derived = json::array();
  for (const auto& f : result.derived) derived.push_back(f->text());
  return {{"command", "saturate"},
          {"universe_size", universe_size},
          {"derived", derived},
          {"saturated", result.saturated},
          {"rounds_used", result.rounds_used},
          {"contains", contains}};
}

json kripke_report(const SentenceUniverse& u) {
  KripkeResult r = kripke_fixpoint(u);
  json sentences = json::object();
  for (const auto& [name, value] : r.fixpoint) {
    sentences[name] = {{"value", three_val_name(value)},
                       {"grounded", value != ThreeVal::U},
                       {"stage", r.stabilized_at.at(name)}};
  }
  return {{"command", "truth"}, {"mode", "kripke"}, {"sentences", sentences}};
}

json tarski_report(const SentenceUniverse& u) {
  auto levels = tarski_levels(u);
  json sentences = json::object();
  for (const auto& [name, entry] : levels) {
    json e;
    e["tarski_level"] = entry.level ? json(*entry.level) : json(nullptr);
    e["value"] = entry.value ? json(*entry.value ? "T" : "F") : json(nullptr);
    sentences[name] = e;
  }
  return {{"command", "truth"}, {"mode", "tarski"}, {"sentences", sentences}};
}

} // namespace ht
