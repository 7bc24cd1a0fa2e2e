#pragma once

#include <json.hpp>

#include "ht/kernel.hpp"
#include "ht/search.hpp"
#include "ht/truth.hpp"

namespace ht {

// JSON report builders shared by the CLI and the test harness. Key order and
// formatting are deterministic: identical inputs give identical bytes.

nlohmann::json check_report(const ProofScript& script, const CheckResult& result,
                            const std::string& input_name);

nlohmann::json saturation_report(const SaturationResult& result, size_t universe_size,
                                 const std::map<std::string, bool>& contains);

nlohmann::json kripke_report(const SentenceUniverse& u);
nlohmann::json tarski_report(const SentenceUniverse& u);

} // namespace ht
