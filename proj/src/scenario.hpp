#ifndef QBRAIN_SCENARIO_HPP
#define QBRAIN_SCENARIO_HPP

#include <string>

#include "json.hpp"

#include "critical.hpp"
#include "network.hpp"

namespace qbrain::scenario {

// Resource limits, overridable per run (the CLI wires the QBRAIN_DIM_LIMIT
// and QBRAIN_ENUM_LIMIT environment variables into these).
struct Limits {
    std::size_t dimension_limit = kDefaultDimensionLimit;
    std::uint64_t enumeration_limit = kDefaultEnumerationLimit;
};

// Text artifacts produced by a task; empty strings mean "not produced".
// All numbers are formatted at 12 significant digits, so identical inputs
// yield byte-identical outputs.
struct Artifacts {
    std::string report_json;
    std::string series_csv;
    std::string sweep_csv;
};

NetworkModel model_from_json_text(const std::string& text);
std::string model_to_json_text(const NetworkModel& model);

// The bundled six-neuron example with a generic synaptic matrix.
NetworkModel paper_example_model();

Limits limits_from_options(const nlohmann::json& options);

// Task runners. Options are validated before any computation; mode indices in
// reports and CSV headers are 1-based (Y_1..Y_n), matching the column names.
Artifacts run_analyze(const NetworkModel& model, const nlohmann::json& options,
                      const Limits& limits = {});
Artifacts run_evolve(const NetworkModel& model, const nlohmann::json& options,
                     const Limits& limits = {});
Artifacts run_compare(const NetworkModel& model, const nlohmann::json& options,
                      const Limits& limits = {});
Artifacts run_pack(const nlohmann::json& options, const Limits& limits = {});
Artifacts run_paper_example();

} // namespace qbrain::scenario

#endif
