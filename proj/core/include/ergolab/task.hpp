#pragma once

#include "ergolab/rank_one.hpp"
#include "ergolab/system.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ergolab {

using Json = nlohmann::ordered_json;

// One task execution result: a primary payload plus optional named side
// payloads (suffix appended to the output path), and a one-line summary.
struct TaskResult {
    std::string text;
    std::string format; // "csv" or "json"
    std::vector<std::pair<std::string, std::string>> extra; // (suffix, payload)
    std::string summary;
};

// Executes one task configuration. seed overrides the config's "seed" field
// when present; threads bounds worker threads for grid evaluations. Throws
// std::invalid_argument / std::domain_error for bad configs and inputs,
// ResourceError when a budget or cap is exhausted.
TaskResult run_task(const Json& config, std::optional<std::uint64_t> seed = std::nullopt,
                    int threads = 1);

// Parsing helpers shared with tests.
SystemSpec parse_system_spec(const Json& j);
RankOneSpec parse_rank_one_spec(const Json& j);
MeasurableSet parse_set(const Json& j, SetFamily family);
LevelSet parse_level_set(const Json& j);
StepFunction parse_step_function(const Json& j, SetFamily family);

std::string format_double(double v); // %.17g
std::string csv_escape_free(const std::string& v);

} // namespace ergolab
