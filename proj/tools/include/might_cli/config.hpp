#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "might/estimator.hpp"
#include "might/simbench.hpp"

namespace might::cli {

/// Settings of the estimate command that may come from a config file.
struct EstimateConfig {
    EstimateOptions options;
    bool symmetrize = true;
    bool center = true;
};

// JSON mirrors of the core configuration types. Readers reject unknown keys
// and wrong types with InvalidArgument; absent keys keep their defaults.

nlohmann::json to_json(const SolverConfig& config);
SolverConfig solver_from_json(const nlohmann::json& j, SolverConfig base = {});

nlohmann::json to_json(const EstimateConfig& config);
EstimateConfig estimate_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ExperimentSpec& spec);
ExperimentSpec spec_from_json(const nlohmann::json& j);

/// Parses a JSON file; FileError on a missing or malformed file.
nlohmann::json read_json(const std::string& path);
void write_json(const std::string& path, const nlohmann::json& value);

}  // namespace might::cli
