#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace harmax::cli {

struct ExperimentInfo {
    std::string name;
    std::string description;
};

// The experiment catalog; names double as CLI subcommands.
const std::vector<ExperimentInfo>& list_experiments();

bool is_experiment(const std::string& name);

// A small ready-to-run configuration for the given experiment.
nlohmann::json sample_config(const std::string& experiment);

struct RunOptions {
    std::string experiment;
    nlohmann::json config;
    std::string out_dir = "harmax-out";
    std::optional<std::uint64_t> seed_override;
    unsigned threads = 1;
};

// Executes one experiment: writes <out>/<experiment>.csv and
// <out>/manifest.json. Throws validation_error / algorithm_failure.
void run_experiment(const RunOptions& opt);

} // namespace harmax::cli
