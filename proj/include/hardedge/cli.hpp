#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardedge/symbols.hpp"

namespace hardedge::cli {

/// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitTolerance = 2;

struct ExperimentSpec {
    std::string command;
    nlohmann::json raw;  ///< the config document, echoed into outputs
    std::optional<ModelConfig> model;
    std::vector<double> s_grid;
    std::vector<double> u_grid{0.5, 1.0, 2.0};
    std::vector<int> n_list;
    double x_min = 0.05, x_max = 2.0;
    int x_intervals = 32;
    int order = 20;           ///< finite-n rule, nodes per panel
    int operator_order = 14;  ///< Nystrom rule, nodes per panel
    int mc_samples = 100000;
    int mc_n = 0;
    std::uint64_t seed = 1;
    bool mc_enabled = true;
    bool dump_raw = false;
    std::vector<double> parametrix_alphas{0.0, 0.3, 1.0};
    nlohmann::json tolerances;
    std::string out_dir = ".";
    int threads = 1;

    double tolerance(const std::string& key, double fallback) const;
};

/// Validates the document (grids nonempty and sorted, model invariants) and applies defaults.
ExperimentSpec parse_spec(const std::string& command, const nlohmann::json& config);

struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string note;
    nlohmann::json to_json() const;
};

int cmd_kernel(const ExperimentSpec& spec);
int cmd_statistic(const ExperimentSpec& spec);
int cmd_verify(const ExperimentSpec& spec);
int cmd_mc(const ExperimentSpec& spec);
int cmd_equilibrium(const ExperimentSpec& spec);

/// Entry point: hardedge <command> --config <path> --out <dir> [--threads N] [--seed S].
int run(int argc, char** argv);

}  // namespace hardedge::cli
