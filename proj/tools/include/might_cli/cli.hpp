#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "might/qda.hpp"
#include "might_cli/config.hpp"

namespace might::cli {

/// Version string recorded in every JSON artifact.
const char* version();

/// Command-line overrides of SolverConfig; unset fields keep the file value.
struct SolverOverrides {
    std::optional<double> kappa, c0, c1, c2, c3, c4, c_ic;
    std::optional<std::vector<double>> s0_grid;
    std::optional<int> max_total_iters;
    std::optional<double> global_s0;

    void apply(SolverConfig& config) const;
};

struct EstimateArgs {
    std::vector<std::string> data;
    std::string out;
    std::string config;
    bool no_symmetrize = false;
    bool no_center = false;
    int threads = 1;
    SolverOverrides overrides;
};

struct SimulateArgs {
    std::string spec;
    std::string out;
    int replication = 1;  ///< 1-based
};

struct BenchmarkArgs {
    std::string spec;
    std::string out;
    std::optional<int> replications;
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

struct InferArgs {
    std::vector<std::string> data;
    std::string estimate;  ///< directory holding theta_<k>.csv
    std::string out;
    double level = 0.95;
    double hypothesized = 0.0;
    bool no_center = false;
    int threads = 1;
};

struct ClassifyArgs {
    std::vector<std::string> data;   ///< one file per class, used with split
    std::vector<std::string> train;  ///< explicit training files per class
    std::vector<std::string> test;   ///< explicit test files per class
    std::optional<double> split;
    std::uint64_t seed = 0;
    std::string rounding = "floor";
    std::string estimate;            ///< directory with theta_<k>.csv; empty: refit
    std::string estimate_on = "train";
    std::string config;
    std::string out;
    bool no_center = false;
    int threads = 1;
    SolverOverrides overrides;
};

// Each command writes its artifacts and throws might::Error on failure.
void cmd_estimate(const EstimateArgs& args, std::ostream& log);
void cmd_simulate(const SimulateArgs& args, std::ostream& log);
void cmd_benchmark(const BenchmarkArgs& args, std::ostream& log);
/// The CSV goes to `table` when args.out is empty; messages go to `log`.
void cmd_infer(const InferArgs& args, std::ostream& table, std::ostream& log);
void cmd_classify(const ClassifyArgs& args, std::ostream& log);

/// Reads theta_1.csv .. theta_K.csv from a directory.
JointPrecision read_estimate(const std::string& dir, std::size_t num_datasets);

/// Parses argv and runs one command. Returns the process exit code:
/// 0 success, 2 usage or input error, 3 numerical failure, 1 anything else.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace might::cli
