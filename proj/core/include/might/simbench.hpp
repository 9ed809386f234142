#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "might/estimator.hpp"
#include "might/model.hpp"

namespace might {

/// A seeded synthetic benchmark: Erdos-Renyi base graph, K pruned copies,
/// Gaussian data, and the solver settings to run on it.
struct ExperimentSpec {
    Index p = 50;
    std::size_t K = 10;
    std::vector<Index> n{100};  ///< per dataset; a single value applies to all K
    double edge_prob = 0.1;
    double rho = 0.5;           ///< fraction of base edges pruned per dataset
    double r = 0.1;             ///< diagonal inflation
    int replications = 20;
    std::uint64_t seed = 1;
    SolverConfig solver;
    std::optional<double> global_s0;
    bool symmetrize = true;

    /// Throws InvalidArgument when a field is out of range.
    void check() const;
    std::vector<Index> sample_sizes() const;
};

struct GroundTruth {
    std::vector<std::pair<Index, Index>> base_edges;  ///< i < j
    std::vector<Matrix> omega;         ///< edge values, zero diagonal
    std::vector<Matrix> theta;         ///< precision matrices
    std::vector<Matrix> sigma_factor;  ///< lower Cholesky factor of theta^{-1}
    double realized_s0 = 0.0;          ///< max_j sum_k |S_j^(k)| / |S_j|
    Index realized_s = 0;              ///< max_j |S_j|

    std::size_t num_datasets() const noexcept { return theta.size(); }
    Index num_covariates() const noexcept { return theta.empty() ? 0 : theta.front().rows(); }
};

/// Builds Theta^(k) = Omega^(k) + (r + |lambda_min(Omega^(k))|) I for every k.
GroundTruth generate_truth(const ExperimentSpec& spec, std::uint64_t seed);

/// Rows are L g with g standard normal; row l of dataset k depends only on (seed, k, l).
DatasetCollection sample_data(const GroundTruth& truth, std::span<const Index> sample_sizes,
                              std::uint64_t seed);

/// Matthews correlation coefficient; 0 when the denominator vanishes.
double matthews(double tp, double fp, double tn, double fn);

struct MetricReport {
    double frobenius = 0;  ///< sum_k (n_k/N) ||Theta_hat - Theta||_F
    double max_l2 = 0;     ///< max_j sum_k (n_k/N) ||column diff||^2
    double mcc_edge = 0;   ///< in [-1, 1]; pooled over all k and i < j
    double mcc_ngbr = 0;   ///< in [-1, 1]; union graph over k
};

/// Support comparisons read the upper triangle Theta_hat(i, j), i < j.
MetricReport metrics(const JointPrecision& estimate, const GroundTruth& truth,
                     std::span<const Index> sample_sizes);

struct ReplicationRecord {
    int index = 0;
    std::uint64_t seed = 0;
    MetricReport metrics;
    double realized_s0 = 0;
    Index realized_s = 0;
    double wall_seconds = 0;
};

struct MetricSummary {
    double mean = 0;
    double std_error = 0;
};

struct ExperimentTable {
    std::vector<ReplicationRecord> rows;
    MetricSummary frobenius, max_l2, mcc_edge, mcc_ngbr;
    double total_wall_seconds = 0;
};

MetricSummary summarize(std::span<const double> values);

/// Seed of replication `index` derived from the master seed.
std::uint64_t replication_seed(std::uint64_t master, int index);

struct SimulatedReplication {
    GroundTruth truth;
    DatasetCollection data;
};

/// Truth and data of replication `index`, exactly as run_replication draws them.
SimulatedReplication simulate_replication(const ExperimentSpec& spec, int index);

/// Fits one replication: truth, data, estimate, metrics.
ReplicationRecord run_replication(const ExperimentSpec& spec, int index, int workers = 1);

/// Runs every replication, spreading them over `workers` threads.
ExperimentTable run_experiment(const ExperimentSpec& spec, int workers = 1);

// ---------------------------------------------------------------------------
// Normality study

/// A precision entry Theta_{row, col}^(dataset), all zero-based.
struct TargetEntry {
    std::size_t dataset = 0;
    Index row = 0;
    Index col = 0;
};

struct EntryDraw {
    double estimate = 0;
    double std_error = 0;
};

/// Produces one draw per target entry from a replicated dataset, or nullopt
/// when the entry was not selected.
using EntryEstimator = std::function<std::vector<std::optional<EntryDraw>>(
    const DatasetCollection& data, std::span<const TargetEntry> entries, std::uint64_t seed)>;

/// Estimator used by default: fit, symmetrize when spec.symmetrize is set,
/// plug-in standard errors.
EntryEstimator might_entry_estimator(const ExperimentSpec& spec);

struct EntryStudy {
    TargetEntry entry;
    double truth = 0;
    std::vector<double> z;  ///< (estimate - truth) / std_error, selected replications only
    int unselected = 0;
    double mean = 0;
    double ks = 0;          ///< distance to the standard normal CDF
};

struct NormalityStudy {
    GroundTruth truth;
    std::vector<EntryStudy> entries;
};

/// Smallest seed offset (spec.seed, spec.seed + 1, ...) whose truth has every
/// requested entry in its support; nullopt after `max_tries` attempts.
std::optional<std::uint64_t> find_truth_seed(const ExperimentSpec& spec,
                                             std::span<const TargetEntry> entries,
                                             int max_tries = 10000);

/// Keeps the truth fixed (seeded by spec.seed) and redraws the data in every
/// replication.
NormalityStudy normality_study(const ExperimentSpec& spec, std::span<const TargetEntry> entries,
                               int replications, int workers = 1,
                               EntryEstimator estimator = {});

}  // namespace might
