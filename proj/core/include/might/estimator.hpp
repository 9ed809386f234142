#pragma once

#include <optional>
#include <vector>

#include "might/iht.hpp"
#include "might/model.hpp"

namespace might {

struct EstimateOptions {
    SolverConfig solver;
    int workers = 1;
    /// When set, every node uses this s0 instead of tuning it (ablation mode).
    std::optional<double> global_s0;
};

struct NodeTrace {
    Index node = 0;
    double s0 = 1.0;
    SolveTrace solve;
    std::vector<double> criteria;  ///< information criterion per grid value (empty in global mode)
};

struct EstimateResult {
    JointPrecision precision;  ///< unsymmetrized
    std::vector<NodeTrace> traces;
};

struct NodeEstimate {
    PrecisionColumn column;
    NodeTrace trace;
};

/// Estimates column j of every precision matrix: tunes s0, solves, rescales.
/// `shared` must come from scale_collection with options.solver.c0.
NodeEstimate estimate_node(std::shared_ptr<const ScaledCollection> shared, Index node,
                           const EstimateOptions& options);

/// Runs the node-wise procedure over all covariates. The result is identical
/// for any worker count. Failures are rethrown as NodeFailure.
EstimateResult estimate(const DatasetCollection& collection, const EstimateOptions& options);

/// Minimum symmetrization: each off-diagonal pair takes the value of smaller
/// magnitude; on |a| == |b| the (i, j) entry wins.
JointPrecision symmetrize(const JointPrecision& estimate);

struct SupportSets {
    /// neighbors[k][j]: sorted i != j with Theta_hat(i, j)^(k) != 0
    std::vector<std::vector<std::vector<Index>>> neighbors;
    /// union over k of neighbors[k][j]
    std::vector<std::vector<Index>> union_neighbors;
    std::vector<Index> union_size;  ///< |S_j|
    std::vector<Index> edge_count;  ///< sum_k |S_j^(k)|

    /// sum_k |S_j^(k)| / |S_j|, or 0 for an isolated node.
    double average_frequency(Index node) const;
};

/// Off-diagonal nonzero patterns read column-wise.
SupportSets support_sets(const JointPrecision& estimate);

}  // namespace might
