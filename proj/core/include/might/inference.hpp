#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "might/model.hpp"

namespace might {

/// Lower bound applied to plug-in variances.
inline constexpr double kVarianceFloor = 1e-12;

struct EntryVariance {
    Index row = 0;        ///< i, a member of supp(Theta_hat_{., j}^(k)) including j itself
    double variance = 0;  ///< sigma-hat^2, already floored
    bool floored = false;
};

/// Plug-in variance of sqrt(n_k) * Theta_hat(i, j)^(k) for every i in the
/// selected support of column j (diagonal included).
///
/// With S = supp(Theta_hat_{., j}^(k)) and A = X_S Sigma_hat_SS^{-1}, the
/// variance of entry i is mean_l (A_li A_lj)^2 - Theta_hat(i, j)^2.
/// Throws SupportTooLarge when |S| > n_k and SingularSubmatrix when the
/// reciprocal condition number of Sigma_hat_SS drops below 1e-10.
std::vector<EntryVariance> variance_estimate(const DatasetCollection& collection,
                                             const JointPrecision& estimate, std::size_t k,
                                             Index node);

struct InferenceEntry {
    std::size_t dataset = 0;  ///< k
    Index node = 0;           ///< j (column)
    Index row = 0;            ///< i
    double estimate = 0;
    double std_error = 0;     ///< sigma-hat / sqrt(n_k)
    double z_score = 0;
    double ci_low = 0;
    double ci_high = 0;
    double level = 0.95;
};

struct InferenceResult {
    std::vector<InferenceEntry> entries;
    std::size_t floored = 0;  ///< entries whose variance hit kVarianceFloor
};

/// estimate -/+ Phi^{-1}(1 - (1 - level)/2) * std_error. Throws InvalidArgument
/// unless 0 < level < 1.
std::pair<double, double> confidence_interval(double estimate, double std_error, double level);

/// Normal confidence intervals and z-scores against `hypothesized` for every
/// selected entry of every column and dataset.
InferenceResult z_scores(const DatasetCollection& collection, const JointPrecision& estimate,
                         double level, double hypothesized = 0.0, int workers = 1);

}  // namespace might
