#pragma once

#include <vector>

#include "might/model.hpp"

namespace might {

/// Constants of the two-stage iterative hard-thresholding solver.
///
/// The thresholds are
///   lambda_inf = c1 * sigma * sqrt((log K + log(p) / s0) / N)
///   lambda_0   = c2 * (sqrt(log(pK) / N) + ||(1/N) Z^T X_j||_inf)
///   lambda_fix = c3 * sigma * sqrt((log(s K) + log(p) / s0) / N)
/// where sigma is a plug-in noise scale (1 when scale_by_noise is off). The
/// fixed stage runs until t exceeds ceil(log(lambda_0/lambda_inf)/log(1/kappa)) + c4 log N.
struct SolverConfig {
    double kappa = 0.9;
    double c0 = 0.25;  ///< below 1 so the unit gradient step stays contractive
    double c1 = 1.25;
    double c2 = 1.5;
    double c3 = 0.625;
    double c4 = 10.0;
    double c_ic = 2.0;  ///< penalty weight of the information criterion
    std::vector<double> s0_grid;  ///< empty: default_s0_grid(K)
    int max_total_iters = 10000;
    bool scale_by_noise = true;

    /// Throws InvalidArgument on out-of-range constants or grid values outside [1, K].
    void check(std::size_t num_tasks) const;
    /// The explicit grid, or the default one for K tasks.
    std::vector<double> resolved_grid(std::size_t num_tasks) const;
};

/// 1..K when K <= 20, otherwise 15 geometrically spaced values in [1, K],
/// rounded and deduplicated.
std::vector<double> default_s0_grid(std::size_t num_tasks);

struct SolveTrace {
    std::vector<double> lambdas;  ///< threshold used at every iteration
    int stage_boundary = 0;       ///< first iteration of the fixed stage
    int iterations = 0;
    Index union_support = 0;      ///< s-hat = max(1, |union of supports|)
    Index total_support = 0;      ///< A-hat
    double residual_sq_norm = 0.0;
    double s0 = 1.0;
    double lambda_0 = 0.0;
    double lambda_inf = 0.0;
    double lambda_fix = 0.0;
    double sigma_dynamic = 1.0;   ///< noise scale applied to lambda_inf
    double sigma_fixed = 1.0;     ///< noise scale applied to lambda_fix
};

struct SolveResult {
    CoefficientStack beta;
    SolveTrace trace;
};

/// beta + (1/N) Z^T (X_j - Z beta), evaluated block by block.
CoefficientStack gradient_step(const ScaledDesign& problem, const CoefficientStack& beta);

/// Runs the dynamic and fixed thresholding stages for one value of s0.
/// Throws NonFinite on a divergent iterate and IterationCapExceeded.
SolveResult solve(const ScaledDesign& problem, double s0, const SolverConfig& config);

/// Value of the information criterion used to pick s0.
double information_criterion(const ScaledDesign& problem, const SolveResult& fit, double c_ic);

struct TuneResult {
    double best_s0 = 1.0;
    CoefficientStack beta;
    SolveTrace trace;
    std::vector<double> grid;
    std::vector<double> criteria;  ///< one per grid value
};

/// Solves for every s0 in the grid and keeps the minimizer of the information
/// criterion; ties go to the smaller s0.
TuneResult tune_s0(const ScaledDesign& problem, const SolverConfig& config);

}  // namespace might
