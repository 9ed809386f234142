#include "might/iht.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "might/errors.hpp"
#include "might/thresholding.hpp"

namespace might {

namespace {

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

// out = beta + c - G beta for every block, skipping zero coefficients.
void gradient_into(const ScaledDesign& problem, const Matrix& beta, Matrix& out) {
    const Index m = problem.num_edges();
    for (std::size_t k = 0; k < problem.num_tasks(); ++k) {
        const Index kk = static_cast<Index>(k);
        auto dst = out.col(kk);
        dst = beta.col(kk) + problem.correlation(k);
        const Matrix& g = problem.gram(k);
        for (Index i = 0; i < m; ++i) {
            const double b = beta(i, kk);
            if (b != 0.0) dst.noalias() -= b * g.col(i);
        }
    }
}

double residual_sq_norm(const ScaledDesign& problem, const CoefficientStack& beta) {
    double total = 0.0;
    for (std::size_t k = 0; k < problem.num_tasks(); ++k)
        total += block_residual(problem, beta, k).squaredNorm();
    return total;
}

Index union_size(const Matrix& values) {
    Index count = 0;
    for (Index i = 0; i < values.rows(); ++i)
        if ((values.row(i).array() != 0.0).any()) ++count;
    return count;
}

}  // namespace

void SolverConfig::check(std::size_t num_tasks) const {
    if (!(kappa > 0.0 && kappa < 1.0)) throw InvalidArgument("kappa must lie in (0, 1)");
    for (double c : {c0, c1, c2, c3, c4, c_ic})
        if (!positive_finite(c)) throw InvalidArgument("solver constants must be positive");
    if (max_total_iters <= 0) throw InvalidArgument("max_total_iters must be positive");
    const double K = static_cast<double>(num_tasks);
    for (double s0 : s0_grid)
        if (!(s0 >= 1.0 && s0 <= K))
            throw InvalidArgument("s0 grid value " + std::to_string(s0) + " outside [1, " +
                                  std::to_string(num_tasks) + "]");
}

std::vector<double> SolverConfig::resolved_grid(std::size_t num_tasks) const {
    std::vector<double> grid = s0_grid.empty() ? default_s0_grid(num_tasks) : s0_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

std::vector<double> default_s0_grid(std::size_t num_tasks) {
    std::vector<double> grid;
    if (num_tasks <= 20) {
        for (std::size_t s = 1; s <= std::max<std::size_t>(num_tasks, 1); ++s)
            grid.push_back(static_cast<double>(s));
        return grid;
    }
    constexpr int points = 15;
    const double log_k = std::log(static_cast<double>(num_tasks));
    for (int i = 0; i < points; ++i) {
        const double v = std::round(std::exp(log_k * i / (points - 1)));
        if (grid.empty() || grid.back() != v) grid.push_back(v);
    }
    return grid;
}

CoefficientStack gradient_step(const ScaledDesign& problem, const CoefficientStack& beta) {
    CoefficientStack out(problem.num_edges(), problem.num_tasks(), problem.node());
    gradient_into(problem, beta.values, out.values);
    return out;
}

SolveResult solve(const ScaledDesign& problem, double s0, const SolverConfig& config) {
    const std::size_t K = problem.num_tasks();
    if (!(s0 >= 1.0 && s0 <= static_cast<double>(K)))
        throw InvalidArgument("s0 must lie in [1, K]");

    const double N = static_cast<double>(problem.total_observations());
    const double p = static_cast<double>(problem.num_covariates());
    const double log_p_share = std::log(p) / s0;

    SolveResult result{CoefficientStack(problem.num_edges(), K, problem.node()), {}};
    SolveTrace& trace = result.trace;
    trace.s0 = s0;

    double response_sq = 0.0;
    double max_corr = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        response_sq += problem.response_sq_norm(k);
        max_corr = std::max(max_corr, problem.correlation(k).cwiseAbs().maxCoeff());
    }
    trace.sigma_dynamic = config.scale_by_noise ? std::sqrt(response_sq / N) : 1.0;

    const double lambda_inf = config.c1 * trace.sigma_dynamic *
                              std::sqrt((std::log(static_cast<double>(K)) + log_p_share) / N);
    const double lambda_0 =
        config.c2 * (std::sqrt(std::log(p * static_cast<double>(K)) / N) + max_corr);
    trace.lambda_0 = lambda_0;
    trace.lambda_inf = lambda_inf;

    Matrix& beta = result.beta.values;
    Matrix work(beta.rows(), beta.cols());
    int t = 0;

    auto iterate = [&](double lambda) {
        gradient_into(problem, beta, work);
        if (!work.allFinite())
            throw NonFinite("node " + std::to_string(problem.node() + 1) + ", iteration " +
                            std::to_string(t));
        two_step_threshold_inplace(work, lambda, s0);
        beta.swap(work);
        trace.lambdas.push_back(lambda);
        ++t;
        if (t > config.max_total_iters) throw IterationCapExceeded(config.max_total_iters);
    };

    double lambda = lambda_0;
    while (lambda >= lambda_inf) {
        iterate(lambda);
        lambda *= config.kappa;
    }
    trace.stage_boundary = t;

    const double s_hat = static_cast<double>(std::max<Index>(1, union_size(beta)));
    trace.sigma_fixed =
        config.scale_by_noise ? std::sqrt(residual_sq_norm(problem, result.beta) / N) : 1.0;
    const double lambda_fix =
        config.c3 * trace.sigma_fixed *
        std::sqrt((std::log(s_hat * static_cast<double>(K)) + log_p_share) / N);
    trace.lambda_fix = lambda_fix;

    const double dynamic_len =
        std::ceil(std::log(lambda_0 / lambda_inf) / std::log(1.0 / config.kappa));
    const double last = dynamic_len + config.c4 * std::log(N);
    while (static_cast<double>(t) <= last) iterate(lambda_fix);

    trace.iterations = t;
    trace.union_support = std::max<Index>(1, union_size(beta));
    trace.total_support = result.beta.total_support_size();
    trace.residual_sq_norm = residual_sq_norm(problem, result.beta);
    return result;
}

double information_criterion(const ScaledDesign& problem, const SolveResult& fit, double c_ic) {
    const double N = static_cast<double>(problem.total_observations());
    const double p = static_cast<double>(problem.num_covariates());
    const double K = static_cast<double>(problem.num_tasks());
    const double s_hat = static_cast<double>(fit.trace.union_support);
    const double a_hat = static_cast<double>(fit.trace.total_support);
    return std::log(fit.trace.residual_sq_norm / N) +
           c_ic / N * (s_hat * std::log(p) + a_hat * std::log(K * s_hat));
}

TuneResult tune_s0(const ScaledDesign& problem, const SolverConfig& config) {
    TuneResult out;
    out.grid = config.resolved_grid(problem.num_tasks());
    if (out.grid.empty()) throw InvalidArgument("s0 grid is empty");
    out.criteria.reserve(out.grid.size());

    bool have_best = false;
    double best = 0.0;
    for (double s0 : out.grid) {
        SolveResult fit = solve(problem, s0, config);
        const double ic = information_criterion(problem, fit, config.c_ic);
        out.criteria.push_back(ic);
        if (!have_best || ic < best) {
            have_best = true;
            best = ic;
            out.best_s0 = s0;
            out.beta = std::move(fit.beta);
            out.trace = std::move(fit.trace);
        }
    }
    return out;
}

}  // namespace might
