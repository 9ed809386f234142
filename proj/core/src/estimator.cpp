#include "might/estimator.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "might/errors.hpp"
#include "might/parallel.hpp"

namespace might {

int default_worker_count() {
    const char* env = std::getenv("MIGHT_THREADS");
    if (env == nullptr) return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 4096) return 1;
    return static_cast<int>(v);
}

NodeEstimate estimate_node(std::shared_ptr<const ScaledCollection> shared, Index node,
                           const EstimateOptions& options) {
    const ScaledDesign problem(std::move(shared), node);
    NodeEstimate out;
    out.trace.node = node;
    if (options.global_s0) {
        SolveResult fit = solve(problem, *options.global_s0, options.solver);
        out.trace.s0 = *options.global_s0;
        out.trace.solve = std::move(fit.trace);
        out.column = recover_precision_column(problem, fit.beta);
    } else {
        TuneResult tuned = tune_s0(problem, options.solver);
        out.trace.s0 = tuned.best_s0;
        out.trace.solve = std::move(tuned.trace);
        out.trace.criteria = std::move(tuned.criteria);
        out.column = recover_precision_column(problem, tuned.beta);
    }
    return out;
}

EstimateResult estimate(const DatasetCollection& collection, const EstimateOptions& options) {
    validate(collection);
    const std::size_t K = collection.num_datasets();
    options.solver.check(K);
    if (options.global_s0 && !(*options.global_s0 >= 1.0 && *options.global_s0 <= double(K)))
        throw InvalidArgument("global s0 must lie in [1, K]");

    const Index p = collection.num_covariates();
    const auto shared = scale_collection(collection, empirical_moments(collection),
                                         options.solver.c0);

    EstimateResult result;
    result.precision.matrices.assign(K, Matrix::Zero(p, p));
    result.traces.resize(static_cast<std::size_t>(p));

    parallel_for(static_cast<std::size_t>(p), options.workers, [&](std::size_t jj) {
        const Index j = static_cast<Index>(jj);
        NodeEstimate node;
        try {
            node = estimate_node(shared, j, options);
        } catch (const Error& e) {
            throw NodeFailure(jj, e);
        }
        for (std::size_t k = 0; k < K; ++k) {
            Matrix& theta = result.precision.matrices[k];
            theta(j, j) = node.column.diag(static_cast<Index>(k));
            const Vector& off = node.column.offdiag[k];
            for (Index i = 0; i < off.size(); ++i) theta(covariate_of(i, j), j) = off(i);
        }
        result.traces[jj] = std::move(node.trace);
    });
    return result;
}

JointPrecision symmetrize(const JointPrecision& estimate) {
    JointPrecision out;
    out.symmetrized = true;
    out.matrices.reserve(estimate.matrices.size());
    for (const Matrix& theta : estimate.matrices) {
        if (theta.rows() != theta.cols()) throw DimensionMismatch("precision matrix not square");
        Matrix sym = theta;
        for (Index j = 0; j < theta.cols(); ++j)
            for (Index i = 0; i < j; ++i) {
                const double a = theta(i, j);
                const double b = theta(j, i);
                const double v = std::abs(a) <= std::abs(b) ? a : b;
                sym(i, j) = v;
                sym(j, i) = v;
            }
        out.matrices.push_back(std::move(sym));
    }
    return out;
}

double SupportSets::average_frequency(Index node) const {
    const auto j = static_cast<std::size_t>(node);
    if (union_size.at(j) == 0) return 0.0;
    return static_cast<double>(edge_count[j]) / static_cast<double>(union_size[j]);
}

SupportSets support_sets(const JointPrecision& estimate) {
    const std::size_t K = estimate.num_datasets();
    const Index p = estimate.num_covariates();
    SupportSets out;
    out.neighbors.assign(K, std::vector<std::vector<Index>>(static_cast<std::size_t>(p)));
    out.union_neighbors.resize(static_cast<std::size_t>(p));
    out.union_size.assign(static_cast<std::size_t>(p), 0);
    out.edge_count.assign(static_cast<std::size_t>(p), 0);
    for (Index j = 0; j < p; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        for (Index i = 0; i < p; ++i) {
            if (i == j) continue;
            bool any = false;
            for (std::size_t k = 0; k < K; ++k)
                if (estimate.matrices[k](i, j) != 0.0) {
                    out.neighbors[k][jj].push_back(i);
                    ++out.edge_count[jj];
                    any = true;
                }
            if (any) out.union_neighbors[jj].push_back(i);
        }
        out.union_size[jj] = static_cast<Index>(out.union_neighbors[jj].size());
    }
    return out;
}

}  // namespace might
