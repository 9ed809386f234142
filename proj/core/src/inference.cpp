#include "might/inference.hpp"

#include <tuple>

#include <cmath>
#include <string>

#include "might/errors.hpp"
#include "might/normal.hpp"
#include "might/parallel.hpp"

namespace might {

namespace {

constexpr double kMinReciprocalCondition = 1e-10;

}  // namespace

std::vector<EntryVariance> variance_estimate(const DatasetCollection& collection,
                                             const JointPrecision& estimate, std::size_t k,
                                             Index node) {
    const Matrix& x = collection.dataset(k);
    const Matrix& theta = estimate.matrices.at(k);
    const Index p = theta.rows();
    if (x.cols() != p) throw DimensionMismatch("estimate and data disagree on p");
    if (node < 0 || node >= p) throw InvalidArgument("node out of range");

    std::vector<Index> support;
    Index node_pos = 0;
    for (Index i = 0; i < p; ++i)
        if (i == node || theta(i, node) != 0.0) {
            if (i == node) node_pos = static_cast<Index>(support.size());
            support.push_back(i);
        }
    const Index s = static_cast<Index>(support.size());
    const Index n = x.rows();
    if (s > n) throw SupportTooLarge(k, static_cast<std::size_t>(node));

    Matrix xs(n, s);
    for (Index a = 0; a < s; ++a) xs.col(a) = x.col(support[static_cast<std::size_t>(a)]);
    Matrix sub = Matrix::Zero(s, s);
    sub.selfadjointView<Eigen::Lower>().rankUpdate(xs.transpose());
    sub.triangularView<Eigen::StrictlyUpper>() = sub.transpose();
    sub /= static_cast<double>(n);

    const Eigen::LLT<Matrix> llt(sub);
    if (llt.info() != Eigen::Success || !(llt.rcond() >= kMinReciprocalCondition))
        throw SingularSubmatrix(k, static_cast<std::size_t>(node));

    // Row l of A is (Sigma_SS^{-1} x_l)^T.
    const Matrix a = llt.solve(xs.transpose()).transpose();

    std::vector<EntryVariance> out;
    out.reserve(static_cast<std::size_t>(s));
    const auto aj = a.col(node_pos);
    for (Index idx = 0; idx < s; ++idx) {
        const Index i = support[static_cast<std::size_t>(idx)];
        const double second = (a.col(idx).cwiseProduct(aj)).squaredNorm() / static_cast<double>(n);
        const double t = theta(i, node);
        double v = second - t * t;
        bool floored = false;
        if (!(v >= kVarianceFloor)) {
            v = kVarianceFloor;
            floored = true;
        }
        out.push_back({i, v, floored});
    }
    return out;
}

std::pair<double, double> confidence_interval(double estimate, double std_error, double level) {
    if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("level must lie in (0, 1)");
    const double half = normal_quantile(1.0 - (1.0 - level) / 2.0) * std_error;
    return {estimate - half, estimate + half};
}

InferenceResult z_scores(const DatasetCollection& collection, const JointPrecision& estimate,
                         double level, double hypothesized, int workers) {
    if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("level must lie in (0, 1)");
    const std::size_t K = estimate.num_datasets();
    if (collection.num_datasets() != K) throw DimensionMismatch("dataset count differs");
    const Index p = estimate.num_covariates();

    const std::size_t jobs = K * static_cast<std::size_t>(p);
    std::vector<std::vector<InferenceEntry>> per_job(jobs);
    std::vector<std::size_t> floors(jobs, 0);
    parallel_for(jobs, workers, [&](std::size_t job) {
        const std::size_t k = job / static_cast<std::size_t>(p);
        const Index j = static_cast<Index>(job % static_cast<std::size_t>(p));
        const double root_n = std::sqrt(static_cast<double>(collection.num_observations(k)));
        for (const EntryVariance& ev : variance_estimate(collection, estimate, k, j)) {
            InferenceEntry e;
            e.dataset = k;
            e.node = j;
            e.row = ev.row;
            e.level = level;
            e.estimate = estimate.matrices[k](ev.row, j);
            e.std_error = std::sqrt(ev.variance) / root_n;
            e.z_score = (e.estimate - hypothesized) / e.std_error;
            std::tie(e.ci_low, e.ci_high) = confidence_interval(e.estimate, e.std_error, level);
            per_job[job].push_back(e);
            if (ev.floored) ++floors[job];
        }
    });

    InferenceResult out;
    for (std::size_t job = 0; job < jobs; ++job) {
        out.entries.insert(out.entries.end(), per_job[job].begin(), per_job[job].end());
        out.floored += floors[job];
    }
    return out;
}

}  // namespace might
