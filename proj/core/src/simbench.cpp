#include "might/simbench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "might/errors.hpp"
#include "might/inference.hpp"
#include "might/normal.hpp"
#include "might/parallel.hpp"
#include "might/rng.hpp"

namespace might {

void ExperimentSpec::check() const {
    if (p < 2) throw InvalidArgument("p must be at least 2");
    if (K < 1) throw InvalidArgument("K must be at least 1");
    if (n.empty() || (n.size() != 1 && n.size() != K))
        throw InvalidArgument("n must hold one value or one per dataset");
    for (Index nk : n)
        if (nk < 2) throw InvalidArgument("every n_k must be at least 2");
    if (!(edge_prob > 0.0 && edge_prob < 1.0))
        throw InvalidArgument("edge_prob must lie in (0, 1)");
    if (!(rho >= 0.0 && rho < 1.0)) throw InvalidArgument("rho must lie in [0, 1)");
    if (!(r > 0.0 && std::isfinite(r))) throw InvalidArgument("r must be positive");
    if (replications < 1) throw InvalidArgument("replications must be at least 1");
    solver.check(K);
    if (global_s0 && !(*global_s0 >= 1.0 && *global_s0 <= static_cast<double>(K)))
        throw InvalidArgument("global s0 must lie in [1, K]");
}

std::vector<Index> ExperimentSpec::sample_sizes() const {
    if (n.size() == 1) return std::vector<Index>(K, n.front());
    return n;
}

GroundTruth generate_truth(const ExperimentSpec& spec, std::uint64_t seed) {
    const Index p = spec.p;
    const std::size_t K = spec.K;
    GroundTruth truth;

    CounterRng graph(CounterRng::derive(seed, Stream::base_graph));
    for (Index i = 0; i < p; ++i)
        for (Index j = i + 1; j < p; ++j)
            if (graph.uniform() < spec.edge_prob) truth.base_edges.emplace_back(i, j);

    for (std::size_t k = 0; k < K; ++k) {
        CounterRng prune(CounterRng::derive(seed, Stream::pruning, k));
        CounterRng values(CounterRng::derive(seed, Stream::edge_values, k));
        Matrix omega = Matrix::Zero(p, p);
        for (const auto& [i, j] : truth.base_edges) {
            const bool removed = prune.uniform() < spec.rho;
            // Values are drawn for every base edge so that they do not shift with rho.
            const double magnitude = 0.5 + 0.5 * values.uniform();
            const double sign = values.uniform() < 0.5 ? -1.0 : 1.0;
            if (removed) continue;
            omega(i, j) = sign * magnitude;
            omega(j, i) = sign * magnitude;
        }

        const Eigen::SelfAdjointEigenSolver<Matrix> eig(omega, Eigen::EigenvaluesOnly);
        const double lambda_min = eig.eigenvalues().minCoeff();
        Matrix theta = omega;
        theta.diagonal().array() += spec.r + std::abs(lambda_min);

        const Eigen::LLT<Matrix> theta_llt(theta);
        Matrix sigma = theta_llt.solve(Matrix::Identity(p, p));
        sigma = 0.5 * (sigma + sigma.transpose()).eval();
        Matrix factor = Eigen::LLT<Matrix>(sigma).matrixL();

        truth.omega.push_back(std::move(omega));
        truth.theta.push_back(std::move(theta));
        truth.sigma_factor.push_back(std::move(factor));
    }

    for (Index j = 0; j < p; ++j) {
        Index union_count = 0;
        Index edge_count = 0;
        for (Index i = 0; i < p; ++i) {
            if (i == j) continue;
            bool any = false;
            for (std::size_t k = 0; k < K; ++k)
                if (truth.theta[k](i, j) != 0.0) {
                    ++edge_count;
                    any = true;
                }
            if (any) ++union_count;
        }
        truth.realized_s = std::max(truth.realized_s, union_count);
        if (union_count > 0)
            truth.realized_s0 = std::max(truth.realized_s0, static_cast<double>(edge_count) /
                                                                static_cast<double>(union_count));
    }
    return truth;
}

DatasetCollection sample_data(const GroundTruth& truth, std::span<const Index> sample_sizes,
                              std::uint64_t seed) {
    const std::size_t K = truth.num_datasets();
    if (sample_sizes.size() != K) throw DimensionMismatch("one sample size per dataset needed");
    const Index p = truth.num_covariates();
    std::vector<Matrix> data;
    data.reserve(K);
    Vector g(p);
    for (std::size_t k = 0; k < K; ++k) {
        const Index nk = sample_sizes[k];
        Matrix x(nk, p);
        const Matrix& factor = truth.sigma_factor[k];
        for (Index row = 0; row < nk; ++row) {
            CounterRng rng(CounterRng::derive(seed, Stream::data, k, static_cast<std::uint64_t>(row)));
            for (Index c = 0; c < p; ++c) g(c) = rng.normal();
            x.row(row).noalias() = (factor.triangularView<Eigen::Lower>() * g).transpose();
        }
        data.push_back(std::move(x));
    }
    return DatasetCollection(std::move(data));
}

double matthews(double tp, double fp, double tn, double fn) {
    const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (!(denom > 0.0)) return 0.0;
    return (tp * tn - fp * fn) / std::sqrt(denom);
}

MetricReport metrics(const JointPrecision& estimate, const GroundTruth& truth,
                     std::span<const Index> sample_sizes) {
    const std::size_t K = truth.num_datasets();
    const Index p = truth.num_covariates();
    if (estimate.num_datasets() != K || estimate.num_covariates() != p ||
        sample_sizes.size() != K)
        throw DimensionMismatch("estimate and truth disagree in shape");

    double N = 0.0;
    for (Index nk : sample_sizes) N += static_cast<double>(nk);

    MetricReport out;
    Vector column_error = Vector::Zero(p);
    double etp = 0, efp = 0, etn = 0, efn = 0;
    for (std::size_t k = 0; k < K; ++k) {
        const double w = static_cast<double>(sample_sizes[k]) / N;
        const Matrix diff = estimate.matrices[k] - truth.theta[k];
        out.frobenius += w * diff.norm();
        column_error += w * diff.colwise().squaredNorm().transpose();
        for (Index j = 0; j < p; ++j)
            for (Index i = 0; i < j; ++i) {
                const bool predicted = estimate.matrices[k](i, j) != 0.0;
                const bool actual = truth.theta[k](i, j) != 0.0;
                if (predicted && actual) ++etp;
                else if (predicted) ++efp;
                else if (actual) ++efn;
                else ++etn;
            }
    }
    out.max_l2 = column_error.maxCoeff();
    out.mcc_edge = matthews(etp, efp, etn, efn);

    double ntp = 0, nfp = 0, ntn = 0, nfn = 0;
    for (Index j = 0; j < p; ++j)
        for (Index i = 0; i < j; ++i) {
            bool predicted = false;
            bool actual = false;
            for (std::size_t k = 0; k < K; ++k) {
                predicted = predicted || estimate.matrices[k](i, j) != 0.0;
                actual = actual || truth.theta[k](i, j) != 0.0;
            }
            if (predicted && actual) ++ntp;
            else if (predicted) ++nfp;
            else if (actual) ++nfn;
            else ++ntn;
        }
    out.mcc_ngbr = matthews(ntp, nfp, ntn, nfn);
    return out;
}

MetricSummary summarize(std::span<const double> values) {
    MetricSummary s;
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return s;
}

std::uint64_t replication_seed(std::uint64_t master, int index) {
    return CounterRng::derive(master, Stream::replication, static_cast<std::uint64_t>(index));
}

SimulatedReplication simulate_replication(const ExperimentSpec& spec, int index) {
    const std::uint64_t seed = replication_seed(spec.seed, index);
    GroundTruth truth = generate_truth(spec, CounterRng::derive(seed, Stream::truth));
    DatasetCollection data =
        sample_data(truth, spec.sample_sizes(), CounterRng::derive(seed, Stream::data));
    return {std::move(truth), std::move(data)};
}

ReplicationRecord run_replication(const ExperimentSpec& spec, int index, int workers) {
    const auto start = std::chrono::steady_clock::now();
    ReplicationRecord rec;
    rec.index = index;
    rec.seed = replication_seed(spec.seed, index);

    const auto [truth, data] = simulate_replication(spec, index);
    const std::vector<Index> sizes = spec.sample_sizes();

    EstimateOptions options;
    options.solver = spec.solver;
    options.workers = workers;
    options.global_s0 = spec.global_s0;
    JointPrecision fit = estimate(data, options).precision;
    if (spec.symmetrize) fit = symmetrize(fit);

    rec.metrics = metrics(fit, truth, sizes);
    rec.realized_s0 = truth.realized_s0;
    rec.realized_s = truth.realized_s;
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

ExperimentTable run_experiment(const ExperimentSpec& spec, int workers) {
    spec.check();
    const auto start = std::chrono::steady_clock::now();
    ExperimentTable table;
    const auto reps = static_cast<std::size_t>(spec.replications);
    table.rows.resize(reps);
    const int inner = reps == 1 ? workers : 1;
    parallel_for(reps, workers, [&](std::size_t r) {
        try {
            table.rows[r] = run_replication(spec, static_cast<int>(r), inner);
        } catch (const Error& e) {
            throw Error(e.category(), "replication " + std::to_string(r + 1) + ": " + e.what());
        }
    });

    std::vector<double> fro, l2, edge, ngbr;
    for (const auto& row : table.rows) {
        fro.push_back(row.metrics.frobenius);
        l2.push_back(row.metrics.max_l2);
        edge.push_back(row.metrics.mcc_edge);
        ngbr.push_back(row.metrics.mcc_ngbr);
    }
    table.frobenius = summarize(fro);
    table.max_l2 = summarize(l2);
    table.mcc_edge = summarize(edge);
    table.mcc_ngbr = summarize(ngbr);
    table.total_wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return table;
}

EntryEstimator might_entry_estimator(const ExperimentSpec& spec) {
    EstimateOptions options;
    options.solver = spec.solver;
    options.global_s0 = spec.global_s0;
    const bool sym = spec.symmetrize;
    return [options, sym](const DatasetCollection& data, std::span<const TargetEntry> entries,
                          std::uint64_t) {
        JointPrecision fit = estimate(data, options).precision;
        if (sym) fit = symmetrize(fit);
        std::vector<std::optional<EntryDraw>> out;
        out.reserve(entries.size());
        for (const TargetEntry& e : entries) {
            if (fit.matrices[e.dataset](e.row, e.col) == 0.0) {
                out.emplace_back();
                continue;
            }
            const auto variances = variance_estimate(data, fit, e.dataset, e.col);
            const auto it = std::find_if(variances.begin(), variances.end(),
                                         [&](const EntryVariance& v) { return v.row == e.row; });
            const double root_n =
                std::sqrt(static_cast<double>(data.num_observations(e.dataset)));
            out.push_back(EntryDraw{fit.matrices[e.dataset](e.row, e.col),
                                    std::sqrt(it->variance) / root_n});
        }
        return out;
    };
}

std::optional<std::uint64_t> find_truth_seed(const ExperimentSpec& spec,
                                             std::span<const TargetEntry> entries,
                                             int max_tries) {
    for (int t = 0; t < max_tries; ++t) {
        const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(t);
        const GroundTruth truth = generate_truth(spec, seed);
        const bool all = std::all_of(entries.begin(), entries.end(), [&](const TargetEntry& e) {
            return e.dataset < truth.num_datasets() && truth.theta[e.dataset](e.row, e.col) != 0.0;
        });
        if (all) return seed;
    }
    return std::nullopt;
}

NormalityStudy normality_study(const ExperimentSpec& spec, std::span<const TargetEntry> entries,
                               int replications, int workers, EntryEstimator estimator) {
    spec.check();
    if (replications < 0) throw InvalidArgument("replications must be non-negative");
    if (!estimator) estimator = might_entry_estimator(spec);

    NormalityStudy study;
    study.truth = generate_truth(spec, spec.seed);
    for (const TargetEntry& e : entries)
        if (e.dataset >= spec.K || e.row < 0 || e.row >= spec.p || e.col < 0 || e.col >= spec.p)
            throw InvalidArgument("target entry out of range");

    const std::vector<Index> sizes = spec.sample_sizes();
    const auto reps = static_cast<std::size_t>(replications);
    std::vector<std::vector<std::optional<EntryDraw>>> draws(reps);
    parallel_for(reps, workers, [&](std::size_t r) {
        const std::uint64_t seed = replication_seed(spec.seed, static_cast<int>(r));
        const DatasetCollection data =
            sample_data(study.truth, sizes, CounterRng::derive(seed, Stream::data));
        draws[r] = estimator(data, entries, seed);
    });

    for (std::size_t t = 0; t < entries.size(); ++t) {
        EntryStudy es;
        es.entry = entries[t];
        es.truth = study.truth.theta[es.entry.dataset](es.entry.row, es.entry.col);
        for (const auto& rep : draws) {
            if (!rep.at(t)) {
                ++es.unselected;
                continue;
            }
            es.z.push_back((rep[t]->estimate - es.truth) / rep[t]->std_error);
        }
        es.mean = summarize(es.z).mean;
        es.ks = ks_statistic_normal(es.z);
        study.entries.push_back(std::move(es));
    }
    return study;
}

}  // namespace might
