#include "might/qda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "might/errors.hpp"
#include "might/parallel.hpp"
#include "might/rng.hpp"
#include "might/simbench.hpp"

namespace might {

namespace {

constexpr double kEigenFloor = 1e-6;

double repaired_log_det(const Matrix& theta, std::size_t cls) {
    const Matrix sym = 0.5 * (theta + theta.transpose());
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw NonRepairableMatrix(cls);
    const Vector& values = eig.eigenvalues();
    const double floor = kEigenFloor * std::max(values.maxCoeff(), 1.0);
    double log_det = 0.0;
    for (Index i = 0; i < values.size(); ++i) log_det += std::log(std::max(values(i), floor));
    if (!std::isfinite(log_det)) throw NonRepairableMatrix(cls);
    return log_det;
}

}  // namespace

QdaModel fit_qda(const DatasetCollection& train, const JointPrecision& estimate) {
    const std::size_t K = train.num_datasets();
    const Index p = train.num_covariates();
    if (K == 0) throw InvalidArgument("no classes supplied");
    if (estimate.num_datasets() != K)
        throw DimensionMismatch("estimate has " + std::to_string(estimate.num_datasets()) +
                                " matrices for " + std::to_string(K) + " classes");
    if (estimate.num_covariates() != p)
        throw DimensionMismatch("estimate and training data disagree on p");

    QdaModel model;
    model.log_priors.resize(static_cast<Index>(K));
    model.log_dets.resize(static_cast<Index>(K));
    const double N = static_cast<double>(train.total_observations());
    for (std::size_t k = 0; k < K; ++k) {
        const Matrix& x = train.dataset(k);
        if (x.cols() != p) throw DimensionMismatch("class " + std::to_string(k + 1));
        if (x.rows() == 0) throw InvalidArgument("class " + std::to_string(k + 1) + " is empty");
        model.log_priors(static_cast<Index>(k)) = std::log(static_cast<double>(x.rows()) / N);
        model.means.push_back(x.colwise().mean().transpose());
        model.precisions.push_back(estimate.matrices[k]);
        model.log_dets(static_cast<Index>(k)) = repaired_log_det(estimate.matrices[k], k);
    }
    return model;
}

Classification classify(const QdaModel& model, const Eigen::Ref<const Vector>& x) {
    const std::size_t K = model.num_classes();
    if (K == 0) throw InvalidArgument("model has no classes");
    if (x.size() != model.means.front().size())
        throw DimensionMismatch("observation has " + std::to_string(x.size()) +
                                " covariates, model expects " +
                                std::to_string(model.means.front().size()));
    Classification out;
    out.scores.resize(static_cast<Index>(K));
    for (std::size_t k = 0; k < K; ++k) {
        const Index kk = static_cast<Index>(k);
        const Vector d = x - model.means[k];
        out.scores(kk) = model.log_priors(kk) + 0.5 * model.log_dets(kk) -
                         0.5 * d.dot(model.precisions[k] * d);
        if (out.scores(kk) > out.scores(static_cast<Index>(out.label))) out.label = k;
    }
    return out;
}

std::vector<Classification> predict(const QdaModel& model, const DatasetCollection& test,
                                    int workers) {
    std::vector<std::pair<std::size_t, Index>> rows;
    for (std::size_t k = 0; k < test.num_datasets(); ++k)
        for (Index r = 0; r < test.num_observations(k); ++r) rows.emplace_back(k, r);
    std::vector<Classification> out(rows.size());
    parallel_for(rows.size(), workers, [&](std::size_t i) {
        out[i] = classify(model, test.dataset(rows[i].first).row(rows[i].second).transpose());
    });
    return out;
}

ClassificationReport report_from_labels(std::span<const std::size_t> truth,
                                        std::span<const std::size_t> predicted,
                                        std::size_t num_classes) {
    if (truth.size() != predicted.size()) throw DimensionMismatch("label vectors differ");
    const Index C = static_cast<Index>(num_classes);
    ClassificationReport rep;
    rep.confusion = Matrix::Zero(C, C);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] >= num_classes || predicted[i] >= num_classes)
            throw InvalidArgument("label out of range");
        rep.confusion(static_cast<Index>(truth[i]), static_cast<Index>(predicted[i])) += 1.0;
    }
    const double total = rep.confusion.sum();
    if (total == 0.0 || C == 0) return rep;
    rep.accuracy = rep.confusion.trace() / total;
    for (Index c = 0; c < C; ++c) {
        const double tp = rep.confusion(c, c);
        const double fn = rep.confusion.row(c).sum() - tp;
        const double fp = rep.confusion.col(c).sum() - tp;
        const double tn = total - tp - fn - fp;
        rep.tpr += tp + fn > 0 ? tp / (tp + fn) : 0.0;
        rep.fpr += fp + tn > 0 ? fp / (fp + tn) : 0.0;
        rep.mcc += matthews(tp, fp, tn, fn);
    }
    rep.tpr /= static_cast<double>(C);
    rep.fpr /= static_cast<double>(C);
    rep.mcc /= static_cast<double>(C);
    return rep;
}

ClassificationReport evaluate(const QdaModel& model, const DatasetCollection& test, int workers) {
    if (test.num_datasets() != model.num_classes())
        throw DimensionMismatch("test set has " + std::to_string(test.num_datasets()) +
                                " classes, model has " + std::to_string(model.num_classes()));
    const auto predictions = predict(model, test, workers);
    std::vector<std::size_t> truth;
    std::vector<std::size_t> labels;
    truth.reserve(predictions.size());
    labels.reserve(predictions.size());
    std::size_t i = 0;
    for (std::size_t k = 0; k < test.num_datasets(); ++k)
        for (Index r = 0; r < test.num_observations(k); ++r, ++i) {
            truth.push_back(k);
            labels.push_back(predictions[i].label);
        }
    return report_from_labels(truth, labels, model.num_classes());
}

std::pair<DatasetCollection, DatasetCollection> stratified_split(
    const DatasetCollection& collection, double fraction, std::uint64_t seed,
    SplitRounding rounding) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw InvalidArgument("split fraction must lie in (0, 1)");
    std::vector<Matrix> train;
    std::vector<Matrix> test;
    for (std::size_t k = 0; k < collection.num_datasets(); ++k) {
        const Matrix& x = collection.dataset(k);
        const Index n = x.rows();
        const double target = fraction * static_cast<double>(n);
        const Index m = static_cast<Index>(rounding == SplitRounding::floor ? std::floor(target)
                                                                            : std::round(target));
        if (m <= 0 || m >= n) throw EmptyClassSplit(k);

        std::vector<Index> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), Index{0});
        CounterRng rng(CounterRng::derive(seed, Stream::split, k));
        shuffle(std::span<Index>(order), rng);
        std::sort(order.begin(), order.begin() + m);
        std::sort(order.begin() + m, order.end());

        Matrix tr(m, x.cols());
        Matrix te(n - m, x.cols());
        for (Index i = 0; i < m; ++i) tr.row(i) = x.row(order[static_cast<std::size_t>(i)]);
        for (Index i = m; i < n; ++i) te.row(i - m) = x.row(order[static_cast<std::size_t>(i)]);
        train.push_back(std::move(tr));
        test.push_back(std::move(te));
    }
    return {DatasetCollection(std::move(train), collection.covariate_names()),
            DatasetCollection(std::move(test), collection.covariate_names())};
}

}  // namespace might
