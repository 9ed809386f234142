#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "might/model.hpp"

namespace might {

/// Quadratic discriminant classifier built from per-class precision matrices.
/// Class k of the training collection is dataset k.
struct QdaModel {
    Vector log_priors;            ///< log(n_k / N)
    std::vector<Vector> means;    ///< class means
    std::vector<Matrix> precisions;
    Vector log_dets;              ///< log|Theta^(k)| after eigenvalue flooring

    std::size_t num_classes() const noexcept { return means.size(); }
};

/// The log-determinant uses eigenvalues floored at 1e-6 * max(lambda_max, 1);
/// the quadratic term keeps the unrepaired matrix.
QdaModel fit_qda(const DatasetCollection& train, const JointPrecision& estimate);

struct Classification {
    std::size_t label = 0;  ///< zero-based class; ties go to the smallest index
    Vector scores;          ///< delta_k(x)
};

Classification classify(const QdaModel& model, const Eigen::Ref<const Vector>& x);

struct ClassificationReport {
    double tpr = 0;       ///< macro average over classes
    double fpr = 0;       ///< macro average over classes
    double accuracy = 0;  ///< overall
    double mcc = 0;       ///< macro average of one-vs-rest MCC
    Matrix confusion;     ///< rows: true class, columns: predicted
};

/// Labels and scores for every row of every class in `test`.
std::vector<Classification> predict(const QdaModel& model, const DatasetCollection& test,
                                    int workers = 1);

ClassificationReport evaluate(const QdaModel& model, const DatasetCollection& test,
                              int workers = 1);

/// Builds the report from (true, predicted) label pairs.
ClassificationReport report_from_labels(std::span<const std::size_t> truth,
                                        std::span<const std::size_t> predicted,
                                        std::size_t num_classes);

enum class SplitRounding { floor, nearest };

/// Per class, round(fraction * n_k) rows (by `rounding`) go to training after
/// a seeded shuffle. Throws EmptyClassSplit if either side would be empty.
std::pair<DatasetCollection, DatasetCollection> stratified_split(
    const DatasetCollection& collection, double fraction, std::uint64_t seed,
    SplitRounding rounding = SplitRounding::floor);

}  // namespace might
