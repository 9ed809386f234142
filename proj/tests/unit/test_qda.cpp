#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <might/errors.hpp>
#include <might/qda.hpp>

#include "helpers.hpp"

using namespace might;

namespace {

std::vector<std::vector<double>> sorted_rows(const Matrix& m) {
    std::vector<std::vector<double>> rows;
    for (Index l = 0; l < m.rows(); ++l) {
        const Vector row = m.row(l).transpose();
        rows.emplace_back(row.data(), row.data() + row.size());
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

DatasetCollection sized_classes(const std::vector<Index>& sizes) {
    std::vector<Matrix> data;
    Index offset = 0;
    for (Index n : sizes) {
        Matrix m(n, 2);
        for (Index l = 0; l < n; ++l) m.row(l) << double(offset + l), double(-(offset + l));
        offset += n;
        data.push_back(m);
    }
    return DatasetCollection(data);
}

}  // namespace

TEST_SUITE("qda") {

TEST_CASE("one-dimensional two-class hand case") {
    Matrix a(2, 1), b(2, 1);
    a << 0.0, 2.0;   // mean +1
    b << -2.0, 0.0;  // mean -1
    const auto model = fit_qda(DatasetCollection({a, b}),
                               JointPrecision{{Matrix::Ones(1, 1), Matrix::Ones(1, 1)}, true});
    CHECK(model.log_priors(0) == model.log_priors(1));
    Vector x(1);
    x << 0.3;
    const auto c = classify(model, x);
    CHECK(c.label == 0);
    CHECK(c.scores(0) - c.scores(1) == doctest::Approx(0.6));
}

TEST_CASE("identity precisions classify by nearest mean") {
    std::vector<Matrix> data;
    const double centers[3][2] = {{0, 0}, {4, 0}, {0, 4}};
    for (const auto& ctr : centers) {
        Matrix m(2, 2);
        m << ctr[0] + 1, ctr[1], ctr[0] - 1, ctr[1];
        data.push_back(m);
    }
    const auto model = fit_qda(DatasetCollection(data),
                               JointPrecision{std::vector<Matrix>(3, Matrix::Identity(2, 2)), true});
    CounterRng rng(4);
    for (int t = 0; t < 200; ++t) {
        Vector x(2);
        x << 6 * rng.uniform() - 1, 6 * rng.uniform() - 1;
        std::size_t nearest = 0;
        double best = 1e300;
        for (std::size_t k = 0; k < 3; ++k) {
            const double d = (x - model.means[k]).squaredNorm();
            if (d < best) { best = d; nearest = k; }
        }
        CHECK(classify(model, x).label == nearest);
    }
    CHECK(classify(model, model.means[0]).label == 0);
}

TEST_CASE("identical classes tie to the first label") {
    const Matrix x = test::gaussian(10, 3, 1);
    const auto model = fit_qda(DatasetCollection({x, x, x}),
                               JointPrecision{std::vector<Matrix>(3, Matrix::Identity(3, 3)), true});
    const auto c = classify(model, Vector::Constant(3, 0.7));
    CHECK(c.label == 0);
    CHECK(c.scores(0) == c.scores(1));
    CHECK(c.scores(1) == c.scores(2));
    CHECK_THROWS_AS(classify(model, Vector::Zero(2)), DimensionMismatch);
}

TEST_CASE("well separated classes with the true precision") {
    Matrix theta = Matrix::Identity(10, 10);
    for (Index i = 0; i + 1 < 10; ++i) theta(i, i + 1) = theta(i + 1, i) = 0.3;
    std::vector<Matrix> train, test;
    for (int k = 0; k < 2; ++k) {
        Matrix a = test::sample_precision(theta, 500, 10 + k);
        Matrix b = test::sample_precision(theta, 500, 20 + k);
        a.array() += 3.0 * k;
        b.array() += 3.0 * k;
        train.push_back(a);
        test.push_back(b);
    }
    const auto model = fit_qda(DatasetCollection(train), JointPrecision{{theta, theta}, true});
    const auto report = evaluate(model, DatasetCollection(test), 4);
    CHECK(report.accuracy >= 0.99);
    CHECK(report.confusion.sum() == 1000.0);
}

TEST_CASE("report from labels") {
    const std::vector<std::size_t> truth{0, 0, 1, 1, 2, 2, 3, 3, 4, 4};
    const auto perfect = report_from_labels(truth, truth, 5);
    CHECK(perfect.tpr == 1.0);
    CHECK(perfect.fpr == 0.0);
    CHECK(perfect.accuracy == 1.0);
    CHECK(perfect.mcc == doctest::Approx(1.0));

    const std::vector<std::size_t> constant(10, 2);
    const auto flat = report_from_labels(truth, constant, 5);
    CHECK(flat.accuracy == doctest::Approx(0.2));
    // Classes never predicted and the always-predicted class both have a
    // vanishing MCC denominator.
    CHECK(flat.mcc == 0.0);
    CHECK(flat.confusion(0, 2) == 2.0);
}

TEST_CASE("scores are translation invariant") {
    Matrix a = test::gaussian(8, 3, 5), b = test::gaussian(8, 3, 6);
    // Dyadic values keep every shift exact.
    a = (a * 8).array().round() / 8;
    b = (b * 8).array().round() / 8;
    Matrix theta(3, 3);
    theta << 2, 0.5, 0, 0.5, 2, 0.25, 0, 0.25, 1;
    const JointPrecision est{{theta, 2 * theta}, true};
    const auto m1 = fit_qda(DatasetCollection({a, b}), est);
    const auto m2 = fit_qda(DatasetCollection({(a.array() + 4.0).matrix(), (b.array() + 4.0).matrix()}), est);
    Vector x(3);
    x << 0.5, -1.25, 0.75;
    const auto s1 = classify(m1, x).scores;
    const auto s2 = classify(m2, (x.array() + 4.0).matrix()).scores;
    CHECK(s1 == s2);
}

TEST_CASE("doubling a precision shifts the score by the log-det and quadratic terms") {
    const Matrix a = test::gaussian(20, 4, 7);
    Matrix theta = Matrix::Identity(4, 4) * 1.5;
    theta(0, 1) = theta(1, 0) = 0.4;
    const auto m1 = fit_qda(DatasetCollection({a}), JointPrecision{{theta}, true});
    const auto m2 = fit_qda(DatasetCollection({a}), JointPrecision{{2 * theta}, true});
    const Vector x = Vector::LinSpaced(4, -1, 1);
    const Vector d = x - m1.means[0];
    const double q = d.dot(theta * d);
    const double shift = classify(m2, x).scores(0) - classify(m1, x).scores(0);
    CHECK(shift == doctest::Approx(0.5 * 4 * std::log(2.0) - 0.5 * q));
}

TEST_CASE("indefinite estimates are repaired for the log-determinant only") {
    Matrix theta(2, 2);
    theta << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
    const auto model = fit_qda(DatasetCollection({test::gaussian(5, 2, 1)}), JointPrecision{{theta}, true});
    CHECK(std::isfinite(model.log_dets(0)));
    CHECK(model.log_dets(0) == doctest::Approx(std::log(3.0) + std::log(3e-6)));
    CHECK(model.precisions[0] == theta);
}

TEST_CASE("stratified split counts") {
    const auto c = sized_classes({300, 78, 146, 141, 136});
    auto count = [](const DatasetCollection& d) {
        Index total = 0;
        for (std::size_t k = 0; k < d.num_datasets(); ++k) total += d.num_observations(k);
        return total;
    };
    const auto [tr_floor, te_floor] = stratified_split(c, 0.8, 1, SplitRounding::floor);
    CHECK(count(tr_floor) == 638);
    CHECK(count(te_floor) == 163);
    const auto [tr_near, te_near] = stratified_split(c, 0.8, 1, SplitRounding::nearest);
    CHECK(count(tr_near) == 641);
    CHECK(count(te_near) == 160);
    CHECK(tr_near.num_observations(2) == 117);
}

TEST_CASE("split halves, determinism and partition") {
    const auto two = sized_classes({2, 2});
    const auto [tr, te] = stratified_split(two, 0.5, 3);
    CHECK(tr.num_observations(0) == 1);
    CHECK(te.num_observations(1) == 1);

    const auto c = sized_classes({20, 13});
    const auto [a1, b1] = stratified_split(c, 0.7, 9);
    const auto [a2, b2] = stratified_split(c, 0.7, 9);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(a1.dataset(k) == a2.dataset(k));
        Matrix both(c.num_observations(k), 2);
        both << a1.dataset(k), b1.dataset(k);
        CHECK(sorted_rows(both) == sorted_rows(c.dataset(k)));
    }
    CHECK_THROWS_AS(stratified_split(sized_classes({1, 5}), 0.5, 1), EmptyClassSplit);
}

}  // TEST_SUITE
