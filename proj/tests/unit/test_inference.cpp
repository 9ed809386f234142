#include <doctest.h>

#include <cmath>

#include <might/errors.hpp>
#include <might/inference.hpp>
#include <might/normal.hpp>

#include "helpers.hpp"

using namespace might;

namespace {

const EntryVariance& entry_for(const std::vector<EntryVariance>& v, Index row) {
    for (const auto& e : v)
        if (e.row == row) return e;
    throw std::runtime_error("row not in support");
}

}  // namespace

TEST_SUITE("inference") {

TEST_CASE("diagonal variance tends to 2 under an identity precision") {
    const auto c = test::noise_collection({100000}, 3, 42);
    const JointPrecision est{{Matrix::Identity(3, 3)}, true};
    const auto v = variance_estimate(c, est, 0, 1);
    REQUIRE(v.size() == 1);
    CHECK(v[0].row == 1);
    CHECK(v[0].variance == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("isolated node variance formula") {
    const auto c = test::noise_collection({200}, 3, 8);
    Matrix theta = Matrix::Identity(3, 3);
    theta(2, 2) = 1.1;
    const auto v = variance_estimate(c, JointPrecision{{theta}, true}, 0, 2);
    REQUIRE(v.size() == 1);
    const Vector x = c.dataset(0).col(2);
    const double s = x.squaredNorm() / 200.0;
    const double expected = (x.array().square() / (s * s)).square().mean() - 1.1 * 1.1;
    CHECK(v[0].variance == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("duplicated covariates in the support are singular") {
    Matrix x = test::gaussian(50, 3, 4);
    x.col(2) = x.col(0);
    Matrix theta = Matrix::Identity(3, 3);
    theta(0, 2) = theta(2, 0) = 0.2;
    CHECK_THROWS_AS(variance_estimate(DatasetCollection({x}), JointPrecision{{theta}, true}, 0, 2),
                    SingularSubmatrix);
}

TEST_CASE("support larger than the sample is rejected") {
    const auto c = test::noise_collection({3}, 5, 1);
    const Matrix theta = Matrix::Constant(5, 5, 0.1) + Matrix::Identity(5, 5);
    CHECK_THROWS_AS(variance_estimate(c, JointPrecision{{theta}, true}, 0, 0), SupportTooLarge);
}

TEST_CASE("confidence interval arithmetic") {
    const auto [lo, hi] = confidence_interval(0.3, 0.1, 0.95);
    CHECK(lo == doctest::Approx(0.104).epsilon(1e-3));
    CHECK(hi == doctest::Approx(0.496).epsilon(1e-3));
    CHECK(lo == doctest::Approx(0.3 - 0.1959963984540054).epsilon(1e-12));
    const auto [lo99, hi99] = confidence_interval(0.3, 0.1, 0.99);
    CHECK(lo99 < lo);
    CHECK(hi99 > hi);
    CHECK((lo99 + hi99) / 2 == doctest::Approx(0.3));
    CHECK_THROWS_AS(confidence_interval(0.3, 0.1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(confidence_interval(0.3, 0.1, 0.0), InvalidArgument);
}

TEST_CASE("z-scores and intervals are consistent") {
    Matrix theta(3, 3);
    theta << 1.5, -0.5, 0.0, -0.5, 1.5, 0.0, 0.0, 0.0, 1.0;
    const auto c = DatasetCollection({test::sample_precision(theta, 400, 3)});
    const auto result = z_scores(c, JointPrecision{{theta}, true}, 0.9, 0.1);
    CHECK(result.entries.size() == 5);  // {0,1} twice plus the lone node 2
    for (const auto& e : result.entries) {
        CHECK(e.std_error > 0.0);
        CHECK(e.ci_low < e.ci_high);
        CHECK(e.z_score == doctest::Approx((e.estimate - 0.1) / e.std_error));
        CHECK(e.estimate == theta(e.row, e.node));
        CHECK(e.level == 0.9);
    }
    CHECK_THROWS_AS(z_scores(c, JointPrecision{{theta}, true}, 1.5), InvalidArgument);
}

TEST_CASE("exchanging i and j gives the same variance") {
    Matrix theta(4, 4);
    theta << 2.0, 0.4, -0.3, 0.0, 0.4, 2.0, 0.5, 0.0, -0.3, 0.5, 2.0, 0.0, 0.0, 0.0, 0.0, 1.0;
    const auto c = DatasetCollection({test::sample_precision(theta, 300, 12)});
    const JointPrecision est{{theta}, true};
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j) {
            if (i == j) continue;
            const auto vj = variance_estimate(c, est, 0, j);
            const auto vi = variance_estimate(c, est, 0, i);
            CHECK(entry_for(vj, i).variance == entry_for(vi, j).variance);
        }
}

TEST_CASE("variance floor is applied and counted") {
    const auto c = test::noise_collection({100}, 2, 6);
    Matrix theta = Matrix::Identity(2, 2);
    theta(1, 1) = 1e6;  // pushes mean(q^2) - theta^2 below zero
    const JointPrecision est{{theta}, true};
    const auto v = variance_estimate(c, est, 0, 1);
    CHECK(v[0].floored);
    CHECK(v[0].variance == kVarianceFloor);
    const auto result = z_scores(c, est, 0.95);
    CHECK(result.floored == 1);
    for (const auto& e : result.entries) CHECK(e.std_error > 0.0);
}

TEST_CASE("workers do not change inference") {
    Matrix theta(3, 3);
    theta << 1.5, -0.5, 0.0, -0.5, 1.5, 0.2, 0.0, 0.2, 1.0;
    const auto c = DatasetCollection({test::sample_precision(theta, 200, 3),
                                      test::sample_precision(theta, 150, 4)});
    const JointPrecision est{{theta, theta}, true};
    const auto a = z_scores(c, est, 0.95, 0.0, 1);
    const auto b = z_scores(c, est, 0.95, 0.0, 4);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t e = 0; e < a.entries.size(); ++e) {
        CHECK(a.entries[e].std_error == b.entries[e].std_error);
        CHECK(a.entries[e].dataset == b.entries[e].dataset);
        CHECK(a.entries[e].row == b.entries[e].row);
    }
}

}  // TEST_SUITE
