#include "might/thresholding.hpp"

#include <cmath>

#include "might/errors.hpp"

namespace might {

namespace {

void check_lambda(double lambda) {
    if (!(lambda >= 0.0)) throw InvalidArgument("threshold must be non-negative");
}

void element_inplace(Matrix& values, double lambda) {
    for (Index k = 0; k < values.cols(); ++k)
        for (Index i = 0; i < values.rows(); ++i)
            if (!(std::abs(values(i, k)) >= lambda)) values(i, k) = 0.0;
}

void group_inplace(Matrix& values, double lambda, double s0) {
    const double bar = s0 * lambda * lambda;
    for (Index i = 0; i < values.rows(); ++i) {
        double energy = 0.0;
        for (Index k = 0; k < values.cols(); ++k) energy += values(i, k) * values(i, k);
        if (!(energy >= bar)) values.row(i).setZero();
    }
}

}  // namespace

CoefficientStack element_threshold(CoefficientStack beta, double lambda) {
    check_lambda(lambda);
    element_inplace(beta.values, lambda);
    return beta;
}

CoefficientStack group_threshold(CoefficientStack beta, double lambda, double s0) {
    check_lambda(lambda);
    group_inplace(beta.values, lambda, s0);
    return beta;
}

CoefficientStack two_step_threshold(CoefficientStack beta, double lambda, double s0) {
    check_lambda(lambda);
    two_step_threshold_inplace(beta.values, lambda, s0);
    return beta;
}

void two_step_threshold_inplace(Matrix& values, double lambda, double s0) {
    element_inplace(values, lambda);
    group_inplace(values, lambda, s0);
}

}  // namespace might
