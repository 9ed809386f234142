#pragma once

#include "might/model.hpp"

namespace might {

// Hard-thresholding operators on a coefficient stack. Entries are kept on
// ">=" in both tests, surviving entries keep their exact input value.

/// Zeroes every entry with |beta_i^(k)| < lambda.
CoefficientStack element_threshold(CoefficientStack beta, double lambda);

/// Zeroes edge group i unless sum_k (beta_i^(k))^2 >= s0 * lambda^2.
CoefficientStack group_threshold(CoefficientStack beta, double lambda, double s0);

/// group_threshold(element_threshold(beta, lambda), lambda, s0).
CoefficientStack two_step_threshold(CoefficientStack beta, double lambda, double s0);

/// In-place form of two_step_threshold on a (p-1) x K value matrix.
void two_step_threshold_inplace(Matrix& values, double lambda, double s0);

}  // namespace might
