#pragma once

namespace spinal {

// Standard normal CDF via erfc, accurate in both tails.
double normal_cdf(double x);

// 1 - normal_cdf(x) without cancellation for large x.
double normal_upper_tail(double x);

// Inverse of normal_cdf on (0, 1). A rational initial guess is refined by
// Newton steps kept inside a shrinking bracket; the result is within 1e-12
// of the true quantile. Throws std::domain_error outside (0, 1).
double normal_quantile(double u);

}  // namespace spinal
