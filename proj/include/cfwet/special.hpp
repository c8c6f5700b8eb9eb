#pragma once

namespace cfwet {

// Regularized lower incomplete gamma P(k, x) = gamma(k, x) / Gamma(k).
// Series expansion for x < k + 1, Lentz continued fraction otherwise;
// converges to ~1e-12 relative accuracy.
double gammainc_lower_reg(double k, double x);

// Regularized upper incomplete gamma Q(k, x) = 1 - P(k, x), evaluated
// tail-directly so small values retain relative accuracy.
double gammainc_upper_reg(double k, double x);

// log Gamma(k) for k > 0 (thin wrapper so callers share one definition).
double log_gamma(double k);

}  // namespace cfwet
