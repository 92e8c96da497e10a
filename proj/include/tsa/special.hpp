#pragma once

namespace tsa {

/// Standard normal CDF, evaluated through erfc.
double normal_cdf(double z);

/// Standard normal quantile (inverse CDF) via the AS 241 rational
/// approximation; absolute error well below 1e-9 over (0, 1). Returns
/// +/-infinity at the endpoints.
double normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x), by power series for
/// x < a + 1 and the continued-fraction complement otherwise.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// P(X > x) for X ~ chi-squared with df degrees of freedom.
double chi_squared_upper_tail(double df, double x);

}  // namespace tsa
