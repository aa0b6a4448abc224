#pragma once

namespace smoothck {

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal CDF, accurate in both tails.
double probit(double g);

/// Inverse of probit on (0, 1). Throws InferenceError outside the open interval.
double probit_inv(double f);

/// log Phi(x), finite for very negative x.
double log_probit(double x);

/// phi(x) / Phi(x) without underflow for very negative x.
double pdf_over_cdf(double x);

}  // namespace smoothck
