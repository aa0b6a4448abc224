#include "smoothck/probit.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>

#include "smoothck/error.hpp"

namespace smoothck {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double probit(double g) { return 0.5 * std::erfc(-g * kInvSqrt2); }

double probit_inv(double f) {
  if (!(f > 0.0 && f < 1.0)) {
    throw InferenceError("probit_inv requires an argument in (0, 1)");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * f);
}

double log_probit(double x) {
  if (x > -30.0) return std::log(probit(x));
  // Asymptotic series of the Mills ratio.
  const double x2 = x * x;
  const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
  return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

double pdf_over_cdf(double x) {
  if (x > -30.0) return normal_pdf(x) / probit(x);
  const double x2 = x * x;
  const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
  return -x / series;
}

}  // namespace smoothck
