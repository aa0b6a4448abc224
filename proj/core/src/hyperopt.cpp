#include "smoothck/hyperopt.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "smoothck/error.hpp"

namespace smoothck {

HyperBounds HyperBounds::defaults(std::size_t dimension) {
  HyperBounds b;
  b.log_range.emplace_back(std::log(1e-2), std::log(1e2));
  for (std::size_t d = 0; d < dimension; ++d) b.log_range.emplace_back(std::log(1e-2), std::log(1e1));
  return b;
}

namespace {

KernelConfig config_from(const std::vector<double>& theta, double jitter_ratio) {
  std::vector<double> lengths(theta.size() - 1);
  for (std::size_t d = 0; d + 1 < theta.size(); ++d) lengths[d] = std::exp(theta[d + 1]);
  KernelConfig cfg{std::exp(theta[0]), std::move(lengths), 0.0};
  cfg.jitter = jitter_ratio * cfg.amplitude;
  return cfg;
}

}  // namespace

HyperoptResult optimize_hyperparams(const TrainingSet& data, const KernelConfig& init,
                                    const HyperBounds& bounds, const HyperoptOptions& options) {
  init.validate();
  const std::size_t dims = init.dimension() + 1;
  if (bounds.log_range.size() != dims) {
    throw InferenceError("hyperparameter bounds have " + std::to_string(bounds.log_range.size()) +
                         " entries, expected " + std::to_string(dims));
  }
  std::vector<double> theta(dims);
  theta[0] = std::log(init.amplitude);
  for (std::size_t d = 1; d < dims; ++d) theta[d] = std::log(init.lengthscales[d - 1]);
  constexpr double kSlack = 1e-9;
  for (std::size_t d = 0; d < dims; ++d) {
    const auto [lo, hi] = bounds.log_range[d];
    if (lo > hi || theta[d] < lo - kSlack || theta[d] > hi + kSlack) {
      throw InferenceError("initial kernel config lies outside the hyperparameter bounds");
    }
  }
  const double jitter_ratio = init.jitter / init.amplitude;

  HyperoptResult result;
  std::optional<EpState> best;
  std::vector<double> best_theta = theta;
  double best_value = -std::numeric_limits<double>::infinity();

  // Fits at theta; failed fits score -inf. Tracks the incumbent.
  auto score = [&](const std::vector<double>& at) {
    ++result.evaluations;
    try {
      EpState st = ep_fit(data, config_from(at, jitter_ratio), options.ep);
      const double value = st.log_marginal;
      if (value > best_value) {
        best_value = value;
        best_theta = at;
        best = std::move(st);
      }
      return value;
    } catch (const InferenceError&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  // The initial config is evaluated exactly as given.
  ++result.evaluations;
  try {
    best = ep_fit(data, init, options.ep);
    best_value = best->log_marginal;
  } catch (const InferenceError&) {
  }

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int pass = 0; pass < options.passes; ++pass) {
    for (std::size_t d = 0; d < dims; ++d) {
      auto [lo, hi] = bounds.log_range[d];
      if (hi - lo <= options.log_tolerance) continue;
      std::vector<double> probe = best_theta;
      auto at = [&](double x) {
        probe[d] = x;
        return score(probe);
      };
      double x1 = hi - inv_phi * (hi - lo);
      double x2 = lo + inv_phi * (hi - lo);
      double f1 = at(x1);
      double f2 = at(x2);
      while (hi - lo > options.log_tolerance) {
        if (f1 >= f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - inv_phi * (hi - lo);
          f1 = at(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + inv_phi * (hi - lo);
          f2 = at(x2);
        }
      }
    }
  }

  if (!best) throw InferenceError("EP failed for every evaluated kernel configuration");
  result.config = best->kernel;
  result.state = std::move(*best);
  return result;
}

}  // namespace smoothck
