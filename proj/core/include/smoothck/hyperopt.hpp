#pragma once

#include <utility>
#include <vector>

#include "smoothck/ep.hpp"
#include "smoothck/kernel.hpp"

namespace smoothck {

/// Natural-log search ranges: entry 0 for the amplitude, entry 1 + d for lengthscale d.
struct HyperBounds {
  std::vector<std::pair<double, double>> log_range;

  /// log sigma2 in [log 1e-2, log 1e2], log lambda_d in [log 1e-2, log 1e1].
  static HyperBounds defaults(std::size_t dimension);
};

struct HyperoptOptions {
  int passes = 3;
  /// Golden-section search stops once the bracket is narrower than this (log units).
  double log_tolerance = 0.05;
  EpOptions ep;
};

struct HyperoptResult {
  KernelConfig config;
  EpState state;
  /// Number of EP fits attempted.
  int evaluations = 0;
};

/// Coordinate-wise golden-section maximization of the EP log marginal
/// likelihood over log-hyperparameters. Never returns a config worse than
/// `init`; fully deterministic. Jitter scales with the amplitude.
HyperoptResult optimize_hyperparams(const TrainingSet& data, const KernelConfig& init,
                                    const HyperBounds& bounds,
                                    const HyperoptOptions& options = {});

}  // namespace smoothck
