#pragma once

#include <cstdint>
#include <span>

#include "smoothck/ep.hpp"
#include "smoothck/formula.hpp"
#include "smoothck/model.hpp"
#include "smoothck/ssa.hpp"

namespace smoothck {

struct SmcOptions {
  /// Simulation horizon; values below horizon(f) are raised to it.
  double horizon = 0.0;
  /// Ensemble size of the pilot that estimates mean(X) signals.
  std::size_t pilot_runs = 100;
  /// Number of uniformly spaced mean-signal grid nodes on [0, horizon].
  std::size_t pilot_grid = 201;
  unsigned threads = 1;
  SimulationOptions simulation;
};

/// Frequentist estimate with a 95% Clopper-Pearson interval.
struct BernoulliEstimate {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
};

BernoulliEstimate clopper_pearson(std::uint64_t successes, std::uint64_t trials);

/// Mean signal needed by `f` (bound to `model`) at `params`, from a pilot ensemble
/// drawn with a seed derived from `seed`. Empty when f uses no mean().
MeanSignal pilot_mean(const Model& model, std::span<const double> params, const Formula& f,
                      std::uint64_t seed, const SmcOptions& options = {});

/// Monitors `m` independent trajectories (trajectory r uses Philox(seed, r)).
/// `f` must already be bound to `model`.
Observation sample_observations(const Model& model, std::span<const double> params,
                                const Formula& f, std::uint64_t m, std::uint64_t seed,
                                const SmcOptions& options = {});

BernoulliEstimate estimate_at(const Model& model, std::span<const double> params, const Formula& f,
                              std::uint64_t n, std::uint64_t seed, const SmcOptions& options = {});

}  // namespace smoothck
