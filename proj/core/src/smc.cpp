#include "smoothck/smc.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/beta.hpp>
#include <vector>

#include "smoothck/error.hpp"
#include "smoothck/monitor.hpp"
#include "smoothck/parallel.hpp"

namespace smoothck {

namespace {
constexpr std::uint64_t kPilotTag = 0x70696c6f74ULL;

double effective_horizon(const Formula& f, const SmcOptions& options) {
  return std::max(horizon(f), options.horizon);
}

// A zero-horizon formula only sees the (deterministic) initial state.
Trajectory initial_only(const Model& model, std::span<const double> params) {
  Trajectory tr;
  tr.species_count = model.species.size();
  tr.states = model.initial_state;
  tr.params.assign(params.begin(), params.end());
  return tr;
}

Trajectory draw(const Model& model, std::span<const double> params, double h, Philox& rng,
                const SmcOptions& options) {
  return h > 0.0 ? simulate(model, params, h, rng, options.simulation) : initial_only(model, params);
}
}  // namespace

BernoulliEstimate clopper_pearson(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw InferenceError("Clopper-Pearson interval needs at least one trial");
  if (successes > trials) throw InferenceError("more successes than trials");
  BernoulliEstimate e;
  e.successes = successes;
  e.trials = trials;
  e.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
  const double k = static_cast<double>(successes);
  const double n = static_cast<double>(trials);
  constexpr double kTail = 0.025;
  e.ci_low = successes == 0 ? 0.0 : boost::math::quantile(boost::math::beta_distribution<>(k, n - k + 1), kTail);
  e.ci_high = successes == trials
                  ? 1.0
                  : boost::math::quantile(boost::math::beta_distribution<>(k + 1, n - k), 1.0 - kTail);
  e.ci_low = std::clamp(std::min(e.ci_low, e.p_hat), 0.0, 1.0);
  e.ci_high = std::clamp(std::max(e.ci_high, e.p_hat), 0.0, 1.0);
  return e;
}

MeanSignal pilot_mean(const Model& model, std::span<const double> params, const Formula& f,
                      std::uint64_t seed, const SmcOptions& options) {
  const std::vector<int> species = mean_species(f);
  if (species.empty()) return {};
  if (options.pilot_runs == 0) throw SimulationError("mean-signal pilot needs at least one run");
  const double h = effective_horizon(f, options);
  if (h == 0.0) {
    const Trajectory tr = initial_only(model, params);
    const double origin = 0.0;
    return mean_trajectory(std::span<const Trajectory>(&tr, 1), std::span<const double>(&origin, 1),
                           species);
  }
  const std::size_t nodes = std::max<std::size_t>(options.pilot_grid, 2);
  std::vector<double> grid(nodes);
  for (std::size_t g = 0; g < nodes; ++g) {
    grid[g] = h * static_cast<double>(g) / static_cast<double>(nodes - 1);
  }
  const auto ensemble = simulate_ensemble(model, params, h, options.pilot_runs,
                                          derive_seed(seed, kPilotTag), options.simulation,
                                          options.threads);
  return mean_trajectory(ensemble, grid, species);
}

Observation sample_observations(const Model& model, std::span<const double> params,
                                const Formula& f, std::uint64_t m, std::uint64_t seed,
                                const SmcOptions& options) {
  if (m == 0) throw InferenceError("at least one observation per point is required");
  const double h = effective_horizon(f, options);
  const MeanSignal mean = pilot_mean(model, params, f, seed, options);
  const MeanSignal* mean_ptr = mean.species.empty() ? nullptr : &mean;

  std::atomic<std::uint64_t> successes{0};
  parallel_for(m, options.threads, [&](std::size_t r) {
    Philox rng(seed, r);
    const Trajectory tr = draw(model, params, h, rng, options);
    if (monitor(f, tr, mean_ptr)) successes.fetch_add(1, std::memory_order_relaxed);
  });
  return {successes.load(), m};
}

BernoulliEstimate estimate_at(const Model& model, std::span<const double> params, const Formula& f,
                              std::uint64_t n, std::uint64_t seed, const SmcOptions& options) {
  const Observation o = sample_observations(model, params, f, n, seed, options);
  return clopper_pearson(o.successes, o.trials);
}

}  // namespace smoothck
