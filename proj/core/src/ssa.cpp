#include "smoothck/ssa.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "smoothck/error.hpp"
#include "smoothck/parallel.hpp"

namespace smoothck {

std::size_t Trajectory::row_at(double t) const {
  return static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin());
}

bool MeanSignal::tracks(int species_index) const {
  return std::find(species.begin(), species.end(), species_index) != species.end();
}

void MeanSignal::values_at(double t, std::span<double> out) const {
  if (grid.empty()) return;
  std::size_t hi = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), t) - grid.begin());
  for (std::size_t k = 0; k < species.size(); ++k) {
    const auto& series = means[k];
    double v;
    if (hi == 0) {
      v = series.front();
    } else if (hi >= grid.size()) {
      v = series.back();
    } else {
      const double t0 = grid[hi - 1];
      const double t1 = grid[hi];
      const double w = (t - t0) / (t1 - t0);
      v = series[hi - 1] + w * (series[hi] - series[hi - 1]);
    }
    out[static_cast<std::size_t>(species[k])] = v;
  }
}

Trajectory simulate(const Model& model, std::span<const double> params, double horizon,
                    Philox& rng, const SimulationOptions& options) {
  if (!(horizon > 0.0)) throw SimulationError("simulation horizon must be positive");
  if (params.size() != model.parameters.size()) {
    throw SimulationError("expected " + std::to_string(model.parameters.size()) +
                          " parameter values, got " + std::to_string(params.size()));
  }
  const std::size_t n = model.species.size();
  const std::size_t nr = model.reactions.size();

  std::vector<std::vector<std::int64_t>> change;
  change.reserve(nr);
  for (const auto& r : model.reactions) change.push_back(r.net_change());

  Trajectory tr;
  tr.species_count = n;
  tr.horizon = horizon;
  tr.params.assign(params.begin(), params.end());
  tr.states = model.initial_state;

  std::vector<std::int64_t> x = model.initial_state;
  std::vector<double> rates(nr);
  double t = 0.0;
  for (;;) {
    double total = 0.0;
    for (std::size_t r = 0; r < nr; ++r) {
      try {
        rates[r] = eval_rate(model.reactions[r].rate, x, params);
      } catch (const EvalError& e) {
        throw SimulationError("reaction " + std::to_string(r + 1) + " at t=" + format_number(t) +
                              ": " + e.what());
      }
      total += rates[r];
    }
    if (total <= 0.0) break;  // absorbing state

    t += -std::log(rng.uniform_positive()) / total;
    if (t > horizon) break;

    const double pick = rng.uniform() * total;
    // First channel whose cumulative rate exceeds `pick`; rounding falls back
    // to the last channel with a positive rate.
    std::size_t chosen = 0;
    double acc = 0.0;
    for (std::size_t r = 0; r < nr; ++r) {
      if (rates[r] <= 0.0) continue;
      acc += rates[r];
      chosen = r;
      if (pick < acc) break;
    }

    for (std::size_t s = 0; s < n; ++s) {
      x[s] += change[chosen][s];
      if (x[s] < 0) {
        throw SimulationError("reaction " + std::to_string(chosen + 1) + " drove species '" +
                              model.species[s] + "' negative at t=" + format_number(t));
      }
    }
    if (tr.times.size() >= options.max_jumps) {
      throw SimulationError("trajectory exceeded " + std::to_string(options.max_jumps) +
                            " jumps before t=" + format_number(horizon));
    }
    tr.times.push_back(t);
    tr.states.insert(tr.states.end(), x.begin(), x.end());
  }
  return tr;
}

Trajectory simulate(const Model& model, std::span<const double> params, double horizon,
                    std::uint64_t seed, const SimulationOptions& options) {
  Philox rng(seed, 0);
  return simulate(model, params, horizon, rng, options);
}

std::vector<Trajectory> simulate_ensemble(const Model& model, std::span<const double> params,
                                          double horizon, std::size_t n, std::uint64_t seed,
                                          const SimulationOptions& options, unsigned threads) {
  if (n == 0) throw SimulationError("ensemble size must be at least 1");
  std::vector<Trajectory> out(n);
  parallel_for(n, threads, [&](std::size_t i) {
    Philox rng(seed, i);
    out[i] = simulate(model, params, horizon, rng, options);
  });
  return out;
}

MeanSignal mean_trajectory(std::span<const Trajectory> ensemble, std::span<const double> grid,
                           std::span<const int> species) {
  if (ensemble.empty()) throw SimulationError("mean of an empty ensemble");
  MeanSignal ms;
  ms.grid.assign(grid.begin(), grid.end());
  ms.species.assign(species.begin(), species.end());
  ms.means.assign(species.size(), std::vector<double>(grid.size(), 0.0));
  for (const auto& tr : ensemble) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const auto row = tr.state_at(grid[g]);
      for (std::size_t k = 0; k < species.size(); ++k) {
        ms.means[k][g] += static_cast<double>(row[static_cast<std::size_t>(species[k])]);
      }
    }
  }
  const double inv = 1.0 / static_cast<double>(ensemble.size());
  for (auto& series : ms.means) {
    for (auto& v : series) v *= inv;
  }
  return ms;
}

MeanSignal mean_trajectory(std::span<const Trajectory> ensemble, std::span<const double> grid,
                           const Model& model, std::string_view species) {
  const auto idx = model.species_index(species);
  if (!idx) throw SimulationError("unknown species '" + std::string(species) + "'");
  const int s = static_cast<int>(*idx);
  return mean_trajectory(ensemble, grid, std::span<const int>(&s, 1));
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr, const Model& model) {
  out << "t";
  for (const auto& s : model.species) out << ',' << s;
  out << '\n';
  char buf[64];
  for (std::size_t row = 0; row <= tr.jump_count(); ++row) {
    std::snprintf(buf, sizeof buf, "%.17g", row == 0 ? 0.0 : tr.times[row - 1]);
    out << buf;
    for (auto c : tr.state(row)) out << ',' << c;
    out << '\n';
  }
}

}  // namespace smoothck
