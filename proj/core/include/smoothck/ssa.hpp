#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "smoothck/model.hpp"
#include "smoothck/rng.hpp"

namespace smoothck {

/// Piecewise-constant, right-continuous sample path on [0, horizon].
///
/// `states` stores jump_count()+1 rows of `species_count` counts; row 0 is
/// the initial state and row i+1 the state entered at `times[i]`.
struct Trajectory {
  std::vector<double> times;
  std::vector<std::int64_t> states;
  std::size_t species_count = 0;
  double horizon = 0.0;
  /// Parameter vector the path was sampled at (formula atoms may reference it).
  std::vector<double> params;

  std::size_t jump_count() const { return times.size(); }

  std::span<const std::int64_t> state(std::size_t row) const {
    return {states.data() + row * species_count, species_count};
  }

  /// Number of jump times <= t, i.e. the row in force at t.
  std::size_t row_at(double t) const;

  std::span<const std::int64_t> state_at(double t) const { return state(row_at(t)); }

  bool operator==(const Trajectory&) const = default;
};

/// Ensemble mean of selected species on a time grid, linearly interpolated between nodes.
struct MeanSignal {
  std::vector<double> grid;
  /// Model species index of each tracked series.
  std::vector<int> species;
  /// means[k][g] is the mean of species[k] at grid[g].
  std::vector<std::vector<double>> means;

  /// Fills `out` (one slot per model species) with interpolated means at t;
  /// untracked species are left untouched.
  void values_at(double t, std::span<double> out) const;

  bool tracks(int species_index) const;
};

struct SimulationOptions {
  /// Runaway guard: a trajectory with more jumps than this fails.
  std::uint64_t max_jumps = 10'000'000;
};

/// Gillespie direct-method sample path up to `horizon`, using stream 0 of `seed`.
Trajectory simulate(const Model& model, std::span<const double> params, double horizon,
                    std::uint64_t seed, const SimulationOptions& options = {});

/// Same, drawing randomness from an explicit generator.
Trajectory simulate(const Model& model, std::span<const double> params, double horizon,
                    Philox& rng, const SimulationOptions& options = {});

/// `n` independent paths; path i uses Philox(seed, i), so the result does not
/// depend on `threads` (0 = all cores).
std::vector<Trajectory> simulate_ensemble(const Model& model, std::span<const double> params,
                                          double horizon, std::size_t n, std::uint64_t seed,
                                          const SimulationOptions& options = {},
                                          unsigned threads = 1);

/// Pointwise sample mean of `species` over the ensemble at each grid time.
MeanSignal mean_trajectory(std::span<const Trajectory> ensemble, std::span<const double> grid,
                           const Model& model, std::string_view species);

/// Mean signal tracking several species at once.
MeanSignal mean_trajectory(std::span<const Trajectory> ensemble, std::span<const double> grid,
                           std::span<const int> species);

/// Debug dump: header "t,<species...>", initial row at t=0, one row per jump.
void write_trajectory_csv(std::ostream& out, const Trajectory& tr, const Model& model);

}  // namespace smoothck
