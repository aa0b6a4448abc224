#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "smoothck/design.hpp"
#include "smoothck/ep.hpp"
#include "smoothck/formula.hpp"
#include "smoothck/hyperopt.hpp"
#include "smoothck/model.hpp"
#include "smoothck/smc.hpp"

namespace smoothck {

struct DesignSpec {
  enum class Kind { Grid, Lhs };
  Kind kind = Kind::Grid;
  /// Per-dimension counts for Kind::Grid.
  std::vector<std::size_t> counts;
  /// Point count for Kind::Lhs.
  std::size_t lhs_points = 0;
};

/// Coordinates the kernel sees: the unit box (default) or raw parameter values.
enum class InputUnits { Rescaled, Raw };

struct ExperimentConfig {
  DesignSpec design;
  std::uint64_t runs_per_point = 10;
  std::vector<std::size_t> predict_counts;
  /// Fixed kernel, or the starting point of the search when `optimize` is set.
  KernelConfig kernel = KernelConfig::make(1.0, {});
  bool optimize = false;
  InputUnits units = InputUnits::Rescaled;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// smc.horizon is the simulation horizon; 0 means horizon(f). A formula
  /// whose horizon exceeds a nonzero smc.horizon is rejected.
  SmcOptions smc;
  EpOptions ep;
  HyperoptOptions hyperopt;
  /// Called with (points simulated, total points) during the simulation phase.
  std::function<void(std::size_t, std::size_t)> progress;
};

struct Timings {
  double simulation = 0.0;
  double hyperopt = 0.0;
  double prediction = 0.0;
};

struct ExperimentResult {
  std::vector<std::string> names;
  /// Training and prediction points in raw parameter units.
  Points training_points;
  Points prediction_points;
  /// Training data as fed to EP (kernel units).
  TrainingSet training;
  EpState state;
  /// Predictions with `point` in raw parameter units.
  std::vector<Prediction> predictions;
  Timings timings;
  int hyperopt_evaluations = 0;
  int clipped_variances = 0;
  /// key=value settings recorded in the metadata sidecar, in insertion order.
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Simulates and monitors `runs_per_point` trajectories at every design point
/// (point j uses seed derive_seed(seed, 1, j)), fits EP, optionally optimizes
/// the kernel, and predicts on the regular prediction grid. `f` is bound to
/// `model` internally. Deterministic for a given seed, independent of threads.
ExperimentResult run_smoothed_mc(const Model& model, const Formula& f,
                                 const ParameterDomain& domain, const ExperimentConfig& config);

}  // namespace smoothck
