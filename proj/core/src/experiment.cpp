#include "smoothck/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>

#include "smoothck/error.hpp"
#include "smoothck/parallel.hpp"

namespace smoothck {

namespace {

constexpr std::uint64_t kPointTag = 1;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string join_numbers(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_number(values[i]);
  }
  return out;
}

}  // namespace

ExperimentResult run_smoothed_mc(const Model& model, const Formula& formula,
                                 const ParameterDomain& domain, const ExperimentConfig& config) {
  domain.validate(model);
  const Formula f = bind_formula(formula, model);
  const double h = horizon(f);
  if (config.smc.horizon > 0.0 && h > config.smc.horizon) {
    throw InferenceError("property horizon " + format_number(h) +
                         " exceeds the simulation horizon " + format_number(config.smc.horizon));
  }
  if (config.runs_per_point == 0) throw InferenceError("runs per point must be at least 1");
  const std::size_t d = domain.dimension();
  if (config.kernel.dimension() != d) {
    throw InferenceError("kernel has " + std::to_string(config.kernel.dimension()) +
                         " lengthscales for " + std::to_string(d) + " varied parameters");
  }
  config.kernel.validate();

  ExperimentResult result;
  for (const auto& v : domain.varied) result.names.push_back(v.name);

  if (config.design.kind == DesignSpec::Kind::Grid) {
    result.training_points = regular_grid(domain, config.design.counts);
  } else {
    result.training_points =
        latin_hypercube(domain, config.design.lhs_points, derive_seed(config.seed, 2));
  }
  result.prediction_points = regular_grid(domain, config.predict_counts);

  const bool rescaled = config.units == InputUnits::Rescaled;
  auto to_kernel_units = [&](const Points& raw) {
    return rescaled ? rescale_to_unit(domain, raw) : raw;
  };

  // Simulation phase: one task per design point.
  const std::vector<double> base = domain.base_parameters(model);
  const std::vector<std::size_t> indices = domain.varied_indices(model);
  const auto n = static_cast<std::size_t>(result.training_points.rows());
  std::vector<Observation> obs(n);
  SmcOptions smc = config.smc;
  smc.threads = 1;
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto start = std::chrono::steady_clock::now();
  parallel_for(n, config.threads, [&](std::size_t j) {
    std::vector<double> params = base;
    for (std::size_t k = 0; k < d; ++k) {
      params[indices[k]] = result.training_points(static_cast<Eigen::Index>(j),
                                                  static_cast<Eigen::Index>(k));
    }
    obs[j] = sample_observations(model, params, f, config.runs_per_point,
                                 derive_seed(config.seed, kPointTag, j), smc);
    const std::size_t now = done.fetch_add(1) + 1;
    if (config.progress) {
      std::lock_guard lock(progress_mutex);
      config.progress(now, n);
    }
  });
  result.timings.simulation = seconds_since(start);

  result.training.points = to_kernel_units(result.training_points);
  result.training.observations = std::move(obs);

  start = std::chrono::steady_clock::now();
  if (config.optimize) {
    HyperBounds bounds = HyperBounds::defaults(d);
    if (!rescaled) {
      // Lengthscale bounds are stated for the unit box; stretch them to raw units.
      for (std::size_t k = 0; k < d; ++k) {
        const double shift = std::log(domain.varied[k].high - domain.varied[k].low);
        bounds.log_range[k + 1].first += shift;
        bounds.log_range[k + 1].second += shift;
      }
    }
    HyperoptOptions options = config.hyperopt;
    options.ep = config.ep;
    KernelConfig init = config.kernel;
    for (std::size_t i = 0; i < bounds.log_range.size(); ++i) {
      double& value = i == 0 ? init.amplitude : init.lengthscales[i - 1];
      const auto [lo, hi] = bounds.log_range[i];
      value = std::exp(std::clamp(std::log(value), lo, hi));
    }
    init.jitter = config.kernel.jitter / config.kernel.amplitude * init.amplitude;
    HyperoptResult opt = optimize_hyperparams(result.training, init, bounds, options);
    result.state = std::move(opt.state);
    result.hyperopt_evaluations = opt.evaluations;
  } else {
    result.state = ep_fit(result.training, config.kernel, config.ep);
  }
  result.timings.hyperopt = seconds_since(start);

  start = std::chrono::steady_clock::now();
  const Points xstar = to_kernel_units(result.prediction_points);
  const LatentPrediction latent = predict_latent(result.state, xstar);
  result.clipped_variances = latent.clipped;
  const auto m = static_cast<std::size_t>(xstar.rows());
  result.predictions.resize(m);
  parallel_for(m, config.threads, [&](std::size_t i) {
    const auto row = static_cast<Eigen::Index>(i);
    Prediction p = probability_from_latent(latent.mean(row), latent.variance(row));
    p.point.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
      p.point[k] = result.prediction_points(row, static_cast<Eigen::Index>(k));
    }
    result.predictions[i] = std::move(p);
  });
  result.timings.prediction = seconds_since(start);

  auto& meta = result.metadata;
  meta.emplace_back("seed", std::to_string(config.seed));
  meta.emplace_back("property", to_string(formula));
  meta.emplace_back("property_horizon", format_number(h));
  meta.emplace_back("simulation_horizon", format_number(std::max(h, config.smc.horizon)));
  meta.emplace_back("runs_per_point", std::to_string(config.runs_per_point));
  meta.emplace_back("training_points", std::to_string(n));
  meta.emplace_back("prediction_points", std::to_string(m));
  meta.emplace_back("design", config.design.kind == DesignSpec::Kind::Grid ? "grid" : "lhs");
  meta.emplace_back("kernel_mode", config.optimize ? "optimize" : "fixed");
  meta.emplace_back("kernel_units", rescaled ? "rescaled" : "raw");
  meta.emplace_back("kernel_amplitude", format_number(result.state.kernel.amplitude));
  meta.emplace_back("kernel_lengthscales", join_numbers(result.state.kernel.lengthscales));
  meta.emplace_back("kernel_jitter", format_number(result.state.jitter));
  for (const auto& v : domain.varied) {
    meta.emplace_back("range." + v.name, format_number(v.low) + ":" + format_number(v.high));
  }
  for (const auto& [name, value] : domain.fixed) meta.emplace_back("fixed." + name, format_number(value));
  if (!mean_species(f).empty()) meta.emplace_back("pilot_runs", std::to_string(config.smc.pilot_runs));
  meta.emplace_back("ep_sweeps", std::to_string(result.state.sweeps));
  meta.emplace_back("ep_converged", result.state.converged ? "true" : "false");
  meta.emplace_back("ep_max_delta", format_number(result.state.max_delta));
  meta.emplace_back("log_marginal", format_number(result.state.log_marginal));
  if (config.optimize) meta.emplace_back("hyperopt_evaluations", std::to_string(result.hyperopt_evaluations));
  meta.emplace_back("clipped_variances", std::to_string(result.clipped_variances));
  meta.emplace_back("time_simulation_s", format_number(result.timings.simulation));
  meta.emplace_back("time_hyperopt_s", format_number(result.timings.hyperopt));
  meta.emplace_back("time_prediction_s", format_number(result.timings.prediction));
  return result;
}

}  // namespace smoothck
