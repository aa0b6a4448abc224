#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "smoothck/kernel.hpp"

namespace smoothck {

struct Observation {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;

  bool operator==(const Observation&) const = default;
};

/// Distinct parameter points (rows) with binomial satisfaction counts.
struct TrainingSet {
  Points points;
  std::vector<Observation> observations;

  /// Throws InferenceError on duplicate points, size mismatch, zero trials or
  /// successes above trials.
  void validate() const;
};

struct EpOptions {
  double tolerance = 1e-6;
  int max_sweeps = 100;
};

/// Gaussian approximation to the probit-GP posterior over the latent values at
/// the training points. Each trial is one Bernoulli site; sites of point j are
/// its successes (y = +1) followed by its failures (y = -1).
struct EpState {
  KernelConfig kernel;
  Points points;
  std::vector<Observation> observations;

  /// Natural parameters of every site, in site order.
  std::vector<double> site_tau;
  std::vector<double> site_nu;
  /// Site parameters summed per latent.
  Eigen::VectorXd tau;
  Eigen::VectorXd nu;

  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  double log_marginal = 0.0;

  int sweeps = 0;
  double max_delta = 0.0;
  bool converged = false;
  /// Jitter actually added to the Gram diagonal.
  double jitter = 0.0;

  /// Prediction cache: lower Cholesky factor of I + S^1/2 K S^1/2, S^1/2 and
  /// the weight vector with mean(x*) = k*^T weights.
  Eigen::MatrixXd chol_b;
  Eigen::VectorXd sqrt_tau;
  Eigen::VectorXd weights;
};

EpState ep_fit(const TrainingSet& data, const KernelConfig& kernel, const EpOptions& options = {});

struct LatentPrediction {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
  /// Number of variances that came out negative and were clipped to zero.
  int clipped = 0;
};

LatentPrediction predict_latent(const EpState& state, const Points& xstar);

struct Prediction {
  std::vector<double> point;
  double prob_mean = 0.5;
  double ci_low = 0.0;
  double ci_high = 1.0;
  double latent_mean = 0.0;
  double latent_var = 0.0;
};

/// Satisfaction probability of a Gaussian latent N(mean, var): the exact
/// expectation of Phi plus Phi-transformed 95% latent quantiles.
Prediction probability_from_latent(double mean, double var);

std::vector<Prediction> predict_probability(const EpState& state, const Points& xstar);

}  // namespace smoothck
