#pragma once

#include <Eigen/Core>

#include "smoothck/ep.hpp"
#include "smoothck/kernel.hpp"

namespace smoothck::testing {

/// Posterior latent means of the exact probit-binomial GP posterior by dense
/// tensor-grid integration over +-8 prior standard deviations. At most 3 points.
Eigen::VectorXd quadrature_posterior_means(const TrainingSet& data, const KernelConfig& kernel,
                                           int nodes = 401);

/// Log normalizing constant of the same posterior (log marginal likelihood).
double quadrature_log_evidence(const TrainingSet& data, const KernelConfig& kernel, int nodes = 401);

}  // namespace smoothck::testing
