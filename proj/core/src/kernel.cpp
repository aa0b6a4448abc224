#include "smoothck/kernel.hpp"

#include <cmath>
#include <string>

#include "smoothck/error.hpp"

namespace smoothck {

KernelConfig KernelConfig::make(double amplitude, std::vector<double> lengthscales) {
  return {amplitude, std::move(lengthscales), 1e-8 * amplitude};
}

void KernelConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(amplitude)) throw InferenceError("kernel amplitude must be positive and finite");
  if (!positive(jitter)) throw InferenceError("kernel jitter must be positive and finite");
  if (lengthscales.empty()) throw InferenceError("kernel needs at least one lengthscale");
  for (double l : lengthscales) {
    if (!positive(l)) throw InferenceError("kernel lengthscales must be positive and finite");
  }
}

namespace {

void check_dimension(const KernelConfig& cfg, Eigen::Index d) {
  if (static_cast<std::size_t>(d) != cfg.dimension()) {
    throw InferenceError("point dimension " + std::to_string(d) + " does not match " +
                         std::to_string(cfg.dimension()) + " kernel lengthscales");
  }
}

double scaled_sq_dist(const KernelConfig& cfg, const double* x, Eigen::Index sx, const double* y,
                      Eigen::Index sy) {
  double acc = 0.0;
  for (std::size_t d = 0; d < cfg.lengthscales.size(); ++d) {
    const double diff = (x[d * sx] - y[d * sy]) / cfg.lengthscales[d];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace

double kernel_eval(const KernelConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y) {
  check_dimension(cfg, x.size());
  check_dimension(cfg, y.size());
  return cfg.amplitude * std::exp(-scaled_sq_dist(cfg, x.data(), 1, y.data(), 1));
}

Eigen::MatrixXd cross_gram(const KernelConfig& cfg, const Points& x, const Points& xstar) {
  check_dimension(cfg, x.cols());
  check_dimension(cfg, xstar.cols());
  Eigen::MatrixXd out(xstar.rows(), x.rows());
  for (Eigen::Index i = 0; i < xstar.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.rows(); ++j) {
      out(i, j) = cfg.amplitude * std::exp(-scaled_sq_dist(cfg, &xstar(i, 0), xstar.outerStride(),
                                                           &x(j, 0), x.outerStride()));
    }
  }
  return out;
}

GramMatrix gram(const KernelConfig& cfg, const Points& x) {
  cfg.validate();
  if (x.rows() == 0) throw InferenceError("Gram matrix of an empty point list");
  check_dimension(cfg, x.cols());

  const Eigen::Index n = x.rows();
  Eigen::MatrixXd base(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    base(i, i) = cfg.amplitude;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = cfg.amplitude * std::exp(-scaled_sq_dist(cfg, &x(i, 0), x.outerStride(),
                                                                &x(j, 0), x.outerStride()));
      base(i, j) = v;
      base(j, i) = v;
    }
  }

  GramMatrix g;
  const double ceiling = 1e-2 * cfg.amplitude;
  for (double jitter = cfg.jitter;; jitter *= 10.0) {
    jitter = std::min(jitter, ceiling);
    g.k_ = base;
    g.k_.diagonal().array() += jitter;
    g.llt_.compute(g.k_);
    g.jitter_ = jitter;
    if (g.llt_.info() == Eigen::Success) return g;
    if (jitter >= ceiling) break;
  }
  throw InferenceError("Gram matrix is not positive definite even with jitter " +
                       std::to_string(ceiling) + " (duplicate points?)");
}

}  // namespace smoothck
