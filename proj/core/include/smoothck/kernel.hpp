#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <vector>

namespace smoothck {

/// Squared-exponential covariance sigma2 * exp(-sum_d (x_d - y_d)^2 / lambda_d^2).
struct KernelConfig {
  double amplitude = 1.0;
  std::vector<double> lengthscales;
  double jitter = 1e-8;

  /// Config with the default jitter of 1e-8 * amplitude.
  static KernelConfig make(double amplitude, std::vector<double> lengthscales);

  std::size_t dimension() const { return lengthscales.size(); }

  /// Throws InferenceError unless every field is strictly positive and finite.
  void validate() const;

  bool operator==(const KernelConfig&) const = default;
};

/// Point lists are matrices with one point per row.
using Points = Eigen::MatrixXd;

double kernel_eval(const KernelConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y);

/// Jittered Gram matrix with its Cholesky factor.
class GramMatrix {
 public:
  const Eigen::MatrixXd& matrix() const { return k_; }
  const Eigen::LLT<Eigen::MatrixXd>& factor() const { return llt_; }
  /// Diagonal jitter actually added (may exceed the configured one after escalation).
  double jitter() const { return jitter_; }

 private:
  friend GramMatrix gram(const KernelConfig&, const Points&);
  Eigen::MatrixXd k_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double jitter_ = 0.0;
};

/// K[i][j] = k(x_i, x_j) + jitter * [i == j]. If the factorization fails the
/// jitter is raised tenfold up to 1e-2 * amplitude, then InferenceError is thrown.
GramMatrix gram(const KernelConfig& cfg, const Points& x);

/// Un-jittered K[i][j] = k(xstar_i, x_j).
Eigen::MatrixXd cross_gram(const KernelConfig& cfg, const Points& x, const Points& xstar);

}  // namespace smoothck
