#include "smoothck/ep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>

#include "smoothck/error.hpp"
#include "smoothck/probit.hpp"

namespace smoothck {

void TrainingSet::validate() const {
  if (points.rows() == 0) throw InferenceError("training set is empty");
  if (static_cast<std::size_t>(points.rows()) != observations.size()) {
    throw InferenceError("training set has " + std::to_string(points.rows()) + " points but " +
                         std::to_string(observations.size()) + " observations");
  }
  for (std::size_t j = 0; j < observations.size(); ++j) {
    const auto& o = observations[j];
    if (o.trials == 0) throw InferenceError("training point " + std::to_string(j) + " has no trials");
    if (o.successes > o.trials) {
      throw InferenceError("training point " + std::to_string(j) + " has more successes than trials");
    }
  }
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (points.row(i) == points.row(j)) {
        throw InferenceError("training points " + std::to_string(j) + " and " + std::to_string(i) +
                             " coincide");
      }
    }
  }
}

namespace {

struct Tilted {
  double log_z;
  double mean;
  double var;
};

// Moments of N(g; mu, var) * Phi(y g), normalized.
Tilted tilted_moments(double y, double mu, double var) {
  const double scale = std::sqrt(1.0 + var);
  const double z = y * mu / scale;
  const double r = pdf_over_cdf(z);
  return {log_probit(z), mu + y * var * r / scale, var - var * var * r * (z + r) / (1.0 + var)};
}

double site_label(const Observation& o, std::uint64_t k) { return k < o.successes ? 1.0 : -1.0; }

// Rebuilds mean, covariance and the prediction cache from the aggregated sites.
void recompute(EpState& s, const Eigen::MatrixXd& k) {
  s.sqrt_tau = s.tau.cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd b = s.sqrt_tau.asDiagonal() * k * s.sqrt_tau.asDiagonal();
  b.diagonal().array() += 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt(b);
  if (llt.info() != Eigen::Success) throw InferenceError("EP posterior factorization failed");
  s.chol_b = llt.matrixL();
  const Eigen::MatrixXd v =
      llt.matrixL().solve(Eigen::MatrixXd(s.sqrt_tau.asDiagonal() * k));
  s.cov = k - v.transpose() * v;
  s.cov = 0.5 * (s.cov + s.cov.transpose());
  s.mean = s.cov * s.nu;
  const Eigen::VectorXd kn = k * s.nu;
  const Eigen::VectorXd inner = llt.solve(Eigen::VectorXd(s.sqrt_tau.cwiseProduct(kn)));
  s.weights = s.nu - s.sqrt_tau.cwiseProduct(inner);
}

double log_marginal(const EpState& s) {
  double total = 0.0;
  std::size_t site = 0;
  for (Eigen::Index j = 0; j < s.mean.size(); ++j) {
    const double sjj = s.cov(j, j);
    const auto& o = s.observations[static_cast<std::size_t>(j)];
    for (std::uint64_t k = 0; k < o.trials; ++k, ++site) {
      const double tt = s.site_tau[site];
      const double tn = s.site_nu[site];
      const double tau_c = 1.0 / sjj - tt;
      const double nu_c = s.mean(j) / sjj - tn;
      if (!(tau_c > 0.0)) continue;
      const Tilted m = tilted_moments(site_label(o, k), nu_c / tau_c, 1.0 / tau_c);
      total += m.log_z + 0.5 * std::log1p(tt / tau_c) + nu_c * nu_c / (2.0 * tau_c) -
               (nu_c + tn) * (nu_c + tn) / (2.0 * (tau_c + tt));
    }
  }
  total -= s.chol_b.diagonal().array().log().sum();
  total += 0.5 * s.nu.dot(s.mean);
  return total;
}

}  // namespace

EpState ep_fit(const TrainingSet& data, const KernelConfig& kernel, const EpOptions& options) {
  data.validate();
  const GramMatrix g = gram(kernel, data.points);
  const Eigen::MatrixXd& k = g.matrix();
  const Eigen::Index n = k.rows();

  EpState s;
  s.kernel = kernel;
  s.points = data.points;
  s.observations = data.observations;
  s.jitter = g.jitter();
  std::size_t total_sites = 0;
  for (const auto& o : data.observations) total_sites += o.trials;
  s.site_tau.assign(total_sites, 0.0);
  s.site_nu.assign(total_sites, 0.0);
  s.tau = Eigen::VectorXd::Zero(n);
  s.nu = Eigen::VectorXd::Zero(n);
  s.cov = k;
  s.mean = Eigen::VectorXd::Zero(n);

  std::vector<double> best_tau;
  std::vector<double> best_nu;
  double best_delta = std::numeric_limits<double>::infinity();
  bool damp = false;

  Eigen::VectorXd v(n);
  for (s.sweeps = 1; s.sweeps <= options.max_sweeps; ++s.sweeps) {
    const double rate = damp ? 0.5 : 1.0;
    bool skipped = false;
    double max_delta = 0.0;
    std::size_t site = 0;

    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& o = data.observations[static_cast<std::size_t>(j)];
      // Sites of latent j only move the posterior along v = cov(:, j):
      // cov' = cov - a v v^T, mean' = mean + b v.
      v = s.cov.col(j);
      const double sjj = v(j);
      const double mj = s.mean(j);
      double a = 0.0;
      double b = 0.0;
      for (std::uint64_t t = 0; t < o.trials; ++t, ++site) {
        const double c = 1.0 - a * sjj;
        const double s_cur = c * sjj;
        const double m_cur = mj + b * sjj;
        double& ti = s.site_tau[site];
        double& ni = s.site_nu[site];
        const double tau_c = 1.0 / s_cur - ti;
        const double nu_c = m_cur / s_cur - ni;
        if (!(tau_c > 0.0)) {
          skipped = true;
          continue;
        }
        const Tilted m = tilted_moments(site_label(o, t), nu_c / tau_c, 1.0 / tau_c);
        if (!(m.var > 0.0) || !std::isfinite(m.mean)) {
          skipped = true;
          continue;
        }
        double tau_new = std::max(0.0, 1.0 / m.var - tau_c);
        double nu_new = m.mean / m.var - nu_c;
        tau_new = ti + rate * (tau_new - ti);
        nu_new = ni + rate * (nu_new - ni);
        const double dt = tau_new - ti;
        const double dn = nu_new - ni;
        max_delta = std::max({max_delta, std::abs(dt), std::abs(dn)});
        if (dt == 0.0 && dn == 0.0) continue;
        const double denom = 1.0 + dt * s_cur;
        a += dt / denom * c * c;
        b += (dn - dt * m_cur) / denom * c;
        s.tau(j) += dt;
        s.nu(j) += dn;
        ti = tau_new;
        ni = nu_new;
      }
      if (a != 0.0) s.cov.noalias() -= a * v * v.transpose();
      if (b != 0.0) s.mean.noalias() += b * v;
    }

    // Refresh from the aggregated sites to shed accumulated round-off.
    recompute(s, k);
    s.max_delta = max_delta;
    if (max_delta < best_delta) {
      best_delta = max_delta;
      best_tau = s.site_tau;
      best_nu = s.site_nu;
    }
    if (max_delta < options.tolerance) {
      s.converged = true;
      break;
    }
    damp = skipped;
  }
  s.sweeps = std::min(s.sweeps, options.max_sweeps);

  if (!s.converged && !best_tau.empty() && best_delta < s.max_delta) {
    s.site_tau = std::move(best_tau);
    s.site_nu = std::move(best_nu);
    s.tau.setZero();
    s.nu.setZero();
    std::size_t site = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (std::uint64_t t = 0; t < data.observations[static_cast<std::size_t>(j)].trials; ++t) {
        s.tau(j) += s.site_tau[site];
        s.nu(j) += s.site_nu[site++];
      }
    }
    recompute(s, k);
    s.max_delta = best_delta;
  }

  s.log_marginal = log_marginal(s);
  if (!std::isfinite(s.log_marginal)) throw InferenceError("EP log marginal likelihood is not finite");
  return s;
}

LatentPrediction predict_latent(const EpState& state, const Points& xstar) {
  Eigen::MatrixXd ks = cross_gram(state.kernel, state.points, xstar);
  // The jitter acts as a nugget: it only couples exactly coincident inputs.
  Eigen::VectorXd prior = Eigen::VectorXd::Constant(xstar.rows(), state.kernel.amplitude);
  for (Eigen::Index i = 0; i < xstar.rows(); ++i) {
    for (Eigen::Index j = 0; j < state.points.rows(); ++j) {
      if (xstar.row(i) == state.points.row(j)) {
        ks(i, j) += state.jitter;
        prior(i) += state.jitter;
      }
    }
  }
  LatentPrediction out;
  out.mean = ks * state.weights;
  // Columns of w are L^{-1} S^1/2 k*.
  Eigen::MatrixXd w = state.sqrt_tau.asDiagonal() * ks.transpose();
  state.chol_b.triangularView<Eigen::Lower>().solveInPlace(w);
  out.variance = prior.array() - w.colwise().squaredNorm().transpose().array();
  for (Eigen::Index i = 0; i < out.variance.size(); ++i) {
    if (out.variance(i) < 0.0) {
      out.variance(i) = 0.0;
      ++out.clipped;
    }
  }
  return out;
}

Prediction probability_from_latent(double mean, double var) {
  const double sd = std::sqrt(std::max(0.0, var));
  Prediction p;
  p.latent_mean = mean;
  p.latent_var = std::max(0.0, var);
  p.prob_mean = probit(mean / std::sqrt(1.0 + p.latent_var));
  // Phi(mu / sqrt(1 + s^2)) can leave the latent-quantile band when |mu| is
  // large and s small; the band is widened to contain it.
  p.ci_low = std::min(probit(mean - 1.96 * sd), p.prob_mean);
  p.ci_high = std::max(probit(mean + 1.96 * sd), p.prob_mean);
  return p;
}

std::vector<Prediction> predict_probability(const EpState& state, const Points& xstar) {
  const LatentPrediction latent = predict_latent(state, xstar);
  std::vector<Prediction> out;
  out.reserve(static_cast<std::size_t>(xstar.rows()));
  for (Eigen::Index i = 0; i < xstar.rows(); ++i) {
    Prediction p = probability_from_latent(latent.mean(i), latent.variance(i));
    p.point.resize(static_cast<std::size_t>(xstar.cols()));
    for (Eigen::Index d = 0; d < xstar.cols(); ++d) p.point[static_cast<std::size_t>(d)] = xstar(i, d);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace smoothck
