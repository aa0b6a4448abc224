#include "smoothck/design.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "smoothck/error.hpp"
#include "smoothck/rng.hpp"

namespace smoothck {

void ParameterDomain::validate(const Model& model) const {
  std::vector<std::string> problems;
  std::set<std::string> seen;
  if (varied.empty()) problems.push_back("no parameter is varied");
  for (const auto& v : varied) {
    if (!seen.insert(v.name).second) problems.push_back("parameter '" + v.name + "' is varied twice");
    if (!model.parameter_index(v.name)) {
      problems.push_back("varied parameter '" + v.name + "' is not declared by the model");
    }
    if (!(std::isfinite(v.low) && std::isfinite(v.high) && v.low < v.high)) {
      problems.push_back("range of '" + v.name + "' must satisfy low < high");
    }
  }
  for (const auto& [name, value] : fixed) {
    if (!model.parameter_index(name)) {
      problems.push_back("fixed parameter '" + name + "' is not declared by the model");
    }
    if (seen.count(name) != 0) problems.push_back("parameter '" + name + "' is both fixed and varied");
    if (!std::isfinite(value)) problems.push_back("fixed value of '" + name + "' is not finite");
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

std::vector<double> ParameterDomain::base_parameters(const Model& model) const {
  std::vector<double> params = model.default_parameters();
  for (const auto& [name, value] : fixed) params[*model.parameter_index(name)] = value;
  return params;
}

std::vector<std::size_t> ParameterDomain::varied_indices(const Model& model) const {
  std::vector<std::size_t> out;
  for (const auto& v : varied) out.push_back(*model.parameter_index(v.name));
  return out;
}

Points regular_grid(const ParameterDomain& domain, std::span<const std::size_t> counts) {
  const std::size_t d = domain.dimension();
  if (counts.size() != d) {
    throw ValidationError({"grid needs " + std::to_string(d) + " point counts, got " +
                           std::to_string(counts.size())});
  }
  std::size_t total = 1;
  for (std::size_t c : counts) {
    if (c < 2) throw ValidationError({"grid point counts must be at least 2"});
    total *= c;
  }
  Points out(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(d));
  for (std::size_t row = 0; row < total; ++row) {
    std::size_t rest = row;
    for (std::size_t k = d; k-- > 0;) {
      const std::size_t i = rest % counts[k];
      rest /= counts[k];
      const auto& v = domain.varied[k];
      const double value = i + 1 == counts[k]
                               ? v.high
                               : v.low + (v.high - v.low) * static_cast<double>(i) /
                                             static_cast<double>(counts[k] - 1);
      out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k)) = value;
    }
  }
  return out;
}

Points latin_hypercube(const ParameterDomain& domain, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ValidationError({"Latin hypercube needs at least one point"});
  const std::size_t d = domain.dimension();
  Points out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  Philox rng(seed, 0x6c6873);
  std::vector<std::size_t> perm(n);
  for (std::size_t k = 0; k < d; ++k) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    const auto& v = domain.varied[k];
    for (std::size_t i = 0; i < n; ++i) {
      const double u = (static_cast<double>(perm[i]) + 0.5) / static_cast<double>(n);
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v.low + (v.high - v.low) * u;
    }
  }
  return out;
}

Points rescale_to_unit(const ParameterDomain& domain, const Points& raw) {
  Points out = raw;
  for (std::size_t k = 0; k < domain.dimension(); ++k) {
    const auto& v = domain.varied[k];
    auto col = out.col(static_cast<Eigen::Index>(k));
    col = (col.array() - v.low) / (v.high - v.low);
  }
  return out;
}

double poisson_sat_exact(double rate) {
  if (!(rate > 0.0)) throw ValidationError({"Poisson rate must be positive"});
  return std::exp(-rate) * (1.0 + rate + rate * rate / 2.0 + rate * rate * rate / 6.0);
}

}  // namespace smoothck
