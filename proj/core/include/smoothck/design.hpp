#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smoothck/kernel.hpp"
#include "smoothck/model.hpp"

namespace smoothck {

struct VariedParameter {
  std::string name;
  double low = 0.0;
  double high = 1.0;
};

/// Box of varied parameters plus fixed overrides of other model parameters.
struct ParameterDomain {
  std::vector<VariedParameter> varied;
  std::vector<std::pair<std::string, double>> fixed;

  std::size_t dimension() const { return varied.size(); }

  /// Throws ValidationError listing every problem found against `model`.
  void validate(const Model& model) const;

  /// Model parameter vector with the fixed overrides applied.
  std::vector<double> base_parameters(const Model& model) const;

  /// Model indices of the varied parameters.
  std::vector<std::size_t> varied_indices(const Model& model) const;
};

/// Cartesian product of evenly spaced values including both endpoints; row
/// major with the first parameter varying slowest. Every count must be >= 2.
Points regular_grid(const ParameterDomain& domain, std::span<const std::size_t> counts);

/// n points with one point per equal-width stratum in every dimension, placed
/// at stratum midpoints; strata are matched by seeded random permutations.
Points latin_hypercube(const ParameterDomain& domain, std::size_t n, std::uint64_t seed);

/// Affine map of each column from [low, high] onto [0, 1].
Points rescale_to_unit(const ParameterDomain& domain, const Points& raw);

/// P(N(1) <= 3) for a Poisson process of the given rate.
double poisson_sat_exact(double rate);

}  // namespace smoothck
