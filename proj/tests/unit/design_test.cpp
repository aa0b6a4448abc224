#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "smoothck/design.hpp"
#include "smoothck/error.hpp"

namespace smoothck {
namespace {

ParameterDomain box1(double lo, double hi) { return {{{"mu", lo, hi}}, {}}; }

TEST(RegularGrid, FortySixPoints) {
  const std::size_t counts[] = {46};
  const Points g = regular_grid(box1(0.5, 5.0), counts);
  ASSERT_EQ(g.rows(), 46);
  for (int i = 0; i < 46; ++i) EXPECT_NEAR(g(i, 0), 0.5 + 0.1 * i, 1e-12);
  EXPECT_EQ(g(0, 0), 0.5);
  EXPECT_EQ(g(45, 0), 5.0);
}

TEST(RegularGrid, TwoDimensionalRowMajor) {
  const ParameterDomain d{{{"a", 0.0, 1.0}, {"b", 10.0, 20.0}}, {}};
  const std::size_t counts[] = {10, 10};
  const Points g = regular_grid(d, counts);
  ASSERT_EQ(g.rows(), 100);
  EXPECT_EQ(g(0, 0), 0.0);
  EXPECT_EQ(g(1, 0), 0.0);
  EXPECT_NEAR(g(1, 1), 10.0 + 10.0 / 9.0, 1e-12);
  EXPECT_NEAR(g(10, 0), 1.0 / 9.0, 1e-12);
  EXPECT_EQ(g(99, 0), 1.0);
  EXPECT_EQ(g(99, 1), 20.0);
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    EXPECT_GE(g(i, 0), 0.0);
    EXPECT_LE(g(i, 0), 1.0);
    EXPECT_GE(g(i, 1), 10.0);
    EXPECT_LE(g(i, 1), 20.0);
  }
}

TEST(RegularGrid, EndpointsOnlyAndErrors) {
  const std::size_t two[] = {2};
  const Points g = regular_grid(box1(0.0, 1.0), two);
  ASSERT_EQ(g.rows(), 2);
  EXPECT_EQ(g(0, 0), 0.0);
  EXPECT_EQ(g(1, 0), 1.0);
  const std::size_t one[] = {1};
  EXPECT_THROW(regular_grid(box1(0.0, 1.0), one), ValidationError);
  const std::size_t wrong[] = {3, 3};
  EXPECT_THROW(regular_grid(box1(0.0, 1.0), wrong), ValidationError);
}

TEST(RegularGrid, UniformSpacing) {
  const std::size_t counts[] = {137};
  const Points g = regular_grid(box1(-3.7, 12.1), counts);
  const double h = (12.1 + 3.7) / 136.0;
  for (int i = 1; i < 137; ++i) EXPECT_NEAR(g(i, 0) - g(i - 1, 0), h, 1e-12);
}

TEST(LatinHypercube, SinglePointIsMidpoint) {
  const ParameterDomain d{{{"a", 0.0, 2.0}, {"b", -1.0, 1.0}}, {}};
  const Points p = latin_hypercube(d, 1, 5);
  ASSERT_EQ(p.rows(), 1);
  EXPECT_DOUBLE_EQ(p(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(p(0, 1), 0.0);
}

TEST(LatinHypercube, OnePointPerStratum) {
  const ParameterDomain d{{{"a", 0.0, 1.0}, {"b", 5.0, 7.0}, {"c", -2.0, 0.0}}, {}};
  for (std::size_t n : {2, 7, 50}) {
    const Points p = latin_hypercube(d, n, n * 3);
    for (int c = 0; c < 3; ++c) {
      std::set<long> strata;
      for (Eigen::Index i = 0; i < p.rows(); ++i) {
        const double u = (p(i, c) - d.varied[c].low) / (d.varied[c].high - d.varied[c].low);
        const double scaled = u * static_cast<double>(n);
        EXPECT_NEAR(scaled - std::floor(scaled), 0.5, 1e-9);
        strata.insert(static_cast<long>(std::floor(scaled)));
      }
      EXPECT_EQ(strata.size(), n);
      EXPECT_EQ(*strata.rbegin(), static_cast<long>(n) - 1);
    }
  }
}

TEST(LatinHypercube, Reproducible) {
  const ParameterDomain d{{{"a", 0.0, 1.0}, {"b", 0.0, 1.0}}, {}};
  EXPECT_EQ(latin_hypercube(d, 4, 11), latin_hypercube(d, 4, 11));
  EXPECT_NE(latin_hypercube(d, 20, 11), latin_hypercube(d, 20, 12));
  EXPECT_THROW(latin_hypercube(d, 0, 1), ValidationError);
}

TEST(Rescale, UnitBox) {
  const ParameterDomain d{{{"a", 2.0, 4.0}, {"b", -1.0, 1.0}}, {}};
  Points raw(2, 2);
  raw << 2.0, 1.0, 3.0, 0.0;
  const Points u = rescale_to_unit(d, raw);
  EXPECT_EQ(u(0, 0), 0.0);
  EXPECT_EQ(u(0, 1), 1.0);
  EXPECT_EQ(u(1, 0), 0.5);
  EXPECT_EQ(u(1, 1), 0.5);
}

TEST(ParameterDomain, Validation) {
  const Model m = parse_model("species S=1\nparam a=1\nparam b=2\nreaction S -> 0 @ a*b\n");
  EXPECT_NO_THROW((ParameterDomain{{{"a", 0.0, 1.0}}, {{"b", 3.0}}}).validate(m));
  EXPECT_THROW((ParameterDomain{{{"a", 1.0, 1.0}}, {}}).validate(m), ValidationError);
  EXPECT_THROW((ParameterDomain{{{"a", 2.0, 1.0}}, {}}).validate(m), ValidationError);
  EXPECT_THROW((ParameterDomain{{{"zz", 0.0, 1.0}}, {}}).validate(m), ValidationError);
  EXPECT_THROW((ParameterDomain{{{"a", 0.0, 1.0}, {"a", 0.0, 2.0}}, {}}).validate(m),
               ValidationError);
  EXPECT_THROW((ParameterDomain{{{"a", 0.0, 1.0}}, {{"a", 0.5}}}).validate(m), ValidationError);
  EXPECT_THROW((ParameterDomain{{}, {}}).validate(m), ValidationError);

  const ParameterDomain d{{{"b", 0.0, 1.0}}, {{"a", 7.0}}};
  EXPECT_EQ(d.base_parameters(m), (std::vector<double>{7.0, 2.0}));
  EXPECT_EQ(d.varied_indices(m), std::vector<std::size_t>{1});
}

TEST(PoissonExact, Values) {
  EXPECT_NEAR(poisson_sat_exact(0.5), 0.998248, 1e-6);
  EXPECT_NEAR(poisson_sat_exact(5.0), 0.265026, 1e-6);
  EXPECT_NEAR(poisson_sat_exact(1e-9), 1.0, 1e-12);
  EXPECT_NEAR(poisson_sat_exact(5.0),
              std::exp(-5.0) * (1.0 + 5.0 + 12.5 + 125.0 / 6.0), 1e-15);
}

}  // namespace
}  // namespace smoothck
