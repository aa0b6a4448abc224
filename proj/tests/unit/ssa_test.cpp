#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "smoothck/error.hpp"
#include "smoothck/model.hpp"
#include "smoothck/ssa.hpp"

namespace smoothck {
namespace {

const Model& sir() {
  static const Model m = parse_model(
      "species S=99 I=1 R=0\nparam k_i=0.12 k_r=0.05\n"
      "reaction S + I -> I + I @ k_i*S*I\nreaction I -> R @ k_r*I\n");
  return m;
}

const Model& poisson() {
  static const Model m = parse_model("species N=0\nparam mu=1\nreaction -> N @ mu\n");
  return m;
}

// Checks every Trajectory invariant against the model's reactions.
void expect_valid(const Trajectory& tr, const Model& m) {
  ASSERT_EQ(tr.states.size(), (tr.jump_count() + 1) * m.species.size());
  for (std::size_t i = 0; i < tr.jump_count(); ++i) {
    EXPECT_GT(tr.times[i], i == 0 ? 0.0 : tr.times[i - 1]);
    EXPECT_LE(tr.times[i], tr.horizon);
    std::vector<std::int64_t> diff(m.species.size());
    for (std::size_t s = 0; s < diff.size(); ++s) diff[s] = tr.state(i + 1)[s] - tr.state(i)[s];
    bool matches = false;
    for (const auto& r : m.reactions) matches = matches || r.net_change() == diff;
    EXPECT_TRUE(matches) << "jump " << i << " is not a reaction";
  }
  for (auto c : tr.states) EXPECT_GE(c, 0);
}

TEST(Simulate, PoissonGapsAreExponential) {
  const double mu = 2.0;
  const std::vector<double> params{mu};
  // Horizon long enough for about 1e5 jumps.
  const Trajectory tr = simulate(poisson(), params, 5e4, 17);
  ASSERT_GT(tr.jump_count(), 90000u);
  double sum = tr.times.front();
  for (std::size_t i = 1; i < tr.jump_count(); ++i) sum += tr.times[i] - tr.times[i - 1];
  const double n = static_cast<double>(tr.jump_count());
  const double se = (1.0 / mu) / std::sqrt(n);
  EXPECT_NEAR(sum / n, 1.0 / mu, 3.0 * se);
}

TEST(Simulate, AbsorbingInitialState) {
  const Model m = parse_model("species A=0 B=5\nparam k=1\nreaction A -> B @ k*A\n");
  const Trajectory tr = simulate(m, m.default_parameters(), 10.0, 1);
  EXPECT_EQ(tr.jump_count(), 0u);
  EXPECT_EQ(tr.state_at(7.0)[1], 5);
  EXPECT_EQ(tr.horizon, 10.0);
}

TEST(Simulate, Deterministic) {
  const auto p = sir().default_parameters();
  EXPECT_EQ(simulate(sir(), p, 120.0, 99), simulate(sir(), p, 120.0, 99));
  EXPECT_NE(simulate(sir(), p, 120.0, 99), simulate(sir(), p, 120.0, 100));
}

TEST(Simulate, SirInvariantsAndConservation) {
  const auto p = sir().default_parameters();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Trajectory tr = simulate(sir(), p, 120.0, seed);
    expect_valid(tr, sir());
    for (std::size_t row = 0; row <= tr.jump_count(); ++row) {
      const auto s = tr.state(row);
      ASSERT_EQ(s[0] + s[1] + s[2], 100);
    }
  }
}

TEST(Simulate, RandomModelsSatisfyInvariants) {
  const char* models[] = {
      "species A=10 B=3 C=0\nparam k=0.7 h=2\nreaction A + B -> C @ k*A*B\n"
      "reaction C -> A + B @ h*C\nreaction 2 A -> B @ 0.1*A*(A-1)\nreaction -> A @ k\n",
      "species X=0\nparam b=5 d=0.2\nreaction -> X @ b\nreaction X -> 0 @ d*X\n",
      "species P=2 Q=50\nparam r=0.01\nreaction P + Q -> 2 P @ r*P*Q\nreaction P -> 0 @ 0.3*P\n",
  };
  for (const char* text : models) {
    const Model m = parse_model(text);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      expect_valid(simulate(m, m.default_parameters(), 25.0, seed), m);
    }
  }
}

TEST(Simulate, PureBirthIsMonotone) {
  const Trajectory tr = simulate(poisson(), std::vector<double>{3.0}, 50.0, 4);
  for (std::size_t row = 1; row <= tr.jump_count(); ++row) EXPECT_GT(tr.state(row)[0], tr.state(row - 1)[0]);
}

TEST(Simulate, RightContinuousLookup) {
  const Trajectory tr = simulate(poisson(), std::vector<double>{1.0}, 10.0, 8);
  ASSERT_GT(tr.jump_count(), 2u);
  const double t1 = tr.times[1];
  EXPECT_EQ(tr.state_at(t1)[0], 2);
  EXPECT_EQ(tr.state_at(std::nextafter(t1, 0.0))[0], 1);
  EXPECT_EQ(tr.state_at(0.0)[0], 0);
}

TEST(Simulate, NegativeRateIsSimulationError) {
  const Model m = parse_model("species A=1\nparam k=1\nreaction A -> 0 @ k*(A - 2)\n");
  EXPECT_THROW(simulate(m, m.default_parameters(), 100.0, 1), SimulationError);
}

TEST(Simulate, MaxJumpGuard) {
  SimulationOptions options;
  options.max_jumps = 100;
  EXPECT_THROW(simulate(poisson(), std::vector<double>{100.0}, 10.0, 1, options), SimulationError);
}

TEST(Ensemble, MemberZeroEqualsSimulate) {
  const auto p = sir().default_parameters();
  const auto one = simulate_ensemble(sir(), p, 120.0, 1, 5);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], simulate(sir(), p, 120.0, 5));
}

TEST(Ensemble, IndependentOfThreadCount) {
  const auto p = sir().default_parameters();
  const auto a = simulate_ensemble(sir(), p, 120.0, 10, 77, {}, 1);
  const auto b = simulate_ensemble(sir(), p, 120.0, 10, 77, {}, 4);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, simulate_ensemble(sir(), p, 120.0, 10, 77));
}

Trajectory constant(std::int64_t value, double horizon) {
  Trajectory tr;
  tr.species_count = 1;
  tr.horizon = horizon;
  tr.states = {value};
  return tr;
}

TEST(MeanTrajectory, ConstantEnsembles) {
  const Model m = parse_model("species N=0\nreaction -> N @ 1\n");
  const std::vector<double> grid{0.0, 0.5, 1.0};
  const std::vector<Trajectory> threes{constant(3, 1.0), constant(3, 1.0)};
  const MeanSignal a = mean_trajectory(threes, grid, m, "N");
  for (double v : a.means[0]) EXPECT_EQ(v, 3.0);
  const std::vector<Trajectory> mixed{constant(0, 1.0), constant(4, 1.0)};
  const MeanSignal b = mean_trajectory(mixed, grid, m, "N");
  for (double v : b.means[0]) EXPECT_EQ(v, 2.0);
  EXPECT_THROW(mean_trajectory(mixed, grid, m, "Q"), Error);
}

TEST(MeanTrajectory, PoissonMeanAtTwo) {
  const auto ensemble = simulate_ensemble(poisson(), std::vector<double>{1.0}, 2.0, 10000, 3);
  const std::vector<double> grid{0.0, 1.0, 2.0};
  const MeanSignal m = mean_trajectory(ensemble, grid, poisson(), "N");
  EXPECT_EQ(m.means[0][0], 0.0);
  EXPECT_NEAR(m.means[0][2], 2.0, 3.0 * std::sqrt(2.0 / 1e4));
  std::vector<double> out(1);
  m.values_at(1.5, out);
  EXPECT_DOUBLE_EQ(out[0], 0.5 * (m.means[0][1] + m.means[0][2]));
}

TEST(TrajectoryCsv, HeaderAndRows) {
  Trajectory tr = constant(0, 3.0);
  tr.times = {0.5, 2.0};
  tr.states = {0, 1, 2};
  std::ostringstream out;
  write_trajectory_csv(out, tr, poisson());
  EXPECT_EQ(out.str(), "t,N\n0,0\n0.5,1\n2,2\n");
}

}  // namespace
}  // namespace smoothck
