#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "smoothck/csv.hpp"
#include "smoothck/error.hpp"

namespace smoothck {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "smoothck_csv_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Csv, PredictionsHeaderAndRows) {
  std::vector<Prediction> preds(2);
  preds[0].point = {0.5};
  preds[0].prob_mean = 0.25;
  preds[0].ci_low = 0.125;
  preds[0].ci_high = 0.5;
  preds[1].point = {1.0};
  std::ostringstream out;
  write_predictions_csv(out, {"mu"}, preds);
  EXPECT_EQ(out.str(), "mu,prob_mean,ci_low,ci_high\n0.5,0.25,0.125,0.5\n1,0.5,0,1\n");
}

TEST(Csv, TwoDimensionalColumns) {
  std::vector<Prediction> preds(1);
  preds[0].point = {0.1, 2.0};
  std::ostringstream out;
  write_predictions_csv(out, {"k_i", "k_r"}, preds);
  const std::string s = out.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "k_i,k_r,prob_mean,ci_low,ci_high");

  Points pts(1, 2);
  pts << 0.1, 2.0;
  std::ostringstream tr;
  write_training_csv(tr, {"k_i", "k_r"}, pts, {{3, 10}});
  EXPECT_EQ(tr.str(), "k_i,k_r,successes,trials,empirical\n0.10000000000000001,2,3,10,0.29999999999999999\n");
}

TEST(Csv, NumberFormatRoundTrips) {
  EXPECT_EQ(format_csv_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_csv_number(3.0), "3");
  for (double v : {1.0 / 3.0, 2.718281828459045, 1e-300, 123456789.123456789}) {
    EXPECT_EQ(std::stod(format_csv_number(v)), v);
  }
}

TEST(Csv, ReadBackWithinTolerance) {
  std::vector<Prediction> preds;
  for (int i = 0; i < 7; ++i) {
    Prediction p;
    p.point = {i / 7.0, std::sqrt(i + 0.5)};
    p.prob_mean = 1.0 / (i + 3.0);
    p.ci_low = p.prob_mean / 3.0;
    p.ci_high = std::min(1.0, p.prob_mean * 1.7);
    preds.push_back(p);
  }
  std::stringstream io;
  write_predictions_csv(io, {"a", "b"}, preds);
  const CsvTable t = read_csv(io);
  ASSERT_EQ(t.header.size(), 5u);
  ASSERT_EQ(t.rows.size(), 7u);
  for (int i = 0; i < 7; ++i) {
    EXPECT_NEAR(t.rows[i][0], preds[i].point[0], 1e-12);
    EXPECT_NEAR(t.rows[i][1], preds[i].point[1], 1e-12);
    EXPECT_NEAR(t.rows[i][2], preds[i].prob_mean, 1e-12);
    EXPECT_NEAR(t.rows[i][4], preds[i].ci_high, 1e-12);
  }
}

TEST(Csv, ReadRejectsMalformed) {
  std::istringstream empty("");
  EXPECT_THROW(read_csv(empty), IoError);
  std::istringstream ragged("a,b\n1,2\n3\n");
  EXPECT_THROW(read_csv(ragged), IoError);
  std::istringstream text("a,b\n1,x\n");
  EXPECT_THROW(read_csv(text), IoError);
  EXPECT_THROW(read_csv(fs::path("/nonexistent/dir/file.csv")), IoError);
}

ExperimentResult run_small(std::uint64_t seed) {
  const Model m = load_model(std::string(SMOOTHCK_MODELS_DIR) + "/poisson.model");
  ExperimentConfig c;
  c.design.counts = {6};
  c.runs_per_point = 4;
  c.predict_counts = {9};
  c.kernel = KernelConfig::make(1.0, {1.0});
  c.units = InputUnits::Raw;
  c.seed = seed;
  return run_smoothed_mc(m, parse_formula("G[0,1] (N < 4)"), {{{"mu", 0.5, 5.0}}, {}}, c);
}

TEST(Csv, WriteCsvFilesAndByteDeterminism) {
  const fs::path p1 = scratch("a.predictions.csv"), t1 = scratch("a.training.csv");
  const fs::path p2 = scratch("b.predictions.csv"), t2 = scratch("b.training.csv");
  write_csv(run_small(7), p1, t1);
  write_csv(run_small(7), p2, t2);
  EXPECT_EQ(slurp(p1), slurp(p2));
  EXPECT_EQ(slurp(t1), slurp(t2));
  EXPECT_TRUE(fs::exists(fs::path(p1.string() + ".meta")));
  const CsvTable pred = read_csv(p1);
  EXPECT_EQ(pred.rows.size(), 9u);
  const CsvTable train = read_csv(t1);
  EXPECT_EQ(train.header, (std::vector<std::string>{"mu", "successes", "trials", "empirical"}));
  EXPECT_EQ(train.rows.size(), 6u);
  // Overwrite with a different seed.
  write_csv(run_small(8), p1, t1);
  EXPECT_EQ(read_csv(p1).rows.size(), 9u);
}

TEST(Csv, UnwritablePathThrows) {
  EXPECT_THROW(write_csv(run_small(1), "/nonexistent/dir/p.csv", "/nonexistent/dir/t.csv"), IoError);
}

}  // namespace
}  // namespace smoothck
