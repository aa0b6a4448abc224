#include <gtest/gtest.h>

#include <random>

#include "smoothck/error.hpp"
#include "smoothck/expr.hpp"
#include "smoothck/model.hpp"

namespace smoothck {
namespace {

double eval_text(const std::string& text) {
  return evaluate(parse_expression(text), EvalEnv{{}, {}});
}

TEST(Expr, PrecedenceAndAssociativity) {
  EXPECT_DOUBLE_EQ(eval_text("1 + 2 * 3"), 7.0);
  EXPECT_DOUBLE_EQ(eval_text("(1 + 2) * 3"), 9.0);
  EXPECT_DOUBLE_EQ(eval_text("8 - 3 - 2"), 3.0);
  EXPECT_DOUBLE_EQ(eval_text("8 / 4 / 2"), 1.0);
  EXPECT_DOUBLE_EQ(eval_text("2 ^ 3 ^ 2"), 512.0);
  EXPECT_DOUBLE_EQ(eval_text("-2 ^ 2"), -4.0);
  EXPECT_DOUBLE_EQ(eval_text("min(3, 1, 2) + max(4, 5) + abs(-2)"), 8.0);
  EXPECT_DOUBLE_EQ(eval_text("1.5e2 + 2E-1"), 150.2);
}

TEST(Expr, DivisionByZero) { EXPECT_THROW(eval_text("1 / (2 - 2)"), EvalError); }

TEST(Expr, UnresolvedSymbolFailsAtEvaluation) { EXPECT_THROW(eval_text("k + 1"), EvalError); }

TEST(Expr, SignalsOnlyWhenAllowed) {
  EXPECT_THROW(parse_expression("delta(X)"), ParseError);
  EXPECT_NO_THROW(parse_expression("delta(X) + mean(Y)", true));
  EXPECT_THROW(parse_expression("F[0,1] X", true), ParseError);
  EXPECT_THROW(parse_expression("min(1)"), ParseError);
}

TEST(Expr, MeanNeedsSignalValues) {
  const Model m = parse_model("species X=1\nreaction X -> 0 @ X\n");
  const Expr e = resolve_symbols(parse_expression("mean(X)", true), m);
  const std::vector<std::int64_t> state{1};
  EXPECT_THROW(evaluate(e, EvalEnv{state, {}}), EvalError);
  const std::vector<double> mean{2.5};
  EXPECT_DOUBLE_EQ(evaluate(e, EvalEnv{state, {}, {}, mean}), 2.5);
}

TEST(Expr, DeltaDefaultsToZero) {
  const Model m = parse_model("species X=1\nreaction X -> 0 @ X\n");
  const Expr e = resolve_symbols(parse_expression("delta(X)", true), m);
  const std::vector<std::int64_t> state{4};
  const std::vector<std::int64_t> jump{-1};
  EXPECT_EQ(evaluate(e, EvalEnv{state, {}}), 0.0);
  EXPECT_EQ(evaluate(e, EvalEnv{state, {}, jump}), -1.0);
}

TEST(Expr, FormatNumberRoundTrips) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}

// Random trees over a fixed alphabet print and re-parse to the same tree.
Expr random_expr(std::mt19937_64& rng, int depth) {
  const int pick = static_cast<int>(rng() % (depth > 0 ? 9 : 2));
  switch (pick) {
    case 0:
      return Expr::number(static_cast<double>(rng() % 100) / 8.0);
    case 1:
      return Expr::symbol(rng() % 2 ? "a" : "b_1");
    case 2:
      return Expr::unary(Expr::Kind::Neg, random_expr(rng, depth - 1));
    case 3:
      return Expr::binary(Expr::Kind::Add, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 4:
      return Expr::binary(Expr::Kind::Sub, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 5:
      return Expr::binary(Expr::Kind::Mul, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 6:
      return Expr::binary(Expr::Kind::Div, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 7:
      return Expr::binary(Expr::Kind::Pow, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    default:
      return Expr::call(Expr::Kind::Max, {random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
  }
}

TEST(Expr, PrintParseRoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const Expr e = random_expr(rng, 4);
    const std::string text = to_string(e);
    EXPECT_EQ(parse_expression(text), e) << text;
  }
}

}  // namespace
}  // namespace smoothck
