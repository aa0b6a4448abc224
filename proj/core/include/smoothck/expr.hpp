#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smoothck {

/// Arithmetic expression tree shared by reaction rates and formula atoms.
///
/// Identifiers start out as `Symbol` nodes and are resolved against a model
/// into `Species` or `Param` nodes carrying an index. `Mean` and `Delta` wrap
/// a species and only appear in formula atoms.
struct Expr {
  enum class Kind {
    Number,
    Symbol,
    Species,
    Param,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Min,
    Max,
    Abs,
    Mean,
    Delta,
  };

  Kind kind = Kind::Number;
  double value = 0.0;
  std::string name;
  int index = -1;
  std::vector<Expr> args;

  static Expr number(double v);
  static Expr symbol(std::string name);
  static Expr unary(Kind kind, Expr operand);
  static Expr binary(Kind kind, Expr lhs, Expr rhs);
  static Expr call(Kind kind, std::vector<Expr> operands);
  static Expr signal(Kind kind, std::string species);

  bool operator==(const Expr&) const = default;
};

/// Values visible to an expression at one instant.
struct EvalEnv {
  std::span<const std::int64_t> state;
  std::span<const double> params;
  /// Jump of each species at this instant; empty means every delta() is 0.
  std::span<const std::int64_t> delta = {};
  /// Mean-signal value per species; required when the expression uses mean().
  std::span<const double> mean = {};
};

/// Evaluates a resolved expression. Throws EvalError on division by zero or
/// on an unresolved identifier.
double evaluate(const Expr& expr, const EvalEnv& env);

/// True if any node of `expr` has the given kind.
bool contains_kind(const Expr& expr, Expr::Kind kind);

/// Appends the species index of every `kind` signal node (Mean or Delta).
void collect_signal_species(const Expr& expr, Expr::Kind kind, std::vector<int>& out);

/// Prints with minimal parentheses; parsing the output yields an equal tree.
std::string to_string(const Expr& expr);

/// Shortest decimal text that reads back to exactly `v`.
std::string format_number(double v);

/// Parses a standalone arithmetic expression. `allow_signals` enables mean(X)
/// and delta(X). Identifiers stay unresolved.
Expr parse_expression(std::string_view text, bool allow_signals = false);

}  // namespace smoothck
