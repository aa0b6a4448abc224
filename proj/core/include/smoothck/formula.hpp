#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "smoothck/expr.hpp"
#include "smoothck/model.hpp"

namespace smoothck {

enum class Comparison { Less, LessEqual, Greater, GreaterEqual, Equal };

/// Time-bounded MiTL formula.
///
/// Temporal nodes carry closed bounds [lo, hi]. `Until` has children
/// {left, right}; `Eventually`, `Always` and `Not` have one child; `And` two.
struct Formula {
  enum class Kind { True, Atomic, Not, And, Until, Eventually, Always };

  Kind kind = Kind::True;
  Comparison cmp = Comparison::Less;
  Expr lhs;
  Expr rhs;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<Formula> children;

  static Formula truth();
  static Formula atomic(Expr lhs, Comparison cmp, Expr rhs);
  static Formula negation(Formula f);
  static Formula conjunction(Formula a, Formula b);
  /// a | b, expressed as !(!a & !b).
  static Formula disjunction(Formula a, Formula b);
  static Formula until(double lo, double hi, Formula left, Formula right);
  static Formula eventually(double lo, double hi, Formula f);
  static Formula always(double lo, double hi, Formula f);

  bool operator==(const Formula&) const = default;
};

/// Parses the infix property syntax: `!`, `&`, `|`, `F[a,b]`, `G[a,b]`,
/// `U[a,b]`, `tt`/`ff`, parentheses, and atoms `expr op expr` with op one of
/// < <= > >= = (also ==). Throws ParseError, including for a > b or negative bounds.
Formula parse_formula(std::string_view text);

/// Reads and parses a property file (one formula; '#' comments allowed).
Formula load_formula(const std::filesystem::path& path);

/// Minimal time span of trajectory needed to decide truth at time 0.
double horizon(const Formula& f);

/// Resolves atom identifiers against `model`. Throws ValidationError naming
/// the first undeclared identifier.
Formula bind_formula(const Formula& f, const Model& model);

/// Species indices wrapped by mean() anywhere in a bound formula (sorted, unique).
std::vector<int> mean_species(const Formula& f);

std::string to_string(const Formula& f);

}  // namespace smoothck
