#include "smoothck/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "expr_parser.hpp"
#include "smoothck/error.hpp"

namespace smoothck {

Expr Expr::number(double v) {
  Expr e;
  e.kind = Kind::Number;
  e.value = v;
  return e;
}

Expr Expr::symbol(std::string name) {
  Expr e;
  e.kind = Kind::Symbol;
  e.name = std::move(name);
  return e;
}

Expr Expr::unary(Kind kind, Expr operand) {
  Expr e;
  e.kind = kind;
  e.args.push_back(std::move(operand));
  return e;
}

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = kind;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

Expr Expr::call(Kind kind, std::vector<Expr> operands) {
  Expr e;
  e.kind = kind;
  e.args = std::move(operands);
  return e;
}

Expr Expr::signal(Kind kind, std::string species) {
  Expr e;
  e.kind = kind;
  e.name = std::move(species);
  return e;
}

double evaluate(const Expr& expr, const EvalEnv& env) {
  using K = Expr::Kind;
  switch (expr.kind) {
    case K::Number:
      return expr.value;
    case K::Symbol:
      throw EvalError("unresolved identifier '" + expr.name + "'");
    case K::Species:
      return static_cast<double>(env.state[static_cast<std::size_t>(expr.index)]);
    case K::Param:
      return env.params[static_cast<std::size_t>(expr.index)];
    case K::Neg:
      return -evaluate(expr.args[0], env);
    case K::Add:
      return evaluate(expr.args[0], env) + evaluate(expr.args[1], env);
    case K::Sub:
      return evaluate(expr.args[0], env) - evaluate(expr.args[1], env);
    case K::Mul:
      return evaluate(expr.args[0], env) * evaluate(expr.args[1], env);
    case K::Div: {
      const double num = evaluate(expr.args[0], env);
      const double den = evaluate(expr.args[1], env);
      if (den == 0.0) throw EvalError("division by zero in '" + to_string(expr) + "'");
      return num / den;
    }
    case K::Pow:
      return std::pow(evaluate(expr.args[0], env), evaluate(expr.args[1], env));
    case K::Min: {
      double out = std::numeric_limits<double>::infinity();
      for (const auto& a : expr.args) out = std::min(out, evaluate(a, env));
      return out;
    }
    case K::Max: {
      double out = -std::numeric_limits<double>::infinity();
      for (const auto& a : expr.args) out = std::max(out, evaluate(a, env));
      return out;
    }
    case K::Abs:
      return std::abs(evaluate(expr.args[0], env));
    case K::Mean:
      if (expr.index < 0) throw EvalError("unresolved species in mean(" + expr.name + ")");
      if (env.mean.empty()) throw EvalError("mean(" + expr.name + ") needs a mean signal");
      return env.mean[static_cast<std::size_t>(expr.index)];
    case K::Delta:
      if (expr.index < 0) throw EvalError("unresolved species in delta(" + expr.name + ")");
      if (env.delta.empty()) return 0.0;
      return static_cast<double>(env.delta[static_cast<std::size_t>(expr.index)]);
  }
  return 0.0;
}

bool contains_kind(const Expr& expr, Expr::Kind kind) {
  if (expr.kind == kind) return true;
  return std::any_of(expr.args.begin(), expr.args.end(),
                     [kind](const Expr& a) { return contains_kind(a, kind); });
}

void collect_signal_species(const Expr& expr, Expr::Kind kind, std::vector<int>& out) {
  if (expr.kind == kind && expr.index >= 0) out.push_back(expr.index);
  for (const auto& a : expr.args) collect_signal_species(a, kind, out);
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

int precedence(Expr::Kind k) {
  using K = Expr::Kind;
  switch (k) {
    case K::Add:
    case K::Sub:
      return 1;
    case K::Mul:
    case K::Div:
      return 2;
    case K::Neg:
      return 3;
    case K::Pow:
      return 4;
    default:
      return 5;
  }
}

const char* binary_symbol(Expr::Kind k) {
  using K = Expr::Kind;
  switch (k) {
    case K::Add:
      return " + ";
    case K::Sub:
      return " - ";
    case K::Mul:
      return " * ";
    case K::Div:
      return " / ";
    case K::Pow:
      return "^";
    default:
      return "?";
  }
}

const char* call_name(Expr::Kind k) {
  using K = Expr::Kind;
  switch (k) {
    case K::Min:
      return "min";
    case K::Max:
      return "max";
    case K::Abs:
      return "abs";
    case K::Mean:
      return "mean";
    case K::Delta:
      return "delta";
    default:
      return "?";
  }
}

void print(const Expr& e, std::string& out) {
  using K = Expr::Kind;
  auto wrapped = [&out](const Expr& child, bool parens) {
    if (parens) out += '(';
    print(child, out);
    if (parens) out += ')';
  };
  switch (e.kind) {
    case K::Number:
      out += format_number(e.value);
      return;
    case K::Symbol:
    case K::Species:
    case K::Param:
      out += e.name;
      return;
    case K::Neg:
      out += '-';
      wrapped(e.args[0], precedence(e.args[0].kind) < precedence(K::Neg));
      return;
    case K::Add:
    case K::Sub:
    case K::Mul:
    case K::Div:
    case K::Pow: {
      const int p = precedence(e.kind);
      const int lp = precedence(e.args[0].kind);
      const int rp = precedence(e.args[1].kind);
      // '^' is right-associative, the others left-associative.
      const bool left_parens = e.kind == K::Pow ? lp <= p : lp < p;
      const bool right_parens = e.kind == K::Pow ? rp < p : rp <= p;
      wrapped(e.args[0], left_parens);
      out += binary_symbol(e.kind);
      wrapped(e.args[1], right_parens);
      return;
    }
    case K::Min:
    case K::Max:
    case K::Abs:
      out += call_name(e.kind);
      out += '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        print(e.args[i], out);
      }
      out += ')';
      return;
    case K::Mean:
    case K::Delta:
      out += call_name(e.kind);
      out += '(' + e.name + ')';
      return;
  }
}

}  // namespace

std::string to_string(const Expr& expr) {
  std::string out;
  print(expr, out);
  return out;
}

namespace detail {
namespace {

Expr parse_sum(TextCursor& cur, bool allow_signals);

Expr parse_primary(TextCursor& cur, bool allow_signals) {
  if (cur.at_number()) return Expr::number(cur.number());
  if (cur.consume('(')) {
    Expr inner = parse_sum(cur, allow_signals);
    cur.expect(')', "')'");
    return inner;
  }
  if (!cur.at_identifier()) cur.fail("expected number, identifier or '('");

  const std::size_t start = cur.position();
  cur.skip_ws();
  const std::size_t ident_pos = cur.position();
  std::string name = cur.identifier();
  if (cur.peek_raw() == '[' || (cur.peek() == '[' && (name == "F" || name == "G" || name == "U"))) {
    cur.fail_at(ident_pos, "temporal operator '" + name + "' inside arithmetic");
  }
  if (cur.peek() != '(') return Expr::symbol(std::move(name));

  using K = Expr::Kind;
  if (name == "mean" || name == "delta") {
    if (!allow_signals) cur.fail_at(ident_pos, name + "() is only allowed in formulas");
    cur.expect('(', "'('");
    std::string species = cur.identifier();
    cur.expect(')', "')'");
    return Expr::signal(name == "mean" ? K::Mean : K::Delta, std::move(species));
  }
  K kind;
  if (name == "min") {
    kind = K::Min;
  } else if (name == "max") {
    kind = K::Max;
  } else if (name == "abs") {
    kind = K::Abs;
  } else {
    cur.reset(start);
    cur.fail("unknown function '" + name + "'");
  }
  cur.expect('(', "'('");
  std::vector<Expr> args;
  args.push_back(parse_sum(cur, allow_signals));
  while (cur.consume(',')) args.push_back(parse_sum(cur, allow_signals));
  cur.expect(')', "')'");
  if (kind == K::Abs && args.size() != 1) cur.fail_at(ident_pos, "abs() takes one argument");
  if (kind != K::Abs && args.size() < 2) cur.fail_at(ident_pos, name + "() takes at least two arguments");
  return Expr::call(kind, std::move(args));
}

Expr parse_unary(TextCursor& cur, bool allow_signals);

Expr parse_power(TextCursor& cur, bool allow_signals) {
  Expr base = parse_primary(cur, allow_signals);
  if (cur.consume('^')) {
    return Expr::binary(Expr::Kind::Pow, std::move(base), parse_unary(cur, allow_signals));
  }
  return base;
}

Expr parse_unary(TextCursor& cur, bool allow_signals) {
  if (cur.consume('-')) return Expr::unary(Expr::Kind::Neg, parse_unary(cur, allow_signals));
  return parse_power(cur, allow_signals);
}

Expr parse_product(TextCursor& cur, bool allow_signals) {
  Expr lhs = parse_unary(cur, allow_signals);
  for (;;) {
    if (cur.consume('*')) {
      lhs = Expr::binary(Expr::Kind::Mul, std::move(lhs), parse_unary(cur, allow_signals));
    } else if (cur.consume('/')) {
      lhs = Expr::binary(Expr::Kind::Div, std::move(lhs), parse_unary(cur, allow_signals));
    } else {
      return lhs;
    }
  }
}

Expr parse_sum(TextCursor& cur, bool allow_signals) {
  Expr lhs = parse_product(cur, allow_signals);
  for (;;) {
    // "->" terminates a reaction side, never a subtraction.
    if (cur.peek() == '-' && cur.rest().substr(0, 2) == "->") return lhs;
    if (cur.consume('+')) {
      lhs = Expr::binary(Expr::Kind::Add, std::move(lhs), parse_product(cur, allow_signals));
    } else if (cur.consume('-')) {
      lhs = Expr::binary(Expr::Kind::Sub, std::move(lhs), parse_product(cur, allow_signals));
    } else {
      return lhs;
    }
  }
}

}  // namespace

Expr parse_arith(TextCursor& cur, bool allow_signals) { return parse_sum(cur, allow_signals); }

}  // namespace detail

Expr parse_expression(std::string_view text, bool allow_signals) {
  detail::TextCursor cur(text);
  if (cur.eof()) cur.fail("empty expression");
  Expr e = detail::parse_arith(cur, allow_signals);
  if (!cur.eof()) cur.fail("unexpected trailing input");
  return e;
}

}  // namespace smoothck
