#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smoothck/expr.hpp"

namespace smoothck {

struct Parameter {
  std::string name;
  double value = 0.0;

  bool operator==(const Parameter&) const = default;
};

/// One reaction channel: consumed and produced stoichiometry plus a rate law.
struct Reaction {
  std::vector<std::int64_t> consumed;
  std::vector<std::int64_t> produced;
  Expr rate;

  /// produced - consumed.
  std::vector<std::int64_t> net_change() const;

  bool operator==(const Reaction&) const = default;
};

/// Population CTMC family: species counts evolve through reactions whose
/// rates depend on the state and on a parameter vector.
struct Model {
  std::vector<std::string> species;
  std::vector<Parameter> parameters;
  std::vector<Reaction> reactions;
  std::vector<std::int64_t> initial_state;

  std::optional<std::size_t> species_index(std::string_view name) const;
  std::optional<std::size_t> parameter_index(std::string_view name) const;
  std::vector<double> default_parameters() const;

  bool operator==(const Model&) const = default;
};

/// Parses the line-oriented model format:
///
///     species S=99 I=1 R=0
///     param k_i=0.12 k_r=0.05
///     reaction S + I -> I + I @ k_i*S*I
///
/// Throws ParseError on malformed input and ValidationError if the result
/// breaks a Model invariant.
Model parse_model(std::string_view text);

/// Reads and parses a model file. Throws IoError if the file is unreadable.
Model load_model(const std::filesystem::path& path);

/// Checks every Model invariant and throws one ValidationError listing all violations.
void validate_model(const Model& model);

/// Replaces Symbol nodes by Species/Param references (and binds mean()/delta()).
/// Throws ValidationError naming the first undeclared identifier.
Expr resolve_symbols(const Expr& expr, const Model& model);

/// Evaluates a rate law. Throws EvalError if the value is negative, NaN or infinite.
double eval_rate(const Expr& rate, std::span<const std::int64_t> state,
                 std::span<const double> params);

/// Canonical text for `model`; parse_model(format_model(m)) == m.
std::string format_model(const Model& model);

}  // namespace smoothck
