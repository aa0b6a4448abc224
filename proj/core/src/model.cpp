#include "smoothck/model.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "expr_parser.hpp"
#include "smoothck/error.hpp"
#include "text_cursor.hpp"

namespace smoothck {

std::vector<std::int64_t> Reaction::net_change() const {
  std::vector<std::int64_t> v(produced.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = produced[i] - consumed[i];
  return v;
}

std::optional<std::size_t> Model::species_index(std::string_view name) const {
  for (std::size_t i = 0; i < species.size(); ++i) {
    if (species[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Model::parameter_index(std::string_view name) const {
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    if (parameters[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<double> Model::default_parameters() const {
  std::vector<double> out;
  out.reserve(parameters.size());
  for (const auto& p : parameters) out.push_back(p.value);
  return out;
}

namespace {

// Returns the first unresolvable identifier, or empty on success.
std::string resolve_in_place(Expr& e, const Model& m) {
  using K = Expr::Kind;
  if (e.kind == K::Symbol) {
    if (auto s = m.species_index(e.name)) {
      e.kind = K::Species;
      e.index = static_cast<int>(*s);
    } else if (auto p = m.parameter_index(e.name)) {
      e.kind = K::Param;
      e.index = static_cast<int>(*p);
    } else {
      return e.name;
    }
  } else if (e.kind == K::Mean || e.kind == K::Delta) {
    auto s = m.species_index(e.name);
    if (!s) return e.name;
    e.index = static_cast<int>(*s);
  }
  for (auto& a : e.args) {
    if (auto bad = resolve_in_place(a, m); !bad.empty()) return bad;
  }
  return {};
}

bool references_are_valid(const Expr& e, const Model& m) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Symbol:
    case K::Mean:
    case K::Delta:
      return false;  // rate laws must be resolved and signal-free
    case K::Species:
      if (e.index < 0 || static_cast<std::size_t>(e.index) >= m.species.size()) return false;
      break;
    case K::Param:
      if (e.index < 0 || static_cast<std::size_t>(e.index) >= m.parameters.size()) return false;
      break;
    default:
      break;
  }
  for (const auto& a : e.args) {
    if (!references_are_valid(a, m)) return false;
  }
  return true;
}

std::string strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return std::string(line.substr(0, hash));
}

// Parses one side of a reaction into a stoichiometry vector.
std::vector<std::int64_t> parse_side(detail::TextCursor& cur, const Model& m, bool is_lhs) {
  std::vector<std::int64_t> counts(m.species.size(), 0);
  auto side_ends = [&] {
    if (cur.eof()) return true;
    if (is_lhs) return cur.rest().substr(0, 2) == "->";
    return cur.peek() == '@';
  };
  if (side_ends()) return counts;
  if (cur.consume("\xE2\x88\x85")) return counts;  // U+2205 empty set

  for (;;) {
    if (cur.peek() == '-') cur.fail("negative stoichiometry");
    std::int64_t coefficient = 1;
    if (cur.at_number()) {
      const std::size_t at = cur.position();
      const double c = cur.number();
      if (c != std::floor(c)) cur.fail_at(at, "non-integer stoichiometry " + format_number(c));
      if (c == 0.0 && !cur.at_identifier()) {
        if (!side_ends()) cur.fail("unexpected input after empty side '0'");
        return counts;
      }
      if (c < 1.0) cur.fail_at(at, "stoichiometry must be a positive integer");
      coefficient = static_cast<std::int64_t>(c);
      cur.consume('*');
    }
    const std::size_t at = cur.position();
    const std::string name = cur.identifier();
    const auto idx = m.species_index(name);
    if (!idx) {
      cur.reset(at);
      cur.skip_ws();
      cur.fail("undeclared species '" + name + "'");
    }
    counts[*idx] += coefficient;
    if (side_ends()) return counts;
    if (!cur.consume('+')) cur.fail(is_lhs ? "expected '+' or '->'" : "expected '+' or '@'");
  }
}

}  // namespace

Model parse_model(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::string current;
    for (char c : text) {
      if (c == '\n') {
        lines.push_back(current);
        current.clear();
      } else if (c != '\r') {
        current += c;
      }
    }
    lines.push_back(current);
  }

  Model m;
  std::set<std::string> names;
  struct PendingReaction {
    int line;
    std::string body;
    std::size_t offset;
  };
  std::vector<PendingReaction> pending;

  // Pass 1: declarations. Reactions are deferred so declaration order is free.
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string body = strip_comment(lines[ln]);
    detail::TextCursor cur(body, static_cast<int>(ln) + 1);
    if (cur.eof()) continue;
    const std::size_t keyword_at = cur.position();
    if (!cur.at_identifier()) cur.fail("expected 'species', 'param' or 'reaction'");
    const std::string keyword = cur.identifier();

    if (keyword == "species") {
      if (cur.eof()) cur.fail("expected species declarations");
      while (!cur.eof()) {
        cur.skip_ws();
        const std::size_t at = cur.position();
        const std::string name = cur.identifier();
        if (!names.insert(name).second) cur.fail_at(at, "duplicate name '" + name + "'");
        if (!cur.consume('=')) cur.fail_at(at, "missing initial state for species '" + name + "'");
        if (cur.peek() == '-') cur.fail("negative initial count for species '" + name + "'");
        const std::size_t value_at = cur.position();
        const double v = cur.number();
        if (v != std::floor(v)) {
          cur.fail_at(value_at, "initial count of '" + name + "' must be an integer");
        }
        m.species.push_back(name);
        m.initial_state.push_back(static_cast<std::int64_t>(v));
      }
    } else if (keyword == "param") {
      if (cur.eof()) cur.fail("expected parameter declarations");
      while (!cur.eof()) {
        cur.skip_ws();
        const std::size_t at = cur.position();
        const std::string name = cur.identifier();
        if (!names.insert(name).second) cur.fail_at(at, "duplicate name '" + name + "'");
        cur.expect('=', "'=' after parameter '" + name + "'");
        const bool negative = cur.consume('-');
        const double v = cur.number();
        m.parameters.push_back({name, negative ? -v : v});
      }
    } else if (keyword == "reaction") {
      pending.push_back({static_cast<int>(ln) + 1, body, cur.position()});
    } else {
      cur.fail_at(keyword_at, "unknown keyword '" + keyword + "'");
    }
  }

  if (m.species.empty()) throw ParseError("model declares no species", 1, 1);

  // Pass 2: reactions.
  for (const auto& pr : pending) {
    detail::TextCursor cur(pr.body, pr.line);
    cur.reset(pr.offset);
    Reaction r;
    r.consumed = parse_side(cur, m, true);
    if (!cur.consume("->")) cur.fail("expected '->'");
    r.produced = parse_side(cur, m, false);
    if (!cur.consume('@')) cur.fail("expected '@' followed by a rate expression");
    if (cur.eof()) cur.fail("missing rate expression");
    const std::size_t rate_at = cur.position();
    Expr rate = detail::parse_arith(cur, false);
    if (!cur.eof()) cur.fail("unexpected trailing input");
    if (auto bad = resolve_in_place(rate, m); !bad.empty()) {
      const auto where = pr.body.find(bad, rate_at);
      cur.fail_at(where == std::string::npos ? rate_at : where, "undeclared identifier '" + bad + "'");
    }
    r.rate = std::move(rate);
    m.reactions.push_back(std::move(r));
  }

  validate_model(m);
  return m;
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read model file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

void validate_model(const Model& m) {
  std::vector<std::string> violations;
  const std::size_t n = m.species.size();

  std::set<std::string> seen;
  for (const auto& s : m.species) {
    if (!seen.insert(s).second) violations.push_back("duplicate species name '" + s + "'");
  }
  std::set<std::string> seen_params;
  for (const auto& p : m.parameters) {
    if (!seen_params.insert(p.name).second) {
      violations.push_back("duplicate parameter name '" + p.name + "'");
    } else if (seen.count(p.name)) {
      violations.push_back("name '" + p.name + "' is both a species and a parameter");
    }
  }

  if (m.initial_state.size() != n) {
    violations.push_back("initial state has " + std::to_string(m.initial_state.size()) +
                         " entries, expected " + std::to_string(n));
  }
  for (std::size_t i = 0; i < m.initial_state.size(); ++i) {
    if (m.initial_state[i] < 0) {
      const std::string who = i < n ? m.species[i] : "#" + std::to_string(i);
      violations.push_back("initial count of '" + who + "' is negative");
    }
  }

  for (std::size_t r = 0; r < m.reactions.size(); ++r) {
    const auto& rx = m.reactions[r];
    const std::string tag = "reaction " + std::to_string(r + 1);
    if (rx.consumed.size() != n) {
      violations.push_back(tag + ": consumed vector has " + std::to_string(rx.consumed.size()) +
                           " entries, expected " + std::to_string(n));
    }
    if (rx.produced.size() != n) {
      violations.push_back(tag + ": produced vector has " + std::to_string(rx.produced.size()) +
                           " entries, expected " + std::to_string(n));
    }
    for (auto c : rx.consumed) {
      if (c < 0) {
        violations.push_back(tag + ": negative consumed stoichiometry");
        break;
      }
    }
    for (auto c : rx.produced) {
      if (c < 0) {
        violations.push_back(tag + ": negative produced stoichiometry");
        break;
      }
    }
    if (!references_are_valid(rx.rate, m)) {
      violations.push_back(tag + ": rate '" + to_string(rx.rate) +
                           "' references an undeclared or unresolved identifier");
    }
  }

  if (!violations.empty()) throw ValidationError(std::move(violations));
}

Expr resolve_symbols(const Expr& expr, const Model& model) {
  Expr out = expr;
  if (auto bad = resolve_in_place(out, model); !bad.empty()) {
    throw ValidationError({"undeclared identifier '" + bad + "'"});
  }
  return out;
}

double eval_rate(const Expr& rate, std::span<const std::int64_t> state,
                 std::span<const double> params) {
  const double v = evaluate(rate, EvalEnv{state, params});
  if (!std::isfinite(v)) {
    throw EvalError("rate '" + to_string(rate) + "' is not finite (" + format_number(v) + ")");
  }
  if (v < 0.0) {
    throw EvalError("rate '" + to_string(rate) + "' is negative (" + format_number(v) + ")");
  }
  return v;
}

namespace {

std::string format_side(const std::vector<std::int64_t>& counts, const Model& m) {
  std::string out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    if (!out.empty()) out += " + ";
    if (counts[i] != 1) out += std::to_string(counts[i]) + " ";
    out += m.species[i];
  }
  return out.empty() ? "0" : out;
}

}  // namespace

std::string format_model(const Model& m) {
  std::string out = "species";
  for (std::size_t i = 0; i < m.species.size(); ++i) {
    out += " " + m.species[i] + "=" + std::to_string(m.initial_state[i]);
  }
  out += "\n";
  if (!m.parameters.empty()) {
    out += "param";
    for (const auto& p : m.parameters) out += " " + p.name + "=" + format_number(p.value);
    out += "\n";
  }
  for (const auto& r : m.reactions) {
    out += "reaction " + format_side(r.consumed, m) + " -> " + format_side(r.produced, m) +
           " @ " + to_string(r.rate) + "\n";
  }
  return out;
}

}  // namespace smoothck
