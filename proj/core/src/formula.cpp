#include "smoothck/formula.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "expr_parser.hpp"
#include "smoothck/error.hpp"
#include "text_cursor.hpp"

namespace smoothck {

Formula Formula::truth() { return Formula{}; }

Formula Formula::atomic(Expr lhs, Comparison cmp, Expr rhs) {
  Formula f;
  f.kind = Kind::Atomic;
  f.lhs = std::move(lhs);
  f.cmp = cmp;
  f.rhs = std::move(rhs);
  return f;
}

Formula Formula::negation(Formula inner) {
  Formula f;
  f.kind = Kind::Not;
  f.children.push_back(std::move(inner));
  return f;
}

Formula Formula::conjunction(Formula a, Formula b) {
  Formula f;
  f.kind = Kind::And;
  f.children.push_back(std::move(a));
  f.children.push_back(std::move(b));
  return f;
}

Formula Formula::disjunction(Formula a, Formula b) {
  return negation(conjunction(negation(std::move(a)), negation(std::move(b))));
}

Formula Formula::until(double lo, double hi, Formula left, Formula right) {
  Formula f;
  f.kind = Kind::Until;
  f.lo = lo;
  f.hi = hi;
  f.children.push_back(std::move(left));
  f.children.push_back(std::move(right));
  return f;
}

Formula Formula::eventually(double lo, double hi, Formula inner) {
  Formula f;
  f.kind = Kind::Eventually;
  f.lo = lo;
  f.hi = hi;
  f.children.push_back(std::move(inner));
  return f;
}

Formula Formula::always(double lo, double hi, Formula inner) {
  Formula f;
  f.kind = Kind::Always;
  f.lo = lo;
  f.hi = hi;
  f.children.push_back(std::move(inner));
  return f;
}

namespace {

using detail::TextCursor;

// Grammar, loosest first:
//   or      := and ('|' and)*
//   and     := until ('&' until)*
//   until   := unary ('U' bounds unary)?
//   unary   := '!' unary | 'F' bounds unary | 'G' bounds unary | primary
//   primary := 'tt' | 'ff' | atom | '(' or ')'
class FormulaParser {
 public:
  explicit FormulaParser(TextCursor& cur) : cur_(cur) {}

  Formula parse_or() {
    Formula lhs = parse_and();
    while (cur_.consume('|')) lhs = Formula::disjunction(std::move(lhs), parse_and());
    return lhs;
  }

 private:
  Formula parse_and() {
    Formula lhs = parse_until();
    while (cur_.consume('&')) lhs = Formula::conjunction(std::move(lhs), parse_until());
    return lhs;
  }

  Formula parse_until() {
    Formula lhs = parse_unary();
    if (at_operator('U')) {
      cur_.identifier();
      auto [lo, hi] = parse_bounds();
      return Formula::until(lo, hi, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  Formula parse_unary() {
    if (cur_.consume('!')) return Formula::negation(parse_unary());
    if (at_operator('F')) {
      cur_.identifier();
      auto [lo, hi] = parse_bounds();
      return Formula::eventually(lo, hi, parse_unary());
    }
    if (at_operator('G')) {
      cur_.identifier();
      auto [lo, hi] = parse_bounds();
      return Formula::always(lo, hi, parse_unary());
    }
    return parse_primary();
  }

  Formula parse_primary() {
    if (at_keyword("tt")) {
      cur_.identifier();
      return Formula::truth();
    }
    if (at_keyword("ff")) {
      cur_.identifier();
      return Formula::negation(Formula::truth());
    }
    const std::size_t start = cur_.position();
    // An atom may itself start with '(' as in "(N + 1) < 4"; try it first and
    // fall back to a parenthesized formula.
    std::optional<ParseError> atom_error;
    try {
      return parse_atom();
    } catch (const ParseError& e) {
      atom_error = e;
    }
    cur_.reset(start);
    if (cur_.consume('(')) {
      Formula inner = parse_or();
      cur_.expect(')', "')'");
      return inner;
    }
    throw *atom_error;
  }

  Formula parse_atom() {
    Expr lhs = detail::parse_arith(cur_, true);
    Comparison cmp;
    if (cur_.consume("<=")) {
      cmp = Comparison::LessEqual;
    } else if (cur_.consume(">=")) {
      cmp = Comparison::GreaterEqual;
    } else if (cur_.consume("==")) {
      cmp = Comparison::Equal;
    } else if (cur_.consume('<')) {
      cmp = Comparison::Less;
    } else if (cur_.consume('>')) {
      cmp = Comparison::Greater;
    } else if (cur_.consume('=')) {
      cmp = Comparison::Equal;
    } else {
      cur_.fail("expected comparison operator");
    }
    Expr rhs = detail::parse_arith(cur_, true);
    return Formula::atomic(std::move(lhs), cmp, std::move(rhs));
  }

  std::pair<double, double> parse_bounds() {
    cur_.expect('[', "'[' after temporal operator");
    const std::size_t at = cur_.position();
    if (cur_.peek() == '-') cur_.fail("negative time bound");
    const double lo = cur_.number();
    cur_.expect(',', "','");
    if (cur_.peek() == '-') cur_.fail("negative time bound");
    const double hi = cur_.number();
    cur_.expect(']', "']'");
    if (lo > hi) {
      cur_.fail_at(at, "time bounds out of order: " + format_number(lo) + " > " + format_number(hi));
    }
    return {lo, hi};
  }

  // Single-letter operator name immediately followed (modulo spaces) by '['.
  bool at_operator(char name) {
    if (cur_.peek() != name) return false;
    const std::size_t save = cur_.position();
    cur_.skip_ws();
    const std::string id = cur_.identifier();
    const bool ok = id.size() == 1 && cur_.peek() == '[';
    cur_.reset(save);
    return ok;
  }

  bool at_keyword(std::string_view word) {
    if (!cur_.at_identifier()) return false;
    const std::size_t save = cur_.position();
    const std::string id = cur_.identifier();
    // "tt < 3" would be an atom over a species named tt; keywords stand alone.
    const char next = cur_.peek();
    const bool ok = id == word && next != '<' && next != '>' && next != '=' && next != '+' &&
                    next != '-' && next != '*' && next != '/' && next != '^';
    cur_.reset(save);
    return ok;
  }

  TextCursor& cur_;
};

}  // namespace

Formula parse_formula(std::string_view text) {
  TextCursor cur(text);
  if (cur.eof()) cur.fail("empty formula");
  FormulaParser parser(cur);
  Formula f = parser.parse_or();
  if (!cur.eof()) cur.fail("unexpected trailing input");
  return f;
}

Formula load_formula(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read property file '" + path.string() + "'");
  std::string text;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    text += line.substr(0, hash);
    text += ' ';
  }
  return parse_formula(text);
}

double horizon(const Formula& f) {
  double child = 0.0;
  for (const auto& c : f.children) child = std::max(child, horizon(c));
  switch (f.kind) {
    case Formula::Kind::Until:
    case Formula::Kind::Eventually:
    case Formula::Kind::Always:
      return f.hi + child;
    default:
      return child;
  }
}

Formula bind_formula(const Formula& f, const Model& model) {
  Formula out = f;
  if (out.kind == Formula::Kind::Atomic) {
    out.lhs = resolve_symbols(f.lhs, model);
    out.rhs = resolve_symbols(f.rhs, model);
  }
  for (auto& c : out.children) c = bind_formula(c, model);
  return out;
}

namespace {

void gather_mean(const Formula& f, std::vector<int>& out) {
  if (f.kind == Formula::Kind::Atomic) {
    collect_signal_species(f.lhs, Expr::Kind::Mean, out);
    collect_signal_species(f.rhs, Expr::Kind::Mean, out);
  }
  for (const auto& c : f.children) gather_mean(c, out);
}

const char* comparison_symbol(Comparison c) {
  switch (c) {
    case Comparison::Less:
      return " < ";
    case Comparison::LessEqual:
      return " <= ";
    case Comparison::Greater:
      return " > ";
    case Comparison::GreaterEqual:
      return " >= ";
    case Comparison::Equal:
      return " = ";
  }
  return " ? ";
}

std::string bounds(const Formula& f) {
  return "[" + format_number(f.lo) + "," + format_number(f.hi) + "]";
}

}  // namespace

std::vector<int> mean_species(const Formula& f) {
  std::vector<int> out;
  gather_mean(f, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string to_string(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::True:
      return "tt";
    case Formula::Kind::Atomic:
      return "(" + to_string(f.lhs) + comparison_symbol(f.cmp) + to_string(f.rhs) + ")";
    case Formula::Kind::Not:
      return "!" + to_string(f.children[0]);
    case Formula::Kind::And:
      return "(" + to_string(f.children[0]) + " & " + to_string(f.children[1]) + ")";
    case Formula::Kind::Until:
      return "(" + to_string(f.children[0]) + " U" + bounds(f) + " " + to_string(f.children[1]) + ")";
    case Formula::Kind::Eventually:
      return "F" + bounds(f) + " " + to_string(f.children[0]);
    case Formula::Kind::Always:
      return "G" + bounds(f) + " " + to_string(f.children[0]);
  }
  return "?";
}

}  // namespace smoothck
