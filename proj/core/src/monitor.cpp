#include "smoothck/monitor.hpp"

#include <algorithm>
#include <cmath>

#include "smoothck/error.hpp"

namespace smoothck {

namespace {

bool compare(double lhs, Comparison cmp, double rhs) {
  switch (cmp) {
    case Comparison::Less:
      return lhs < rhs;
    case Comparison::LessEqual:
      return lhs <= rhs;
    case Comparison::Greater:
      return lhs > rhs;
    case Comparison::GreaterEqual:
      return lhs >= rhs;
    case Comparison::Equal:
      return lhs == rhs;
  }
  return false;
}

// Evaluates atoms at arbitrary instants, reusing scratch buffers.
class AtomProbe {
 public:
  AtomProbe(const Formula& atom, const Trajectory& tr, const MeanSignal* mean)
      : atom_(atom), tr_(tr), mean_(mean), delta_(tr.species_count, 0) {
    if (mean_ != nullptr) mean_values_.assign(tr.species_count, 0.0);
  }

  // Truth exactly at t: state in force at t, jump of that instant in delta().
  bool at(double t) {
    const std::size_t row = tr_.row_at(t);
    const bool jump_here = row > 0 && tr_.times[row - 1] == t;
    if (jump_here) {
      const auto now = tr_.state(row);
      const auto before = tr_.state(row - 1);
      for (std::size_t s = 0; s < delta_.size(); ++s) delta_[s] = now[s] - before[s];
    }
    return eval(row, t, jump_here);
  }

  // Truth at a time strictly between jumps (no delta), state row given.
  bool between(std::size_t row, double t) { return eval(row, t, false); }

 private:
  bool eval(std::size_t row, double t, bool with_delta) {
    EvalEnv env{tr_.state(row), tr_.params};
    if (with_delta) env.delta = delta_;
    if (mean_ != nullptr) {
      mean_->values_at(t, mean_values_);
      env.mean = mean_values_;
    }
    return compare(evaluate(atom_.lhs, env), atom_.cmp, evaluate(atom_.rhs, env));
  }

  const Formula& atom_;
  const Trajectory& tr_;
  const MeanSignal* mean_;
  std::vector<std::int64_t> delta_;
  std::vector<double> mean_values_;
};

void require_bound(const Expr& e) {
  if (e.kind == Expr::Kind::Symbol ||
      ((e.kind == Expr::Kind::Mean || e.kind == Expr::Kind::Delta) && e.index < 0)) {
    throw MonitorError("formula references unbound identifier '" + e.name + "'");
  }
  for (const auto& a : e.args) require_bound(a);
}

void check_formula(const Formula& f, const MeanSignal* mean) {
  if (f.kind == Formula::Kind::Atomic) {
    require_bound(f.lhs);
    require_bound(f.rhs);
    std::vector<int> needed;
    collect_signal_species(f.lhs, Expr::Kind::Mean, needed);
    collect_signal_species(f.rhs, Expr::Kind::Mean, needed);
    for (int s : needed) {
      if (mean == nullptr || !mean->tracks(s)) {
        throw MonitorError("formula uses mean() of species #" + std::to_string(s) +
                           " but no mean signal for it was provided");
      }
    }
  }
  for (const auto& c : f.children) check_formula(c, mean);
}

IntervalSet window(double lo, double hi) { return IntervalSet::from(Interval::closed(lo, hi)); }

// {t : exists t1 in [t+a, t+b] with t1 in right and [t, t1] inside left}.
IntervalSet until_set(const IntervalSet& left, const IntervalSet& right, double a, double b) {
  const auto comps = left.components();
  const IntervalSet both = left.intersect(right);
  std::vector<Interval> out;
  std::size_t c = 0;
  for (const auto& j : both.components()) {
    // Each piece of the intersection lies in exactly one component of `left`.
    while (comps[c].hi < j.lo || (comps[c].hi == j.lo && !(comps[c].hi_closed && j.lo_closed))) {
      ++c;
    }
    const Interval& comp = comps[c];
    const Interval shifted{j.lo - b, j.hi - a, j.lo_closed, j.hi_closed};
    const IntervalSet piece = IntervalSet::from(shifted).intersect(IntervalSet::from(comp));
    out.insert(out.end(), piece.components().begin(), piece.components().end());
  }
  return IntervalSet(std::move(out));
}

// {t : [t+a, t+b] inside set}.
IntervalSet always_set(const IntervalSet& set, double a, double b) {
  std::vector<Interval> out;
  for (const auto& comp : set.components()) {
    out.push_back({comp.lo - a, comp.hi - b, comp.lo_closed, comp.hi_closed});
  }
  return IntervalSet(std::move(out));
}

IntervalSet eval_set(const Formula& f, const Trajectory& tr, const MeanSignal* mean) {
  const double T = tr.horizon;
  switch (f.kind) {
    case Formula::Kind::True:
      return window(0.0, T);
    case Formula::Kind::Atomic:
      return atom_intervals(f, tr, mean);
    case Formula::Kind::Not:
      return eval_set(f.children[0], tr, mean).complement(0.0, T);
    case Formula::Kind::And:
      return eval_set(f.children[0], tr, mean).intersect(eval_set(f.children[1], tr, mean));
    case Formula::Kind::Until:
      return until_set(eval_set(f.children[0], tr, mean), eval_set(f.children[1], tr, mean), f.lo,
                       f.hi)
          .intersect(window(0.0, T));
    case Formula::Kind::Eventually:
      return eval_set(f.children[0], tr, mean).back_shift(f.lo, f.hi).intersect(window(0.0, T));
    case Formula::Kind::Always:
      return always_set(eval_set(f.children[0], tr, mean), f.lo, f.hi).intersect(window(0.0, T));
  }
  return {};
}

}  // namespace

bool atom_holds_at(const Formula& atom, const Trajectory& tr, const MeanSignal* mean, double t) {
  AtomProbe probe(atom, tr, mean);
  return probe.at(t);
}

IntervalSet atom_intervals(const Formula& atom, const Trajectory& tr, const MeanSignal* mean) {
  const double T = tr.horizon;
  const bool uses_mean = contains_kind(atom.lhs, Expr::Kind::Mean) ||
                         contains_kind(atom.rhs, Expr::Kind::Mean);
  AtomProbe probe(atom, tr, uses_mean ? mean : nullptr);

  std::vector<double> cuts;
  cuts.reserve(tr.times.size() + 2);
  cuts.push_back(0.0);
  for (double t : tr.times) {
    if (t > 0.0 && t <= T) cuts.push_back(t);
  }
  if (uses_mean && mean != nullptr) {
    for (double g : mean->grid) {
      if (g > 0.0 && g < T) cuts.push_back(g);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  }
  if (cuts.back() < T) cuts.push_back(T);

  std::vector<Interval> pieces;
  auto add_gap = [&pieces](double lo, double hi) { pieces.push_back({lo, hi, false, false}); };

  for (std::size_t k = 0; k < cuts.size(); ++k) {
    if (probe.at(cuts[k])) pieces.push_back(Interval::point(cuts[k]));
    if (k + 1 == cuts.size()) break;

    const double lo = cuts[k];
    const double hi = cuts[k + 1];
    const std::size_t row = tr.row_at(lo);
    if (!uses_mean) {
      if (probe.between(row, 0.5 * (lo + hi))) add_gap(lo, hi);
      continue;
    }

    // The mean is linear on (lo, hi); sample, then bisect each truth change.
    constexpr int kSamples = 16;
    std::vector<double> at(kSamples);
    std::vector<bool> truth(kSamples);
    for (int i = 0; i < kSamples; ++i) {
      at[i] = lo + (hi - lo) * (i + 1) / (kSamples + 1);
      truth[i] = probe.between(row, at[i]);
    }
    double piece_start = lo;
    for (int i = 0; i + 1 < kSamples; ++i) {
      if (truth[i] == truth[i + 1]) continue;
      double a = at[i];
      double b = at[i + 1];
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        (probe.between(row, m) == truth[i] ? a : b) = m;
      }
      // Crossing at b: [piece_start, b) carries truth[i]; b itself is probed.
      if (truth[i]) add_gap(piece_start, b);
      if (probe.between(row, b)) pieces.push_back(Interval::point(b));
      piece_start = b;
    }
    if (truth[kSamples - 1]) add_gap(piece_start, hi);
  }
  return IntervalSet(std::move(pieces));
}

IntervalSet sat_intervals(const Formula& f, const Trajectory& tr, const MeanSignal* mean) {
  const double h = horizon(f);
  if (tr.horizon < h) {
    throw MonitorError("trajectory horizon " + format_number(tr.horizon) +
                       " is shorter than the formula horizon " + format_number(h));
  }
  check_formula(f, mean);
  return eval_set(f, tr, mean).intersect(window(0.0, tr.horizon - h));
}

bool monitor(const Formula& f, const Trajectory& tr, const MeanSignal* mean) {
  return sat_intervals(f, tr, mean).contains(0.0);
}

}  // namespace smoothck
