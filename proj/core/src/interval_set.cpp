#include "smoothck/interval_set.hpp"

#include <algorithm>

#include "smoothck/expr.hpp"

namespace smoothck {

namespace {

// Orders by lower endpoint; a closed lower endpoint starts before an open one.
bool starts_before(const Interval& a, const Interval& b) {
  if (a.lo != b.lo) return a.lo < b.lo;
  return a.lo_closed && !b.lo_closed;
}

// True if `next` (which does not start before `cur`) overlaps or touches `cur`
// so that their union is connected.
bool joins(const Interval& cur, const Interval& next) {
  if (next.lo < cur.hi) return true;
  if (next.lo == cur.hi) return cur.hi_closed || next.lo_closed;
  return false;
}

}  // namespace

IntervalSet::IntervalSet(std::vector<Interval> pieces) {
  std::erase_if(pieces, [](const Interval& i) { return i.empty(); });
  std::sort(pieces.begin(), pieces.end(), starts_before);
  for (const auto& piece : pieces) {
    if (!parts_.empty() && joins(parts_.back(), piece)) {
      auto& cur = parts_.back();
      if (piece.hi > cur.hi) {
        cur.hi = piece.hi;
        cur.hi_closed = piece.hi_closed;
      } else if (piece.hi == cur.hi) {
        cur.hi_closed = cur.hi_closed || piece.hi_closed;
      }
    } else {
      parts_.push_back(piece);
    }
  }
}

bool IntervalSet::contains(double t) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), t,
                             [](double v, const Interval& i) { return v < i.lo; });
  if (it == parts_.begin()) return false;
  return std::prev(it)->contains(t);
}

IntervalSet IntervalSet::complement(double lo, double hi) const {
  std::vector<Interval> out;
  double cursor = lo;
  bool cursor_closed = true;
  for (const auto& p : parts_) {
    // Gap between the cursor and the start of p.
    out.push_back({cursor, p.lo, cursor_closed, !p.lo_closed});
    cursor = p.hi;
    cursor_closed = !p.hi_closed;
  }
  out.push_back({cursor, hi, cursor_closed, true});
  for (auto& i : out) {
    if (i.lo < lo) {
      i.lo = lo;
      i.lo_closed = true;
    }
    if (i.hi > hi) {
      i.hi = hi;
      i.hi_closed = true;
    }
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<Interval> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < parts_.size() && j < other.parts_.size()) {
    const Interval& a = parts_[i];
    const Interval& b = other.parts_[j];
    Interval c;
    if (a.lo > b.lo || (a.lo == b.lo && !a.lo_closed)) {
      c.lo = a.lo;
      c.lo_closed = a.lo_closed;
    } else {
      c.lo = b.lo;
      c.lo_closed = b.lo_closed;
    }
    if (a.hi < b.hi || (a.hi == b.hi && !a.hi_closed)) {
      c.hi = a.hi;
      c.hi_closed = a.hi_closed;
    } else {
      c.hi = b.hi;
      c.hi_closed = b.hi_closed;
    }
    if (!c.empty()) out.push_back(c);
    // Advance whichever interval ends first.
    const bool a_ends_first = a.hi < b.hi || (a.hi == b.hi && !a.hi_closed && b.hi_closed);
    if (a_ends_first) {
      ++i;
    } else if (b.hi < a.hi || (a.hi == b.hi && a.hi_closed && !b.hi_closed)) {
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Interval> all(parts_.begin(), parts_.end());
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::back_shift(double a, double b) const {
  std::vector<Interval> out;
  out.reserve(parts_.size());
  for (const auto& p : parts_) out.push_back({p.lo - b, p.hi - a, p.lo_closed, p.hi_closed});
  return IntervalSet(std::move(out));
}

std::string IntervalSet::to_string() const {
  if (parts_.empty()) return "{}";
  std::string out;
  for (std::size_t k = 0; k < parts_.size(); ++k) {
    const auto& p = parts_[k];
    if (k) out += " u ";
    out += p.lo_closed ? '[' : '(';
    out += format_number(p.lo) + ", " + format_number(p.hi);
    out += p.hi_closed ? ']' : ')';
  }
  return out;
}

}  // namespace smoothck
