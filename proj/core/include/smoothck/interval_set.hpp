#pragma once

#include <span>
#include <string>
#include <vector>

namespace smoothck {

/// Real interval with explicit endpoint inclusivity. Degenerate [t, t] is a point.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  bool empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }
  bool contains(double t) const {
    return (t > lo || (t == lo && lo_closed)) && (t < hi || (t == hi && hi_closed));
  }

  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
  static Interval point(double t) { return {t, t, true, true}; }

  bool operator==(const Interval&) const = default;
};

/// Finite union of disjoint intervals kept sorted and maximally merged, so
/// each stored interval is a connected component of the set.
class IntervalSet {
 public:
  IntervalSet() = default;

  /// Normalizes arbitrary (possibly overlapping, unsorted, empty) pieces.
  explicit IntervalSet(std::vector<Interval> pieces);

  static IntervalSet from(Interval i) { return IntervalSet(std::vector<Interval>{i}); }

  std::span<const Interval> components() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  bool contains(double t) const;

  /// Complement relative to the closed window [lo, hi].
  IntervalSet complement(double lo, double hi) const;
  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet unite(const IntervalSet& other) const;

  /// {t - s : t in this set, s in [a, b]}: the times from which some offset in
  /// [a, b] lands in the set.
  IntervalSet back_shift(double a, double b) const;

  std::string to_string() const;

  bool operator==(const IntervalSet&) const = default;

 private:
  std::vector<Interval> parts_;
};

}  // namespace smoothck
