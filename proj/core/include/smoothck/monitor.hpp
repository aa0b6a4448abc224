#pragma once

#include "smoothck/formula.hpp"
#include "smoothck/interval_set.hpp"
#include "smoothck/ssa.hpp"

namespace smoothck {

/// Exact set of times t in [0, tr.horizon - horizon(f)] at which `tr` satisfies `f`.
///
/// Atoms are evaluated on the right-continuous path (delta() is nonzero only at
/// jump instants); temporal operators are computed on interval sets. When an
/// atom uses mean(X), crossings inside a linear piece of the mean signal are
/// located by subdivision and bisection.
///
/// Throws MonitorError if the formula is unbound, the trajectory is shorter
/// than horizon(f), or a needed mean signal is missing.
IntervalSet sat_intervals(const Formula& f, const Trajectory& tr, const MeanSignal* mean = nullptr);

/// True iff 0 is in sat_intervals(f, tr, mean).
bool monitor(const Formula& f, const Trajectory& tr, const MeanSignal* mean = nullptr);

/// Truth set of one atomic formula over [0, tr.horizon] (exposed for testing).
IntervalSet atom_intervals(const Formula& atom, const Trajectory& tr, const MeanSignal* mean);

/// Truth of an atom at one instant, using the same conventions as the monitor.
bool atom_holds_at(const Formula& atom, const Trajectory& tr, const MeanSignal* mean, double t);

}  // namespace smoothck
