#pragma once

#include <span>
#include <vector>

#include "hysim/ast.hpp"
#include "hysim/eval.hpp"

namespace hysim {

/// Right-hand side of an ODE block. Variables without an equation are read
/// from `frozen` and stay constant while the block evolves.
struct OdeSystem {
  std::vector<OdeEquation> equations;
  State frozen;
};

struct Sample {
  double t = 0.0;
  State state;
};

struct Trajectory {
  std::vector<Sample> samples;  // strictly increasing t
  State variant;
  std::size_t run_index = 0;
};

inline constexpr double kDefaultOdeStep = 0.01;
/// Width below which a guard crossing is considered localized.
inline constexpr double kCrossingTolerance = 1e-9;

/// Fixed-step classical RK4 from t0 for `duration` time units.
///
/// `initial` supplies the values of the evolving variables (and may contain
/// any other variables, which take precedence over `system.frozen`). Steps
/// start afresh at every breakpoint in (t0, t0 + duration) so those times are
/// integration points, and the last step before each breakpoint or the end
/// is shortened to land on it exactly. The returned samples are all
/// integration points including t0; each holds the full valuation.
///
/// Throws EvalError when a derivative is not finite and UndefinedVariable
/// when an equation reads an unbound name.
Trajectory integrate_for(const OdeSystem& system, const State& initial, double t0,
                         double duration, double step,
                         std::span<const double> breakpoints = {});

enum class StopReason { Guard, Horizon };

struct UntilResult {
  Trajectory segment;
  StopReason stopped_by = StopReason::Horizon;
};

/// Evolves until `stop_condition` becomes true or absolute time `horizon` is
/// reached. The condition is checked at every integration point; once it
/// holds, the bracketing step is bisected (re-integrating from its start with
/// a shorter step) until the crossing is localized within kCrossingTolerance
/// and the segment ends at the first bracketed time where the condition
/// holds. A condition that already holds at t0 gives a single-sample segment.
///
/// Sign changes strictly inside one step are not detected.
UntilResult integrate_until(const OdeSystem& system, const State& initial, double t0,
                            const Expr& stop_condition, double step, double horizon,
                            std::span<const double> breakpoints = {});

}  // namespace hysim
