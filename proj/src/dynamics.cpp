#include "hysim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hysim/errors.hpp"
#include "hysim/timegrid.hpp"

namespace hysim {

namespace {

// Evolving variables live in a flat vector; everything else is looked up in
// the frozen valuation.
class Flow {
 public:
  Flow(const OdeSystem& system, const State& initial) : system_(system) {
    frozen_ = system.frozen;
    for (const auto& [name, value] : initial) frozen_[name] = value;
    y0_.reserve(system.equations.size());
    for (const auto& eq : system.equations) {
      const auto it = frozen_.find(eq.var);
      if (it == frozen_.end()) throw UndefinedVariable(eq.pos, eq.var);
      y0_.push_back(it->second);
    }
  }

  const std::vector<double>& initial() const { return y0_; }

  void derivative(const std::vector<double>& y, std::vector<double>& dy) const {
    const Overlay scope(*this, y);
    dy.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      const auto& eq = system_.equations[i];
      const double v = eval_real(*eq.derivative, scope);
      if (!std::isfinite(v)) {
        throw EvalError(eq.pos, "derivative of '" + eq.var + "' is not finite");
      }
      dy[i] = v;
    }
  }

  std::vector<double> rk4(const std::vector<double>& y, double h) const {
    const std::size_t n = y.size();
    std::vector<double> k1, k2, k3, k4, tmp(n), out(n);
    derivative(y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h / 2 * k1[i];
    derivative(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h / 2 * k2[i];
    derivative(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    derivative(tmp, k4);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = y[i] + h * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]) / 6;
      if (!std::isfinite(out[i])) {
        throw EvalError(system_.equations[i].pos,
                        "'" + system_.equations[i].var + "' diverged to a non-finite value");
      }
    }
    return out;
  }

  State to_state(const std::vector<double>& y) const {
    State s = frozen_;
    for (std::size_t i = 0; i < y.size(); ++i) s[system_.equations[i].var] = y[i];
    return s;
  }

  bool holds(const Expr& condition, const std::vector<double>& y) const {
    return eval_bool(condition, Overlay(*this, y));
  }

 private:
  class Overlay final : public Scope {
   public:
    Overlay(const Flow& flow, const std::vector<double>& y) : flow_(flow), y_(y) {}
    std::optional<double> lookup(std::string_view name) const override {
      const auto& eqs = flow_.system_.equations;
      for (std::size_t i = 0; i < eqs.size(); ++i) {
        if (eqs[i].var == name) return y_[i];
      }
      const auto it = flow_.frozen_.find(name);
      if (it == flow_.frozen_.end()) return std::nullopt;
      return it->second;
    }

   private:
    const Flow& flow_;
    const std::vector<double>& y_;
  };

  const OdeSystem& system_;
  State frozen_;
  std::vector<double> y0_;
};

/// Integration grid between t0 and t_end: steps of `step` restarted at every
/// breakpoint, with the final step into each stop shortened to hit it.
std::vector<double> step_times(double t0, double t_end, double step,
                               std::span<const double> breakpoints) {
  std::vector<double> stops;
  for (double b : breakpoints) {
    if (b > t0 && b < t_end && !same_time(b, t0) && !same_time(b, t_end)) stops.push_back(b);
  }
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  stops.push_back(t_end);

  std::vector<double> times{t0};
  double a = t0;
  for (double b : stops) {
    const double span = b - a;
    const auto n = std::max<long>(1, static_cast<long>(std::ceil(span / step - kTimeTolerance)));
    for (long i = 1; i < n; ++i) times.push_back(a + static_cast<double>(i) * step);
    times.push_back(b);
    a = b;
  }
  return times;
}

void validate_step(double step) {
  if (!(step > 0) || !std::isfinite(step)) throw ConfigError("ODE step must be positive");
}

}  // namespace

Trajectory integrate_for(const OdeSystem& system, const State& initial, double t0,
                         double duration, double step, std::span<const double> breakpoints) {
  validate_step(step);
  if (!(duration >= 0) || !std::isfinite(duration)) {
    throw ConfigError("ODE duration must be finite and non-negative");
  }
  const Flow flow(system, initial);
  Trajectory out;
  std::vector<double> y = flow.initial();
  out.samples.push_back({t0, flow.to_state(y)});
  if (duration == 0) return out;

  const std::vector<double> times = step_times(t0, t0 + duration, step, breakpoints);
  for (std::size_t i = 1; i < times.size(); ++i) {
    y = flow.rk4(y, times[i] - times[i - 1]);
    out.samples.push_back({times[i], flow.to_state(y)});
  }
  return out;
}

UntilResult integrate_until(const OdeSystem& system, const State& initial, double t0,
                            const Expr& stop_condition, double step, double horizon,
                            std::span<const double> breakpoints) {
  validate_step(step);
  const Flow flow(system, initial);
  UntilResult result;
  std::vector<double> y = flow.initial();
  result.segment.samples.push_back({t0, flow.to_state(y)});
  if (flow.holds(stop_condition, y)) {
    result.stopped_by = StopReason::Guard;
    return result;
  }
  if (t0 >= horizon) return result;

  const std::vector<double> times = step_times(t0, horizon, step, breakpoints);
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double h = times[i] - times[i - 1];
    std::vector<double> next = flow.rk4(y, h);
    if (!flow.holds(stop_condition, next)) {
      y = std::move(next);
      result.segment.samples.push_back({times[i], flow.to_state(y)});
      continue;
    }
    // The condition flipped inside (times[i-1], times[i]]: bisect the step.
    double lo = 0.0;
    double hi = h;
    std::vector<double> at_hi = std::move(next);
    while (hi - lo > kCrossingTolerance) {
      const double mid = lo + (hi - lo) / 2;
      std::vector<double> trial = flow.rk4(y, mid);
      if (flow.holds(stop_condition, trial)) {
        hi = mid;
        at_hi = std::move(trial);
      } else {
        lo = mid;
      }
    }
    result.segment.samples.push_back({times[i - 1] + hi, flow.to_state(at_hi)});
    result.stopped_by = StopReason::Guard;
    return result;
  }
  return result;
}

}  // namespace hysim
