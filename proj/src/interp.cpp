#include "hysim/interp.hpp"

#include <cmath>

#include "hysim/errors.hpp"
#include "hysim/timegrid.hpp"

namespace hysim {

void SimConfig::validate() const {
  const auto positive = [](double v) { return v > 0 && std::isfinite(v); };
  if (!positive(max_time)) throw ConfigError("maxTime must be positive");
  if (!positive(sample_every)) throw ConfigError("sampleEvery must be positive");
  if (!positive(ode_step)) throw ConfigError("odeStep must be positive");
  if (ode_step > sample_every) throw ConfigError("odeStep must not exceed sampleEvery");
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::CompletedHorizon: return "completed";
    case RunStatus::Halted: return "halted";
    case RunStatus::Failed: return "failed";
  }
  return "?";
}

namespace {

class Cancelled : public SourceError {
 public:
  Cancelled() : SourceError("Cancelled", {}, "run cancelled") {}
};

class Machine {
 public:
  Machine(const SimConfig& config, std::stop_token stop, Trajectory& out)
      : config_(config), stop_(std::move(stop)), out_(out) {
    const std::size_t n = grid_size(config.max_time, config.sample_every);
    grid_.reserve(n);
    for (std::size_t k = 0; k < n; ++k) grid_.push_back(grid_time(k, config.sample_every));
  }

  double now() const { return t_; }
  const State& env() const { return env_; }
  bool at_horizon() const { return horizon_reached_; }

  void exec(const Stmt& s) {
    if (horizon_reached_) return;
    if (stop_.stop_requested()) throw Cancelled();
    current_pos_ = s.pos;
    if (const auto* a = std::get_if<Stmt::Assign>(&s.node)) {
      env_[a->var] = eval_real(*a->rhs, env_);
    } else if (std::holds_alternative<Stmt::AssignVariants>(s.node)) {
      throw StructureError(s.pos, "variant arrays must be expanded before running");
    } else if (const auto* seq = std::get_if<Stmt::Seq>(&s.node)) {
      for (const auto& c : seq->body) {
        exec(*c);
        if (horizon_reached_) return;
      }
    } else if (const auto* i = std::get_if<Stmt::If>(&s.node)) {
      exec(eval_bool(*i->guard, env_) ? *i->then_branch : *i->else_branch);
    } else if (const auto* w = std::get_if<Stmt::While>(&s.node)) {
      while (!horizon_reached_ && eval_bool(*w->guard, env_)) {
        const double before = t_;
        exec(*w->body);
        if (t_ > before) {
          zero_time_iterations_ = 0;
        } else if (++zero_time_iterations_ > config_.max_zero_time_iterations) {
          throw ZeroTimeProgress(s.pos, "loop made " +
                                            std::to_string(config_.max_zero_time_iterations) +
                                            " iterations without advancing time");
        }
        if (stop_.stop_requested()) throw Cancelled();
      }
    } else {
      evolve(std::get<Stmt::Ode>(s.node), s.pos);
    }
  }

  /// Records grid samples up to and including `t_` with the current state.
  void flush() {
    while (next_grid_ < grid_.size() &&
           (grid_[next_grid_] < t_ || same_time(grid_[next_grid_], t_))) {
      out_.samples.push_back({grid_[next_grid_], env_});
      ++next_grid_;
    }
  }

  /// Appends the terminal state when the run ends off-grid.
  void finish() {
    flush();
    if (out_.samples.empty() || !same_time(out_.samples.back().t, t_)) {
      out_.samples.push_back({t_, env_});
    }
  }

  const SourcePos& current_pos() const { return current_pos_; }

 private:
  void evolve(const Stmt::Ode& ode, const SourcePos& pos) {
    flush();
    OdeSystem system{ode.equations, {}};
    const double horizon = config_.max_time;
    std::vector<double> breakpoints;
    for (std::size_t k = next_grid_; k < grid_.size(); ++k) breakpoints.push_back(grid_[k]);

    Trajectory segment;
    if (const auto* f = std::get_if<Stmt::Ode::For>(&ode.bound)) {
      const double duration = eval_real(*f->duration, env_);
      if (duration < 0) {
        throw EvalError(f->duration->pos,
                        "'for' duration must be non-negative, got " + std::to_string(duration));
      }
      double end = t_ + duration;
      if (end > horizon || same_time(end, horizon)) end = horizon;
      segment = integrate_for(system, env_, t_, std::max(0.0, end - t_), config_.ode_step,
                              breakpoints);
      // Pin the end time so loop boundaries stay exact.
      segment.samples.back().t = std::max(end, t_);
    } else {
      const auto& until = std::get<Stmt::Ode::Until>(ode.bound);
      segment = integrate_until(system, env_, t_, *until.condition, config_.ode_step, horizon,
                                breakpoints)
                    .segment;
    }
    (void)pos;
    // Interior integration points that land on the output grid.
    const Sample& last = segment.samples.back();
    for (std::size_t i = 1; i + 1 < segment.samples.size(); ++i) {
      const Sample& smp = segment.samples[i];
      if (next_grid_ < grid_.size() && smp.t == grid_[next_grid_]) {
        out_.samples.push_back({grid_[next_grid_], smp.state});
        ++next_grid_;
      }
    }
    t_ = last.t;
    env_ = last.state;
    if (t_ >= horizon || same_time(t_, horizon)) {
      t_ = horizon;
      horizon_reached_ = true;
    }
  }

  const SimConfig& config_;
  std::stop_token stop_;
  Trajectory& out_;
  std::vector<double> grid_;
  std::size_t next_grid_ = 0;
  State env_;
  double t_ = 0.0;
  bool horizon_reached_ = false;
  std::size_t zero_time_iterations_ = 0;
  SourcePos current_pos_;
};

}  // namespace

RunResult run(const Program& program, const SimConfig& config, const State& variant,
              std::size_t run_index, std::stop_token stop) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  RunResult result;
  result.trajectory.variant = variant;
  result.trajectory.run_index = run_index;
  result.variables = assigned_variables(program);

  Machine machine(config, std::move(stop), result.trajectory);
  try {
    machine.exec(*program.body);
    machine.finish();
    result.status = machine.at_horizon() ? RunStatus::CompletedHorizon : RunStatus::Halted;
  } catch (const StructureError&) {
    throw;
  } catch (const SourceError& e) {
    machine.flush();
    result.status = RunStatus::Failed;
    result.failure = RunFailure{e.kind(), e.detail(), machine.now(),
                                e.pos().known() ? e.pos() : machine.current_pos()};
  } catch (const ConfigError& e) {
    machine.flush();
    result.status = RunStatus::Failed;
    result.failure = RunFailure{"ConfigError", e.what(), machine.now(), machine.current_pos()};
  }
  result.end_time = machine.now();
  result.elapsed = std::chrono::steady_clock::now() - started;
  return result;
}

}  // namespace hysim
