#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

#include "hysim/ast.hpp"
#include "hysim/dynamics.hpp"
#include "hysim/eval.hpp"

namespace hysim {

struct SimConfig {
  double max_time = 30.0;     // global horizon
  double sample_every = 0.1;  // output grid period
  double ode_step = kDefaultOdeStep;
  /// Consecutive loop iterations allowed without simulated time advancing.
  std::size_t max_zero_time_iterations = 1'000'000;

  /// Throws ConfigError unless all three periods are positive and finite and
  /// ode_step <= sample_every.
  void validate() const;
};

enum class RunStatus { CompletedHorizon, Halted, Failed };

std::string_view to_string(RunStatus status);

struct RunFailure {
  std::string kind;     // e.g. "EvalError", "UndefinedVariable"
  std::string message;  // without position prefix
  double time = 0.0;    // simulated time of the failure
  SourcePos pos;        // statement/expression that failed
};

struct RunResult {
  /// Samples on the uniform sample_every grid from 0, plus a final sample at
  /// `end_time` when that is not itself a grid point.
  Trajectory trajectory;
  /// Every variable the program can assign, sorted. States in the trajectory
  /// bind a subset of these (a name is absent until first assigned).
  std::vector<std::string> variables;
  RunStatus status = RunStatus::Halted;
  std::optional<RunFailure> failure;
  double end_time = 0.0;
  std::chrono::nanoseconds elapsed{0};

  const State& variant() const { return trajectory.variant; }
};

/// Executes a concrete program (no variant arrays) up to config.max_time.
///
/// Assignments, guards and loop tests take zero time; ODE blocks advance it.
/// A block crossing the horizon is cut at exactly max_time. Grid samples
/// are right-continuous: a grid time that coincides with a run of
/// instantaneous statements records the state after them. Runtime errors
/// never escape: they yield status Failed with the partial trajectory.
/// Throws ConfigError for an invalid config and StructureError if the
/// program still contains variant arrays.
RunResult run(const Program& program, const SimConfig& config, const State& variant = {},
              std::size_t run_index = 0, std::stop_token stop = {});

}  // namespace hysim
