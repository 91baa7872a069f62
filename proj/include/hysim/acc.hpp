#pragma once

#include <span>
#include <string>

namespace hysim::acc {

/// Controller constants: forward acceleration, braking acceleration and the
/// sample time between decisions (also the prediction horizon of phase 1).
struct AccParams {
  double fwd = 3.0;
  double bwd = -3.0;
  double st = 2.0;

  /// Throws ConfigError unless fwd > 0, bwd < 0 and st > 0.
  void validate() const;
};

struct AccState {
  double pf = 0.0;  // follower position
  double vf = 0.0;  // follower velocity
  double pl = 0.0;  // leader position
  double vl = 0.0;  // leader velocity
  double al = 0.0;  // leader acceleration
  double af = 0.0;  // follower acceleration, written by the controller
};

/// Positions of both vehicles and the follower's velocity after accelerating
/// at fwd for one sample time while the leader keeps al.
struct Phase1State {
  double pf_st = 0.0;
  double pl_st = 0.0;
  double vf_st = 0.0;
};

/// Gap polynomial pl(t) - pf(t) = at*t^2 + bt*t + ct once the follower
/// starts braking at bwd after phase 1, and its discriminant.
struct QuadCoeffs {
  double at = 0.0;
  double bt = 0.0;
  double ct = 0.0;
  double delta = 0.0;
};

Phase1State phase1(const AccState& s, const AccParams& p);
QuadCoeffs quad_coeffs(const AccState& s, const AccParams& p);

/// True when the gap to the leader reaches zero either at the end of phase 1
/// or at some later time while the follower brakes:
///
///   pl_st <= pf_st
///   || (al == bwd && -ct/bt > 0)
///   || (delta >= 0 && al != bwd && ((-bt + sqrt(delta)) / (2 at) > 0 ||
///                                   (-bt - sqrt(delta)) / (2 at) > 0))
///
/// `al == bwd` is an exact floating-point comparison; quantize computed
/// accelerations before calling. When al == bwd and bt == 0 the gap is the
/// constant ct, so the result is ct <= 0.
bool collision_predicted(const AccState& s, const AccParams& p);

/// New follower acceleration: bwd when a collision is predicted, else fwd.
double controller_step(const AccState& s, const AccParams& p);

struct Scenario {
  AccParams params;
  double pf = 0.0;
  double vf = 0.0;
  double pl = 50.0;
  double vl = 0.0;
};

/// Hybrid program for the two-vehicle loop, with `al` declared as a variant
/// array over `al_values` (unit-step integer runs are written as a range).
/// The collision predicate is inlined into the `if` guard, and at, bt, ct and
/// delta are program variables kept current by the ODE block so predicates
/// over them can be sampled at any time. Throws ConfigError when al_values
/// is empty or the params are invalid.
std::string make_acc_program(const Scenario& scenario, std::span<const double> al_values);

}  // namespace hysim::acc
