#pragma once

// Brute-force collision check for the ACC controller: sample both vehicles'
// positions densely over the two-phase manoeuvre (follower at fwd for st, then
// at bwd) and look for a sample where the gap pl - pf is <= 0. Independent of
// the root analysis in collision_predicted; it only knows the kinematics.

#include <cmath>
#include <optional>
#include <random>
#include <string>

#include "hysim/acc.hpp"

namespace hysim::testing {

struct OracleOptions {
  double step = 1e-4;
  double horizon = 60.0;
};

struct OracleVerdict {
  bool collision = false;       // gap <= 0 at some sample from the end of phase 1 on
  bool phase1_contact = false;  // gap <= 0 at some sample strictly inside phase 1
  // Why a state cannot be judged reliably, if it cannot.
  std::optional<std::string> excluded;
};

// Closed-form position after t time units at constant acceleration.
inline double position(double p0, double v0, double a, double t) {
  return p0 + v0 * t + a / 2 * t * t;
}

inline OracleVerdict dense_oracle(const acc::AccState& s, const acc::AccParams& p,
                                  const OracleOptions& opt = {}) {
  OracleVerdict out;

  // end of phase 1, from each vehicle's own motion
  const double pf1 = position(s.pf, s.vf, p.fwd, p.st);
  const double vf1 = s.vf + p.fwd * p.st;
  const double pl1 = position(s.pl, s.vl, s.al, p.st);
  const double vl1 = s.vl + s.al * p.st;

  const double rel_acc = s.al - p.bwd;  // gap'' while braking
  const double gap1 = pl1 - pf1;
  const double rel_vel1 = vl1 - vf1;

  // Degenerate or knife-edge states: a sampled search cannot tell which side
  // they fall on, or the quadratic formula is ill-conditioned.
  if (std::fabs(rel_acc / 2) < 1e-9) {
    out.excluded = "at";
  } else if (std::fabs(rel_vel1) < 1e-9) {
    out.excluded = "bt";
  } else if (std::fabs(gap1) < 1e-6) {
    out.excluded = "boundary";
  } else {
    // the gap's turning point while braking, if it lies inside the horizon
    const double tau = -rel_vel1 / rel_acc;
    if (tau > 0 && tau < opt.horizon - p.st) {
      const double extremum = gap1 + rel_vel1 * tau + rel_acc / 2 * tau * tau;
      if (std::fabs(extremum) < 1e-6) out.excluded = "tangency";
    }
  }

  const auto n1 = static_cast<long>(std::llround(p.st / opt.step));
  for (long k = 1; k < n1 && !out.phase1_contact; ++k) {
    const double t = static_cast<double>(k) * opt.step;
    if (position(s.pl, s.vl, s.al, t) - position(s.pf, s.vf, p.fwd, t) <= 0)
      out.phase1_contact = true;
  }

  const auto n2 = static_cast<long>(std::llround((opt.horizon - p.st) / opt.step));
  for (long k = 0; k <= n2; ++k) {
    const double tau = static_cast<double>(k) * opt.step;
    if (position(pl1, vl1, s.al, tau) - position(pf1, vf1, p.bwd, tau) <= 0) {
      out.collision = true;
      break;
    }
  }

  if (!out.collision && !out.excluded) {
    // No contact seen, but is the gap still closing when the search stops?
    const double tau_end = opt.horizon - p.st;
    const double rel_vel_end = rel_vel1 + rel_acc * tau_end;
    if (rel_acc < 0 || rel_vel_end < 0) out.excluded = "horizon";
  }
  return out;
}

// States drawn from pf, pl in [-100, 100], vf, vl in [-30, 30], al in [-5, 5].
inline acc::AccState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-100, 100), vel(-30, 30), acc(-5, 5);
  acc::AccState s;
  s.pf = pos(rng);
  s.pl = pos(rng);
  s.vf = vel(rng);
  s.vl = vel(rng);
  s.al = acc(rng);
  return s;
}

}  // namespace hysim::testing
