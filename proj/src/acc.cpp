#include "hysim/acc.hpp"

#include <cmath>
#include <vector>

#include "hysim/errors.hpp"
#include "hysim/parser.hpp"

namespace hysim::acc {

void AccParams::validate() const {
  if (!(fwd > 0)) throw ConfigError("fwd must be positive");
  if (!(bwd < 0)) throw ConfigError("bwd must be negative");
  if (!(st > 0)) throw ConfigError("st must be positive");
}

Phase1State phase1(const AccState& s, const AccParams& p) {
  return {
      p.fwd / 2 * p.st * p.st + s.vf * p.st + s.pf,
      s.al / 2 * p.st * p.st + s.vl * p.st + s.pl,
      p.fwd * p.st + s.vf,
  };
}

QuadCoeffs quad_coeffs(const AccState& s, const AccParams& p) {
  QuadCoeffs q;
  q.at = (s.al - p.bwd) / 2;
  q.bt = (s.al - p.fwd) * p.st + (s.vl - s.vf);
  q.ct = (s.al - p.fwd) / 2 * p.st * p.st + (s.vl - s.vf) * p.st + (s.pl - s.pf);
  q.delta = q.bt * q.bt - 4 * q.at * q.ct;
  return q;
}

bool collision_predicted(const AccState& s, const AccParams& p) {
  const Phase1State ph = phase1(s, p);
  if (ph.pl_st <= ph.pf_st) return true;

  const QuadCoeffs q = quad_coeffs(s, p);
  if (s.al == p.bwd) {
    if (q.bt == 0) return q.ct <= 0;
    return -q.ct / q.bt > 0;
  }
  if (q.delta < 0) return false;
  const double root = std::sqrt(q.delta);
  return (-q.bt + root) / (2 * q.at) > 0 || (-q.bt - root) / (2 * q.at) > 0;
}

double controller_step(const AccState& s, const AccParams& p) {
  return collision_predicted(s, p) ? p.bwd : p.fwd;
}

namespace {

std::string values_literal(std::span<const double> values) {
  bool unit_steps = values.size() >= 2;
  for (std::size_t i = 0; unit_steps && i < values.size(); ++i) {
    unit_steps = exact_integer(values[i]) && (i == 0 || values[i] == values[i - 1] + 1);
  }
  if (unit_steps) {
    return "[" + format_number(values.front()) + ".." + format_number(values.back()) + "]";
  }
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_number(values[i]);
  }
  return out + "]";
}

}  // namespace

std::string make_acc_program(const Scenario& scenario, std::span<const double> al_values) {
  scenario.params.validate();
  if (al_values.empty()) throw ConfigError("at least one leader acceleration is required");
  const auto num = [](double v) { return format_number(v); };
  const AccParams& p = scenario.params;

  std::string out;
  out += "// Adaptive cruise control on a straight road: a follower (pf, vf, af)\n";
  out += "// behind a leader (pl, vl, al). Every st time units the follower checks\n";
  out += "// whether accelerating at fwd for st and then braking at bwd could close\n";
  out += "// the gap; if so it brakes, otherwise it accelerates.\n";
  out += "fwd := " + num(p.fwd) + ";\n";
  out += "bwd := " + num(p.bwd) + ";\n";
  out += "st := " + num(p.st) + ";\n";
  out += "pf := " + num(scenario.pf) + ";\n";
  out += "vf := " + num(scenario.vf) + ";\n";
  out += "af := fwd;\n";
  out += "pl := " + num(scenario.pl) + ";\n";
  out += "vl := " + num(scenario.vl) + ";\n";
  out += "al := " + values_literal(al_values) + ";\n";
  out += R"(while true do {
  // pl(t) - pf(t) = at*t^2 + bt*t + ct while braking after one step at fwd
  at := (al - bwd) / 2;
  bt := (al - fwd) * st + (vl - vf);
  ct := (al - fwd) / 2 * st * st + (vl - vf) * st + (pl - pf);
  delta := bt * bt - 4 * at * ct;
  if al / 2 * st * st + vl * st + pl <= fwd / 2 * st * st + vf * st + pf
     || al == bwd && (bt != 0 && -ct / bt > 0 || bt == 0 && ct <= 0)
     || delta >= 0 && al != bwd
        && ((-bt + sqrt(delta)) / (2 * at) > 0 || (-bt - sqrt(delta)) / (2 * at) > 0)
  then af := bwd;
  else af := fwd;
  pf' = vf, vf' = af, af' = 0,
  pl' = vl, vl' = al, al' = 0,
  bt' = al - af,
  ct' = (al - af) * st + (vl - vf),
  delta' = 2 * bt * (al - af) - 4 * at * ((al - af) * st + (vl - vf))
  for st;
}
)";
  return out;
}

}  // namespace hysim::acc
