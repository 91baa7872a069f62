#!/usr/bin/env python3
"""Exact piecewise closed-form simulation of the two-vehicle ACC loop.

Independent of the C++ interpreter: every segment has constant accelerations,
so positions and velocities are advanced with the kinematic closed form in
rational arithmetic. Square roots in the root-positivity test use 60-digit
decimals.

Writes the frozen golden data consumed by the C++ tests:
  acc_trace_al0.json        loop-boundary follower positions for al = 0
  acc_hist_ct_le_0.json     `ct <= 0 @ every 0.5` histogram over al in [-3..3]
  acc_hist_pf_ge_50.json    `pf >= 50 @ every 2` histogram over the same sweep
  acc_runs.json             per al: follower decisions at each loop boundary and
                            the smallest gap pl - pf on the 0.1 sample grid
"""
import json
import sys
from decimal import Decimal, getcontext
from fractions import Fraction as F
from pathlib import Path

getcontext().prec = 60

FWD, BWD, ST = F(3), F(-3), F(2)
PL0, VL0 = F(50), F(0)
HORIZON = F(30)


def coeffs(pf, vf, pl, vl, al):
    at = (al - BWD) / 2
    bt = (al - FWD) * ST + (vl - vf)
    ct = (al - FWD) / 2 * ST * ST + (vl - vf) * ST + (pl - pf)
    return at, bt, ct, bt * bt - 4 * at * ct


def collision(pf, vf, pl, vl, al, hazards, where):
    pf_st = FWD / 2 * ST * ST + vf * ST + pf
    pl_st = al / 2 * ST * ST + vl * ST + pl
    at, bt, ct, delta = coeffs(pf, vf, pl, vl, al)
    if pl_st == pf_st or delta == 0:
        hazards.append(where)
    if pl_st <= pf_st:
        return True
    if al == BWD:
        if bt == 0:
            return ct <= 0
        root = -ct / bt
        if root == 0:
            hazards.append(where)
        return root > 0
    if delta >= 0:
        sq = Decimal(delta.numerator) / Decimal(delta.denominator)
        sq = sq.sqrt()
        for r in ((-Decimal(bt.numerator) / Decimal(bt.denominator) + sq),
                  (-Decimal(bt.numerator) / Decimal(bt.denominator) - sq)):
            val = r / (2 * Decimal(at.numerator) / Decimal(at.denominator))
            if val == 0:
                hazards.append(where)
            if val > 0:
                return True
    return False


def simulate(al, hazards):
    """Returns list of segments (t0, pf, vf, af, pl, vl) covering [0, HORIZON]."""
    pf, vf, pl, vl = F(0), F(0), PL0, VL0
    t = F(0)
    segs = []
    while t < HORIZON:
        af = BWD if collision(pf, vf, pl, vl, al, hazards, (al, t)) else FWD
        segs.append((t, pf, vf, af, pl, vl))
        d = ST
        pf, vf = pf + vf * d + af / 2 * d * d, vf + af * d
        pl, vl = pl + vl * d + al / 2 * d * d, vl + al * d
        t += d
    return segs


def state_at(segs, al, t):
    seg = max((s for s in segs if s[0] <= t), key=lambda s: s[0])
    t0, pf, vf, af, pl, vl = seg
    d = t - t0
    return (pf + vf * d + af / 2 * d * d, vf + af * d,
            pl + vl * d + al / 2 * d * d, vl + al * d)


def histogram(runs, pred, period, hazards):
    bins = []
    n = int(HORIZON / period)
    for k in range(n + 1):
        t = period * k
        count = ties = 0
        for al, segs in runs:
            pf, vf, pl, vl = state_at(segs, al, t)
            value, boundary = pred(pf, vf, pl, vl, al)
            if boundary:
                hazards.append(("bin", float(al), float(t)))
                ties += 1
            count += value
        # ties: runs sitting exactly on the predicate boundary; a floating
        # point evaluation may land on either side there
        bins.append({"t": float(t), "count": count, "total": len(runs), "ties": ties})
    return bins


def main(out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    hazards = []
    runs = [(F(al), simulate(F(al), hazards)) for al in range(-3, 4)]
    decision_ties = [[float(a), float(t)] for a, t in hazards]

    segs0 = dict(runs)[F(0)]
    trace = {
        "boundary_times": [float(s[0]) for s in segs0] + [float(HORIZON)],
        "pf": [float(s[1]) for s in segs0] + [float(state_at(segs0, F(0), HORIZON)[0])],
        "af": [float(s[3]) for s in segs0],
        "pf_max": float(max(max(s[1], s[1] + (-s[2] ** 2 / (2 * s[3]) if s[3] < 0 and s[2] > 0 else 0))
                            for s in segs0)),
    }
    (out / "acc_trace_al0.json").write_text(json.dumps(trace, indent=2) + "\n")

    def ct_le_0(pf, vf, pl, vl, al):
        ct = coeffs(pf, vf, pl, vl, al)[2]
        return ct <= 0, ct == 0

    def pf_ge_50(pf, vf, pl, vl, al):
        return pf >= 50, pf == 50

    hist = {"query": {"predicate": "ct <= 0", "every": 0.5, "horizon": 30.0},
            "decision_ties": decision_ties,
            "bins": histogram(runs, ct_le_0, F(1, 2), hazards)}
    (out / "acc_hist_ct_le_0.json").write_text(json.dumps(hist, indent=2) + "\n")
    hist2 = {"query": {"predicate": "pf >= 50", "every": 2.0, "horizon": 30.0},
             "decision_ties": decision_ties,
             "bins": histogram(runs, pf_ge_50, F(2), hazards)}
    (out / "acc_hist_pf_ge_50.json").write_text(json.dumps(hist2, indent=2) + "\n")

    per_run = []
    for al, segs in runs:
        grid = [F(k, 10) for k in range(int(HORIZON * 10) + 1)]
        gaps = [state_at(segs, al, t) for t in grid]
        per_run.append({
            "al": float(al),
            "af": [float(s[3]) for s in segs],
            "min_gap_on_grid": float(min(pl - pf for pf, _, pl, _ in gaps)),
        })
    (out / "acc_runs.json").write_text(json.dumps(
        {"decision_ties": decision_ties, "runs": per_run}, indent=2) + "\n")

    for al, segs in runs:
        print("al=%s af=%s" % (al, "".join("+" if s[3] > 0 else "-" for s in segs)))
    print("pf(al=0) at boundaries:", trace["pf"])
    print("ct<=0 counts:", [b["count"] for b in hist["bins"]])
    print("pf>=50 counts:", [b["count"] for b in hist2["bins"]])
    print("exact ties:", hazards)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1] if len(sys.argv) > 1 else "tests/golden"))
