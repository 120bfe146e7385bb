"""Classifying residual sequences: o(1) vs O(1) vs growing.

The classifier fits the log-log slope of |r(n)| over geometric
checkpoints and cross-checks the first and last quartiles.  Shown here on
synthetic families with known answers, then on two real questions: the
Euler-Maclaurin gap of the harmonic sum (bounded, never vanishing) and
the weighted Mobius sum (vanishing).
"""

import math

import numpy as np

from summatoria import (
    euler_maclaurin_gap,
    fit_remainders,
    geometric_checkpoints,
    mean_rate_fit,
    weighted_mobius_trace,
)

cps = geometric_checkpoints(10**7, start=100, ratio=2)
n = cps.astype(np.float64)

# --- calibration families ----------------------------------------------
print("family        class         fitted slope")
for label, r in [("n^-1", 1.0 / n), ("n^-1/2", n**-0.5),
                 ("0.3", np.full(n.size, 0.3)), ("log n", np.log(n))]:
    fit = fit_remainders(cps, r)
    print(f"{label:<12}  {fit.classification:<12}  {fit.loglog_slope:+.4f}")
print()

# --- the harmonic sum keeps a constant-size gap to its integral --------
gap_cps = sorted(set(geometric_checkpoints(10**6, start=100).tolist()) | {10**6})
fit = euler_maclaurin_gap(lambda k: 1.0 / k, 10**6, gap_cps, antiderivative=math.log)
print("sum_{k<=n} 1/k - ln n at a few n:")
for idx in (0, len(gap_cps) // 2, -1):
    print(f"  n = {gap_cps[idx]:>9,}: gap = {fit.remainders[idx]:.10f}")
print(f"class: {fit.classification}  (the gap converges to Euler's constant "
      f"{0.5772156649:.10f}, a nonzero O(1) obstruction)")
print()

# --- the weighted Mobius sum does vanish --------------------------------
trace = weighted_mobius_trace(10**7, geometric_checkpoints(10**7, start=1000))
print("sum_{k<=n} mu(k)/k at geometric checkpoints 1e3..1e7:")
for nn, v in list(zip(trace.checkpoints, trace.values))[::3]:
    print(f"  n = {int(nn):>9,}: {v:+.3e}")
wfit = mean_rate_fit(trace, 0.0)
print(f"class: {wfit.classification}  slope {wfit.loglog_slope:+.3f} "
      f"(stderr {wfit.slope_stderr:.3f})")
print()
print("Same machinery, opposite verdicts: one bounded-away residual, one o(1).")
