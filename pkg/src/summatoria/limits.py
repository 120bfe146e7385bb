"""Remainder-class fits and combined limit-law verdicts.

The central diagnostic: given S(n) at geometric checkpoints and a
candidate limiting mean m0, the residuals r(n) = S(n) - n*m0 are
classified as decaying (o(1)), bounded (O(1)), growing, or inconclusive
from the least-squares slope of log|r| against log n plus a first-vs-last
quartile comparison that guards against oscillating residuals.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import quad

from . import sieve
from .empirical import empirical_cdf, ks_distance
from .errors import DegenerateSampleError, NumericError
from .sequences import ArithmeticSequence, sequence_from_function
from .traces import (
    NeumaierSum,
    SummatoryTrace,
    _ordered_map,
    geometric_checkpoints,
    summatory_trace,
    validate_checkpoints,
)

DECAYING = "decaying"
BOUNDED = "bounded"
GROWING = "growing"
INCONCLUSIVE = "inconclusive"

SLOPE_THRESHOLD = 0.1
REMAINDER_FLOOR = 1e-13

# Partial-sum samples fed to the KS statistic are strided down to this size.
KS_SAMPLE_CAP = 10**6


@dataclass(frozen=True)
class RemainderFit:
    """A sampled residual sequence with its growth classification."""

    checkpoints: np.ndarray
    remainders: np.ndarray
    classification: str
    loglog_slope: float
    slope_stderr: float


class LimitMeanEstimate(NamedTuple):
    value: float
    drift: float  # |S(n_m)/n_m - S(n_{m-1})/n_{m-1}|, a convergence diagnostic


@dataclass(frozen=True)
class LimitVerdict:
    """Combined evidence report for the normal-limit conditions.

    conditions_met reflects only the residual fits; the KS trace is
    reported as-is and never gates the verdict.
    """

    function: str
    N: int
    checkpoints: np.ndarray
    mu0_hat: float
    mean_rate: RemainderFit
    asymptotic_form: RemainderFit
    ks_trace: tuple[tuple[int, float], ...]
    conditions_met: bool
    notes: str


def _loglog_slope(cps: np.ndarray, absr: np.ndarray) -> tuple[float, float]:
    x = np.log(cps)
    y = np.log(absr)
    xc = x - x.mean()
    sxx = float(np.dot(xc, xc))
    slope = float(np.dot(xc, y - y.mean()) / sxx)
    k = x.size
    if k <= 2:
        return slope, 0.0
    resid = (y - y.mean()) - slope * xc
    sigma2 = float(np.dot(resid, resid)) / (k - 2)
    return slope, math.sqrt(sigma2 / sxx)


def fit_remainders(
    checkpoints,
    remainders,
    *,
    slope_threshold: float = SLOPE_THRESHOLD,
    floor: float = REMAINDER_FLOOR,
) -> RemainderFit:
    """Classify a residual sequence sampled at increasing checkpoints.

    Rules, in order:
      - every |r| at or below the floor: the residual is numerically
        indistinguishable from zero everywhere, i.e. already converged;
        class is decaying with an undefined slope.
      - more than half the checkpoints at or below the floor: the fit has
        too little signal; inconclusive.
      - slope < -threshold and the max |r| over the last quartile is
        below the max over the first quartile: decaying.  A negative
        slope without the quartile drop (oscillating residuals such as
        Mertens passing through zero) stays inconclusive.
      - |slope| <= threshold: bounded.
      - slope > threshold: growing.
    """
    cps = validate_checkpoints(checkpoints).astype(np.float64)
    r = np.asarray(remainders, dtype=np.float64)
    if r.shape != cps.shape:
        raise ValueError("remainders and checkpoints must have equal length")
    if not np.all(np.isfinite(r)):
        raise NumericError("remainder sequence contains non-finite values")

    absr = np.abs(r)
    m = absr.size
    mask = absr > floor
    included = int(mask.sum())

    if included == 0:
        return RemainderFit(cps.astype(np.int64), r, DECAYING,
                            float("nan"), float("nan"))

    if included >= 2:
        slope, stderr = _loglog_slope(cps[mask], absr[mask])
    else:
        slope, stderr = float("nan"), float("nan")

    q = max(1, m // 4)
    first_max = float(absr[:q].max())
    last_max = float(absr[-q:].max())

    if 2 * (m - included) > m or included < 2:
        classification = INCONCLUSIVE
    elif slope < -slope_threshold:
        classification = DECAYING if last_max < first_max else INCONCLUSIVE
    elif slope <= slope_threshold:
        classification = BOUNDED
    else:
        classification = GROWING

    return RemainderFit(cps.astype(np.int64), r, classification, slope, stderr)


def estimate_limit_mean(trace: SummatoryTrace) -> LimitMeanEstimate:
    """S(n)/n at the largest checkpoint, with the change from the previous
    checkpoint as a stability diagnostic."""
    if len(trace) < 4:
        raise ValueError("limit-mean estimation needs at least 4 checkpoints")
    n_last, n_prev = int(trace.checkpoints[-1]), int(trace.checkpoints[-2])
    value = float(trace.values[-1]) / n_last
    prev = float(trace.values[-2]) / n_prev
    return LimitMeanEstimate(value=value, drift=abs(value - prev))


def mean_rate_fit(trace: SummatoryTrace, mu0: float, *,
                  slope_threshold: float = SLOPE_THRESHOLD,
                  floor: float = REMAINDER_FLOOR) -> RemainderFit:
    """Fit the residuals r(n) = S(n) - n*mu0.

    The o(1/n) condition on means, n*(S(n)/n - mu0) -> 0, involves
    exactly the same residual sequence, so one fit serves both readings.
    Checkpoint schedules should be geometric-ish (consecutive ratio
    >= 1.5); tighter spacing only triggers a warning, not an error.
    """
    cps = trace.checkpoints
    if cps.size >= 2:
        ratios = cps[1:] / cps[:-1]
        if np.any(ratios < 1.5):
            warnings.warn(
                "checkpoint spacing below geometric ratio 1.5; "
                "log-log slope may be unreliable",
                stacklevel=2,
            )
    r = trace.values.astype(np.float64) - cps.astype(np.float64) * mu0
    return fit_remainders(cps, r, slope_threshold=slope_threshold, floor=floor)


def euler_maclaurin_gap(
    fn: Callable[[np.ndarray], np.ndarray],
    N: int,
    checkpoints=None,
    *,
    antiderivative: Callable[[float], float] | None = None,
    block_size: int | None = None,
) -> RemainderFit:
    """Classify r(n) = sum_{k<=n} f(k) - integral_1^n f(t) dt.

    For a bounded elementary summand this gap is O(1) but generally not
    o(1), which is exactly what separates such sums from the decaying
    residuals the limit conditions require.  The integral uses the given
    antiderivative when available, otherwise adaptive quadrature piecewise
    between checkpoints (absolute error per piece <= 1e-10).
    """
    if checkpoints is None:
        checkpoints = geometric_checkpoints(N)
    cps = validate_checkpoints(checkpoints, N)
    seq = sequence_from_function(fn, N, name="elementary", magnitude_bound=math.inf)
    trace = summatory_trace(seq, N, cps, block_size=block_size)

    integrals = np.empty(cps.size, dtype=np.float64)
    if antiderivative is not None:
        base = antiderivative(1.0)
        for j, n in enumerate(cps):
            integrals[j] = antiderivative(float(n)) - base
    else:
        scalar_fn = lambda t: float(np.asarray(fn(np.array([t])))[0])
        running = 0.0
        prev = 1.0
        for j, n in enumerate(cps):
            piece = quad(scalar_fn, prev, float(n), epsabs=1e-12, epsrel=1e-12,
                         limit=200, full_output=1)
            if len(piece) > 3:
                raise NumericError(f"quadrature failed on [{prev}, {int(n)}]: {piece[3]}")
            value, abserr = piece[0], piece[1]
            if abserr > 1e-10:
                raise NumericError(
                    f"quadrature error {abserr:.3e} on [{prev}, {int(n)}] exceeds 1e-10"
                )
            running += value
            integrals[j] = running
            prev = float(n)

    r = trace.values.astype(np.float64) - integrals
    return fit_remainders(cps, r)


def _partial_sum_samples(
    seq: ArithmeticSequence,
    cps: np.ndarray,
    *,
    block_size: int,
    threads: int,
    cap: int = KS_SAMPLE_CAP,
) -> tuple[np.ndarray, list[np.ndarray]]:
    """One streaming pass: checkpoint sums plus, per checkpoint n_j, the
    partial sums S(k) at k = s_j, 2 s_j, ... <= n_j with stride
    s_j = ceil(n_j / cap)."""
    exact = seq.integer_valued
    strides = [max(1, -(-int(n) // cap)) for n in cps]
    samples = [np.empty(int(n) // s, dtype=np.float64) for n, s in zip(cps, strides)]
    cp_values = np.empty(cps.size, dtype=np.int64 if exact else np.float64)
    filled = 0
    total_int = 0
    acc = NeumaierSum()
    last = int(cps[-1])

    ranges = list(sieve.iter_block_ranges(1, last, block_size))
    for (lo, hi), arr in zip(ranges, _ordered_map(seq.values, ranges, threads)):
        if exact and arr.dtype.kind == "f":
            arr = arr.astype(np.int64)
        run = np.cumsum(arr, dtype=np.int64 if exact else np.float64)
        base = total_int if exact else acc.value
        for j, (nj, sj) in enumerate(zip(cps, strides)):
            nj = int(nj)
            if nj < lo:
                continue
            upper = min(hi, nj)
            k_first = ((lo + sj - 1) // sj) * sj
            if k_first <= upper:
                ks = np.arange(k_first, upper + 1, sj, dtype=np.int64)
                dest = k_first // sj - 1
                samples[j][dest : dest + ks.size] = base + run[ks - lo]
        hits = cps[(cps >= lo) & (cps <= hi)]
        if hits.size:
            cp_values[filled : filled + hits.size] = base + run[hits - lo]
            filled += hits.size
        if exact:
            total_int += int(arr.sum(dtype=np.int64))
        else:
            acc.add(math.fsum(arr.tolist()))
    return cp_values, samples


def full_verdict(
    seq: ArithmeticSequence,
    N: int,
    checkpoints=None,
    *,
    block_size: int | None = None,
    threads: int = 1,
) -> LimitVerdict:
    """Assemble the whole evidence report for one sequence.

    Streams the sequence once, estimates the limiting mean from the last
    checkpoint, fits the residuals S(n) - n*mu0_hat (one fit, reported
    under both the mean-rate and asymptotic-form readings, which are the
    same sequence), and attaches the KS distance of the self-standardized
    partial sums {S(k): k <= n_j} at every checkpoint.
    """
    if N > seq.bound:
        raise ValueError(f"N={N} exceeds the sequence bound {seq.bound}")
    if checkpoints is None:
        checkpoints = geometric_checkpoints(N)
    cps = validate_checkpoints(checkpoints, N)
    block_size = sieve.resolve_block_size(block_size)

    cp_values, samples = _partial_sum_samples(
        seq, cps, block_size=block_size, threads=threads
    )
    kind = "exact-integer" if seq.integer_valued else "compensated-float"
    trace = SummatoryTrace(checkpoints=cps, values=cp_values,
                           accumulation_kind=kind, name=seq.name)

    est = estimate_limit_mean(trace)
    fit = mean_rate_fit(trace, est.value)

    notes = [f"mu0 drift from previous checkpoint: {est.drift:.6e}"]
    ks_trace = []
    degenerate = 0
    for nj, sample in zip(cps, samples):
        try:
            d = ks_distance(empirical_cdf(sample))
        except DegenerateSampleError:
            d = float("nan")
            degenerate += 1
        ks_trace.append((int(nj), d))
    if degenerate:
        notes.append(f"{degenerate} checkpoint(s) had degenerate partial-sum samples")

    return LimitVerdict(
        function=seq.name,
        N=int(N),
        checkpoints=cps,
        mu0_hat=est.value,
        mean_rate=fit,
        asymptotic_form=fit,
        ks_trace=tuple(ks_trace),
        conditions_met=bool(fit.classification == DECAYING),
        notes="; ".join(notes),
    )


def vanishing_sum_verdict(trace: SummatoryTrace, magnitude_bound: float) -> LimitVerdict:
    """Verdict for the S(n) -> 0 route: with the limiting mean pinned to
    zero, the conditions hold exactly when S(n) itself classifies as
    decaying.  Applies to sequences already known to satisfy
    |f| <= magnitude_bound; the bound is recorded, not re-derived."""
    fit = mean_rate_fit(trace, 0.0)
    notes = f"limiting mean pinned to 0; declared |f| <= {magnitude_bound:g}"
    return LimitVerdict(
        function=trace.name,
        N=int(trace.checkpoints[-1]),
        checkpoints=trace.checkpoints,
        mu0_hat=0.0,
        mean_rate=fit,
        asymptotic_form=fit,
        ks_trace=(),
        conditions_met=bool(fit.classification == DECAYING),
        notes=notes,
    )


def _json_float(x: float):
    return float(x) if math.isfinite(x) else None


def _fit_json(fit: RemainderFit) -> dict:
    return {
        "class": fit.classification,
        "slope": _json_float(fit.loglog_slope),
        "stderr": _json_float(fit.slope_stderr),
    }


def verdict_to_json_dict(v: LimitVerdict) -> dict:
    """The JSON report document; key set and order are part of the format."""
    return {
        "function": v.function,
        "N": v.N,
        "checkpoints": [int(c) for c in v.checkpoints],
        "mu0_hat": _json_float(v.mu0_hat),
        "mean_rate": _fit_json(v.mean_rate),
        "asymptotic_form": _fit_json(v.asymptotic_form),
        "ks_trace": [{"n": n, "D": _json_float(d)} for n, d in v.ks_trace],
        "conditions_met": v.conditions_met,
        "notes": v.notes,
    }
