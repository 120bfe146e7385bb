"""Statistics of arithmetic sequences under the uniform measure on {1..n}.

Restricting a sequence to {1..n} and weighting every point by 1/n turns
it into a random variable; these helpers compute its mean, population
variance, empirical CDF, Kolmogorov-Smirnov distance to a reference law,
and a lagged correlation that quantifies asymptotic independence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import BoundError, DegenerateSampleError
from .sequences import ArithmeticSequence
from .traces import NeumaierSum, summatory_trace
from . import sieve

STANDARD_NORMAL = "standard-normal"
UNIFORM_01 = "uniform(0,1)"

# 1% critical coefficient for the one-sample KS statistic: D ~ c / sqrt(n).
KS_CRITICAL_1PCT = 1.63


@dataclass(frozen=True)
class EmpiricalDistribution:
    """A sorted sample with its empirical CDF and population moments."""

    sample: np.ndarray
    n: int
    mean: float
    variance: float

    def cdf(self, x) -> np.ndarray | float:
        """Right-continuous empirical CDF: fraction of the sample <= x."""
        out = np.searchsorted(self.sample, x, side="right") / self.n
        return float(out) if np.isscalar(x) else out


def empirical_cdf(values) -> EmpiricalDistribution:
    """Sort a sample and package it with its mean and population variance."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("sample must be a nonempty 1-D array")
    sample = np.sort(arr)
    return EmpiricalDistribution(
        sample=sample,
        n=int(sample.size),
        mean=float(np.mean(sample)),
        variance=float(np.var(sample)),
    )


def empirical_mean(seq: ArithmeticSequence, n: int) -> float:
    """Average of f over {1..n}; exact-integer S(n)/n for integer-valued f."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n > seq.bound:
        raise BoundError(f"n={n} exceeds the sequence bound {seq.bound}")
    trace = summatory_trace(seq, n, [n])
    if seq.integer_valued:
        return int(trace.values[0]) / n
    return float(trace.values[0]) / n


def empirical_moments(seq: ArithmeticSequence, n: int) -> tuple[float, float]:
    """(mean, population variance) of f over {1..n} in one streaming pass."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n > seq.bound:
        raise BoundError(f"n={n} exceeds the sequence bound {seq.bound}")
    block_size = sieve.resolve_block_size(None)
    if seq.integer_valued:
        s = 0
        s2 = 0
        for lo, hi in sieve.iter_block_ranges(1, n, block_size):
            arr = seq.values(lo, hi).astype(np.int64)
            s += int(arr.sum(dtype=np.int64))
            s2 += int((arr * arr).sum(dtype=np.int64))
        # (s2*n - s*s) is exact, so the single float division rounds once.
        return s / n, (s2 * n - s * s) / n / n
    acc = NeumaierSum()
    acc2 = NeumaierSum()
    for lo, hi in sieve.iter_block_ranges(1, n, block_size):
        arr = seq.values(lo, hi)
        acc.add(math.fsum(arr.tolist()))
        acc2.add(math.fsum((arr * arr).tolist()))
    mean = acc.value / n
    return mean, acc2.value / n - mean * mean


def ks_distance(
    dist: EmpiricalDistribution,
    reference: str = STANDARD_NORMAL,
    *,
    standardize: bool = True,
) -> float:
    """Kolmogorov-Smirnov distance between a sample and a reference law.

    For the standard-normal reference the sample is first standardized by
    its own mean and standard deviation (disable with standardize=False
    when the sample is already on the reference scale).  The uniform(0,1)
    reference compares raw values.  The supremum accounts for both sides
    of each jump of the empirical CDF.
    """
    if reference == STANDARD_NORMAL:
        if standardize:
            if dist.variance <= 0.0:
                raise DegenerateSampleError(
                    "sample variance is zero; cannot standardize for the normal reference"
                )
            z = (dist.sample - dist.mean) / math.sqrt(dist.variance)
        else:
            z = dist.sample
        # Phi(z) = ndtr(z), erf-based, abs error well under 1e-10.
        ref = ndtr(z)
    elif reference == UNIFORM_01:
        ref = np.clip(dist.sample, 0.0, 1.0)
    else:
        raise ValueError(f"unknown reference law {reference!r}")

    n = dist.n
    steps_hi = np.arange(1, n + 1, dtype=np.float64) / n
    steps_lo = np.arange(0, n, dtype=np.float64) / n
    d = max(np.max(np.abs(steps_hi - ref)), np.max(np.abs(steps_lo - ref)))
    return float(d)


def independence_estimator(seq: ArithmeticSequence, n: int, h: int) -> float:
    """Lag-h correlation gap over {1..n}:

        rho(n, h) = mean(f(k) f(k+h)) - mean(f(k)) mean(f(k+h)),

    all means over k <= n.  Values near zero across growing n are
    evidence that terms at distinct arguments decouple on average.
    """
    if n < 1 or h < 1:
        raise ValueError(f"n and h must be positive, got n={n}, h={h}")
    if n + h > seq.bound:
        raise BoundError(f"n + h = {n + h} exceeds the sequence bound {seq.bound}")
    x = np.asarray(seq.values(1, n), dtype=np.float64)
    y = np.asarray(seq.values(h + 1, n + h), dtype=np.float64)
    # The correlation gap of a constant window is identically zero; skip
    # the float path so the cancellation is exact.
    if x.min() == x.max() or y.min() == y.max():
        return 0.0
    mean_xy = math.fsum((x * y).tolist()) / n
    mean_x = math.fsum(x.tolist()) / n
    mean_y = math.fsum(y.tolist()) / n
    return mean_xy - mean_x * mean_y
