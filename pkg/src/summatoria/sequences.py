"""Bounded real-valued functions on the positive integers.

An ArithmeticSequence abstracts over the three ways values arrive here:
sieve-backed (mu, lambda, mu(k)/k), closed-form expressions, and
materialized arrays (e.g. greedy schedule realizations).  Evaluation is
pure and block-oriented so traces and statistics can stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import sieve
from .errors import BoundError

SIEVE_BACKED = "sieve-backed"
CLOSED_FORM = "closed-form"
SYNTHESIZED = "synthesized"


@dataclass(frozen=True)
class ArithmeticSequence:
    """A function f on {1, ..., bound} with a declared magnitude bound.

    ``values(lo, hi)`` returns f(lo..hi) as a 1-D array; repeated calls
    return identical values.  ``integer_valued`` selects exact integer
    accumulation in the trace engine.
    """

    name: str
    kind: str
    bound: int
    magnitude_bound: float
    integer_valued: bool
    _block_fn: Callable[[int, int], np.ndarray] = field(repr=False, compare=False)

    def values(self, lo: int, hi: int) -> np.ndarray:
        if lo < 1 or hi < lo:
            raise ValueError(f"invalid index range [{lo}, {hi}]")
        if hi > self.bound:
            raise BoundError(f"index {hi} exceeds the sequence bound {self.bound}")
        return self._block_fn(lo, hi)


def _spot_check_magnitude(seq: ArithmeticSequence, samples: int = 32) -> None:
    # Cheap sanity check of the declared bound on log-spaced indices.
    idx = np.unique(
        np.geomspace(1, seq.bound, num=min(samples, seq.bound)).astype(np.int64)
    )
    vals = np.concatenate([seq.values(int(k), int(k)) for k in idx])
    worst = float(np.max(np.abs(vals))) if vals.size else 0.0
    if worst > seq.magnitude_bound * (1 + 1e-12):
        raise ValueError(
            f"sequence {seq.name!r} exceeds its declared magnitude bound: "
            f"|f| reaches {worst} > {seq.magnitude_bound}"
        )


def mobius_sequence(bound: int) -> ArithmeticSequence:
    """mu(k) for k <= bound, sieve-backed."""
    primes = sieve.primes_up_to(math.isqrt(bound))

    def block(lo: int, hi: int) -> np.ndarray:
        return sieve.sieve_block(lo, hi, primes=primes).mu

    return ArithmeticSequence("mu", SIEVE_BACKED, bound, 1.0, True, block)


def liouville_sequence(bound: int) -> ArithmeticSequence:
    """lambda(k) for k <= bound, sieve-backed."""
    primes = sieve.primes_up_to(math.isqrt(bound))

    def block(lo: int, hi: int) -> np.ndarray:
        return sieve.sieve_block(lo, hi, primes=primes).lam

    return ArithmeticSequence("lambda", SIEVE_BACKED, bound, 1.0, True, block)


def weighted_mobius_sequence(bound: int) -> ArithmeticSequence:
    """mu(k)/k for k <= bound, sieve-backed."""
    primes = sieve.primes_up_to(math.isqrt(bound))

    def block(lo: int, hi: int) -> np.ndarray:
        mu = sieve.sieve_block(lo, hi, primes=primes).mu
        return mu / np.arange(lo, hi + 1, dtype=np.float64)

    return ArithmeticSequence("mu-over-k", SIEVE_BACKED, bound, 1.0, False, block)


def sequence_from_function(
    fn: Callable[[np.ndarray], np.ndarray],
    bound: int,
    *,
    name: str = "f",
    magnitude_bound: float,
    integer_valued: bool = False,
) -> ArithmeticSequence:
    """Wrap a vectorized closed-form expression f(k).

    ``fn`` receives a float64 array of indices and must return an array of
    the same shape.  The declared magnitude bound is spot-checked on
    log-spaced indices.
    """
    if bound < 1:
        raise ValueError(f"bound must be positive, got {bound}")

    def block(lo: int, hi: int) -> np.ndarray:
        k = np.arange(lo, hi + 1, dtype=np.float64)
        out = np.asarray(fn(k), dtype=np.float64)
        if out.shape != k.shape:
            raise ValueError("closed-form evaluator changed the block shape")
        return out

    seq = ArithmeticSequence(name, CLOSED_FORM, bound, float(magnitude_bound),
                             integer_valued, block)
    _spot_check_magnitude(seq)
    return seq


def sequence_from_values(
    values: np.ndarray,
    *,
    name: str = "values",
    magnitude_bound: float | None = None,
) -> ArithmeticSequence:
    """Wrap a materialized array as the sequence f(k) = values[k - 1]."""
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("materialized sequence must be a nonempty 1-D array")
    if not np.all(np.isfinite(arr)):
        raise ValueError("materialized sequence contains non-finite values")
    arr.flags.writeable = False
    if magnitude_bound is None:
        magnitude_bound = float(np.max(np.abs(arr)))
    integer_valued = bool(np.all(arr == np.round(arr)))

    def block(lo: int, hi: int) -> np.ndarray:
        return arr[lo - 1 : hi]

    return ArithmeticSequence(name, SYNTHESIZED, arr.size, float(magnitude_bound),
                              integer_valued, block)
