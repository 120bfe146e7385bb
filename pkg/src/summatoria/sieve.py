"""Segmented sieve for the Mobius and Liouville functions.

Two evaluation paths are provided: per-integer trial-division oracles,
which are slow but independent and serve as the reference fixture, and a
block sieve that reproduces them at scale.  The sieve divides each entry
of a block by every prime p <= sqrt(hi), tracking the parity of the
prime-factor count and the product of the powers divided out; whatever
cofactor remains is either 1 or a single prime > sqrt(hi) to the first
power, which contributes one more distinct factor.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import BoundError, CapacityError

# Trial division is a test fixture, not a production path; keep it cheap.
ORACLE_BOUND = 10_000_000
GLOBAL_SIEVE_BOUND = 1_000_000_000
DEFAULT_BLOCK_SIZE = 1 << 20
MAX_BLOCK_SIZE = 1 << 24

BLOCK_SIZE_ENV_VAR = "SUMMATORIA_BLOCK_SIZE"


def resolve_block_size(block_size: int | None = None) -> int:
    """Pick the sieve block size: explicit argument, else the
    SUMMATORIA_BLOCK_SIZE environment variable, else the built-in default."""
    if block_size is None:
        block_size = int(os.environ.get(BLOCK_SIZE_ENV_VAR, DEFAULT_BLOCK_SIZE))
    if block_size < 1:
        raise ValueError(f"block size must be positive, got {block_size}")
    if block_size > MAX_BLOCK_SIZE:
        raise CapacityError(
            f"block size {block_size} exceeds the {MAX_BLOCK_SIZE}-entry budget"
        )
    return block_size


@dataclass(frozen=True)
class SieveBlock:
    """Mobius and Liouville values for every integer in [lo, hi].

    Arrays are read-only after construction and safe to share between
    threads.  ``mu[k - lo]`` and ``lam[k - lo]`` hold the values at k.
    """

    lo: int
    hi: int
    mu: np.ndarray
    lam: np.ndarray

    def __post_init__(self):
        width = self.hi - self.lo + 1
        if self.mu.shape != (width,) or self.lam.shape != (width,):
            raise ValueError("sieve block arrays must have length hi - lo + 1")


def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n, by Eratosthenes."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    is_prime = np.ones(n + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.nonzero(is_prime)[0].astype(np.int64)


def _factor_counts(n: int) -> tuple[int, int, bool]:
    """(distinct primes, primes with multiplicity, squarefree) by trial division."""
    distinct = 0
    total = 0
    squarefree = True
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            distinct += 1
            exponent = 0
            while m % d == 0:
                m //= d
                exponent += 1
            total += exponent
            if exponent > 1:
                squarefree = False
        d += 1 if d == 2 else 2
    if m > 1:
        distinct += 1
        total += 1
    return distinct, total, squarefree


def _check_oracle_arg(n: int) -> None:
    if n < 1:
        raise BoundError(f"oracle argument must be a positive integer, got {n}")
    if n > ORACLE_BOUND:
        raise BoundError(
            f"oracle argument {n} exceeds the trial-division bound {ORACLE_BOUND}"
        )


def mobius_oracle(n: int) -> int:
    """Mobius function by trial division: +1/-1 for squarefree n with an
    even/odd number of distinct prime factors, 0 if a square divides n."""
    _check_oracle_arg(n)
    distinct, _, squarefree = _factor_counts(n)
    if not squarefree:
        return 0
    return -1 if distinct % 2 else 1


def liouville_oracle(n: int) -> int:
    """Liouville function by trial division: (-1)**Omega(n), with Omega
    counting prime factors with multiplicity."""
    _check_oracle_arg(n)
    _, total, _ = _factor_counts(n)
    return -1 if total % 2 else 1


def sieve_block(lo: int, hi: int, *, primes: np.ndarray | None = None) -> SieveBlock:
    """Sieve Mobius and Liouville values for the whole range [lo, hi].

    Args:
        lo: First index, inclusive, >= 1.
        hi: Last index, inclusive, <= GLOBAL_SIEVE_BOUND.
        primes: Optional precomputed prime table covering at least
            sqrt(hi); passing one avoids re-sieving primes per block.
            Extra primes beyond sqrt(hi) are harmless.

    Returns:
        SieveBlock with int8 ``mu`` and ``lam`` arrays.
    """
    if lo < 1 or hi < lo:
        raise BoundError(f"invalid sieve range [{lo}, {hi}]")
    if hi > GLOBAL_SIEVE_BOUND:
        raise BoundError(f"sieve range end {hi} exceeds global bound {GLOBAL_SIEVE_BOUND}")
    width = hi - lo + 1
    if width > MAX_BLOCK_SIZE:
        raise CapacityError(f"block of {width} entries exceeds the {MAX_BLOCK_SIZE} limit")

    if primes is None:
        primes = primes_up_to(math.isqrt(hi))

    mu = np.ones(width, dtype=np.int8)
    # Parity of Omega(n); each division by a prime flips it.
    omega_parity = np.zeros(width, dtype=np.int8)
    # Product of prime powers divided out so far (the sqrt(hi)-smooth part).
    smooth = np.ones(width, dtype=np.int64)

    for p in primes:
        p = int(p)
        if p > hi:
            break
        first = ((lo + p - 1) // p) * p
        if first > hi:
            continue
        sl = slice(first - lo, width, p)
        mu[sl] = -mu[sl]
        omega_parity[sl] ^= 1
        smooth[sl] *= p
        q = p * p
        while q <= hi:
            first_q = ((lo + q - 1) // q) * q
            if first_q <= hi:
                sq = slice(first_q - lo, width, q)
                mu[sq] = 0
                omega_parity[sq] ^= 1
                smooth[sq] *= p
            q *= p

    # Whatever was not divided out is a single prime > sqrt(hi), power 1:
    # two such primes would multiply past hi.
    cofactor = np.arange(lo, hi + 1, dtype=np.int64) // smooth
    large = cofactor > 1
    mu[large] = -mu[large]
    omega_parity[large] ^= 1

    lam = np.where(omega_parity, -1, 1).astype(np.int8)
    mu.flags.writeable = False
    lam.flags.writeable = False
    return SieveBlock(lo=lo, hi=hi, mu=mu, lam=lam)


def iter_block_ranges(lo: int, hi: int, block_size: int):
    """Yield consecutive (start, end) pairs covering [lo, hi]."""
    start = lo
    while start <= hi:
        end = min(start + block_size - 1, hi)
        yield start, end
        start = end + 1
