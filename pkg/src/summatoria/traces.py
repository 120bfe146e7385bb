"""Checkpointed summatory traces S(n) = sum_{k<=n} f(k).

Integer-valued sequences accumulate exactly (arbitrary-precision Python
ints fed by int64 block sums).  Real-valued sequences use compensated
accumulation: each block is summed with math.fsum (correctly rounded)
and blocks are merged through a Neumaier running sum, always in block
order so results are deterministic regardless of thread count.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, TextIO

import numpy as np

from . import sieve
from .sequences import (
    ArithmeticSequence,
    liouville_sequence,
    mobius_sequence,
    weighted_mobius_sequence,
)

EXACT_INTEGER = "exact-integer"
COMPENSATED_FLOAT = "compensated-float"


class NeumaierSum:
    """Running compensated sum (Neumaier's variant of Kahan summation).

    Tracks the rounding error of every addition in a second float, so
    accumulating 10**8 terms of mixed magnitude keeps near full precision.
    """

    __slots__ = ("_s", "_c")

    def __init__(self, value: float = 0.0):
        self._s = float(value)
        self._c = 0.0

    def add(self, x: float) -> None:
        s = self._s + x
        if abs(self._s) >= abs(x):
            self._c += (self._s - s) + x
        else:
            self._c += (x - s) + self._s
        self._s = s

    @property
    def value(self) -> float:
        return self._s + self._c


@dataclass(frozen=True)
class SummatoryTrace:
    """Values of S(n) at strictly increasing checkpoints."""

    checkpoints: np.ndarray
    values: np.ndarray
    accumulation_kind: str
    name: str = ""

    def __post_init__(self):
        if self.checkpoints.shape != self.values.shape:
            raise ValueError("checkpoints and values must have equal length")

    def __len__(self) -> int:
        return int(self.checkpoints.size)


def validate_checkpoints(checkpoints, N: int | None = None) -> np.ndarray:
    """Normalize a checkpoint schedule to an int64 array, enforcing that it
    is nonempty, strictly increasing, positive, and bounded by N."""
    cps = np.asarray(checkpoints, dtype=np.int64)
    if cps.ndim != 1 or cps.size == 0:
        raise ValueError("checkpoint schedule must be a nonempty 1-D sequence")
    if cps[0] < 1 or np.any(np.diff(cps) <= 0):
        raise ValueError("checkpoints must be strictly increasing positive integers")
    if N is not None and cps[-1] > N:
        raise ValueError(f"largest checkpoint {cps[-1]} exceeds N={N}")
    return cps


def geometric_checkpoints(N: int, start: int = 10, ratio: float = 2.0) -> np.ndarray:
    """Geometric checkpoint schedule start, start*ratio, ... capped at N."""
    if ratio <= 1.0:
        raise ValueError(f"geometric ratio must exceed 1, got {ratio}")
    if start < 1:
        raise ValueError(f"geometric start must be positive, got {start}")
    if start > N:
        raise ValueError(f"geometric start {start} exceeds N={N}")
    out = []
    x = float(start)
    while round(x) <= N:
        n = int(round(x))
        if not out or n > out[-1]:
            out.append(n)
        x *= ratio
    return np.asarray(out, dtype=np.int64)


def _ordered_map(fn, args_iter: Iterable[tuple], threads: int) -> Iterator:
    """Apply fn over args in order, optionally with a bounded thread pool.

    Results are yielded strictly in input order with at most threads + 1
    blocks in flight, keeping memory bounded for long streams.
    """
    if threads <= 1:
        for args in args_iter:
            yield fn(*args)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        it = iter(args_iter)
        pending = deque(
            pool.submit(fn, *args) for args in itertools.islice(it, threads + 1)
        )
        while pending:
            done = pending.popleft()
            nxt = next(it, None)
            if nxt is not None:
                pending.append(pool.submit(fn, *nxt))
            yield done.result()


def summatory_trace(
    seq: ArithmeticSequence,
    N: int,
    checkpoints=None,
    *,
    block_size: int | None = None,
    threads: int = 1,
) -> SummatoryTrace:
    """Stream a sequence once and record S(n) at every checkpoint.

    Args:
        seq: The sequence whose partial sums are wanted.
        N: Stream bound; checkpoints must not exceed it.
        checkpoints: Schedule; defaults to geometric ratio 2 from 10.
        block_size: Entries per streamed block (default 2**20, or the
            SUMMATORIA_BLOCK_SIZE environment variable).
        threads: Worker threads for block evaluation; accumulation stays
            sequential in block order, so results are thread-count
            independent.
    """
    if N > seq.bound:
        raise ValueError(f"N={N} exceeds the sequence bound {seq.bound}")
    if checkpoints is None:
        checkpoints = geometric_checkpoints(N)
    cps = validate_checkpoints(checkpoints, N)
    block_size = sieve.resolve_block_size(block_size)
    last = int(cps[-1])

    exact = seq.integer_valued
    out = np.empty(cps.size, dtype=np.int64 if exact else np.float64)
    filled = 0
    total_int = 0
    acc = NeumaierSum()

    ranges = list(sieve.iter_block_ranges(1, last, block_size))
    for (lo, hi), arr in zip(ranges, _ordered_map(seq.values, ranges, threads)):
        if exact and arr.dtype.kind == "f":
            arr = arr.astype(np.int64)
        hits = cps[(cps >= lo) & (cps <= hi)]
        if hits.size:
            run = np.cumsum(arr, dtype=np.int64 if exact else np.float64)
            at = run[hits - lo]
            if exact:
                out[filled : filled + hits.size] = total_int + at
            else:
                out[filled : filled + hits.size] = acc.value + at
            filled += hits.size
        if exact:
            total_int += int(arr.sum(dtype=np.int64))
        else:
            acc.add(math.fsum(arr.tolist()))

    kind = EXACT_INTEGER if exact else COMPENSATED_FLOAT
    return SummatoryTrace(checkpoints=cps, values=out, accumulation_kind=kind,
                          name=seq.name)


def mertens_trace(N: int, checkpoints=None, *, block_size: int | None = None,
                  threads: int = 1) -> SummatoryTrace:
    """M(n) = sum_{k<=n} mu(k) at each checkpoint, exactly."""
    return summatory_trace(mobius_sequence(N), N, checkpoints,
                           block_size=block_size, threads=threads)


def liouville_trace(N: int, checkpoints=None, *, block_size: int | None = None,
                    threads: int = 1) -> SummatoryTrace:
    """L(n) = sum_{k<=n} lambda(k) at each checkpoint, exactly."""
    return summatory_trace(liouville_sequence(N), N, checkpoints,
                           block_size=block_size, threads=threads)


def weighted_mobius_trace(N: int, checkpoints=None, *, block_size: int | None = None,
                          threads: int = 1) -> SummatoryTrace:
    """sum_{k<=n} mu(k)/k at each checkpoint, compensated."""
    return summatory_trace(weighted_mobius_sequence(N), N, checkpoints,
                           block_size=block_size, threads=threads)


def format_value(v, kind: str) -> str:
    """One CSV cell: exact integers without exponent, floats with 17
    significant digits."""
    if kind == EXACT_INTEGER:
        return str(int(v))
    return format(float(v), ".17g")


def write_trace_csv(trace: SummatoryTrace, out: TextIO) -> None:
    """Write a trace as CSV with header ``n,S`` and LF line endings."""
    out.write("n,S\n")
    for n, v in zip(trace.checkpoints, trace.values):
        out.write(f"{int(n)},{format_value(v, trace.accumulation_kind)}\n")
