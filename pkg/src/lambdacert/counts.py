"""
Capped representation counts: the coefficients of prod_{j>=j0} (1 + q^p(j)) up to q^K.

Two engines fill the table.  For C = 1 the table is a bit vector held in a
Python int and every item is one shifted OR.  For general C the table is a
numpy array of saturating counters, one vectorised sweep per item.  A sweep
reads only the pre-item values, which is what the downward in-place 0/1
subset-sum loop computes.
"""

from __future__ import annotations

import logging
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, TableTooShort
from .poly import Polynomial, positivity_cutoff

log = logging.getLogger(__name__)

DEFAULT_MEMORY_BUDGET = 2 * 1024**3
_CHUNK = 1 << 20


def counter_dtype(cap: int) -> np.dtype:
    for dt in (np.uint8, np.uint16, np.uint32, np.uint64):
        if cap <= np.iinfo(dt).max:
            return np.dtype(dt)
    raise ValueError(f"cap {cap} does not fit a 64-bit counter")


def estimate_bytes(k: int, cap: int, method: str = "auto") -> int:
    """Peak memory of a table build: bit vector plus shift temporaries, or counters plus one temp."""
    if _resolve(method, cap) == "bits":
        return 4 * ((k + 8) // 8)
    return 2 * (k + 1) * counter_dtype(cap).itemsize


def _resolve(method: str, cap: int) -> str:
    if method == "auto":
        return "bits" if cap == 1 else "counters"
    if method == "bits" and cap != 1:
        raise ValueError("the bit-vector engine only handles cap = 1")
    if method not in ("bits", "counters"):
        raise ValueError(f"unknown method {method!r}")
    return method


def sequence_values(p: Polynomial, j0: int, k: int) -> tuple[list[int], int]:
    """Values p(j) <= k for j >= j0 in index order, and the largest such j (j0 - 1 if none)."""
    grows_from = positivity_cutoff(p.shift(1) - p, j0)
    out = []
    j_max = j0 - 1
    j = j0
    while True:
        v = p.eval_int(j)
        if v <= k:
            if v < 0:
                raise ValueError(f"p({j}) = {v} is negative")
            out.append(v)
            j_max = j
        elif j >= grows_from:
            break
        j += 1
    return out, j_max


class CountTable:
    """Saturating counts ``min(cap, r(n))`` for ``0 <= n <= k``.

    Backed either by an int bit vector (``cap == 1``) or a numpy counter array.
    """

    def __init__(self, k: int, cap: int, j0: int, j_max: int, *, bits: Optional[int] = None,
                 array: Optional[np.ndarray] = None):
        self.k = k
        self.cap = cap
        self.j0 = j0
        self.j_max = j_max
        self._bits = bits
        self._array = array
        self._bytes: Optional[bytes] = None

    @property
    def engine(self) -> str:
        return "bits" if self._bits is not None else "counters"

    def __len__(self) -> int:
        return self.k + 1

    def __getitem__(self, n: int) -> int:
        if not 0 <= n <= self.k:
            raise IndexError(n)
        if self._array is not None:
            return int(self._array[n])
        if self._bytes is None:
            self._bytes = self._bits.to_bytes((self.k + 8) // 8, "little")
        return (self._bytes[n >> 3] >> (n & 7)) & 1

    def to_numpy(self) -> np.ndarray:
        if self._array is not None:
            return self._array.copy()
        raw = np.frombuffer(self._bits.to_bytes((self.k + 8) // 8, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.k + 1]

    def tolist(self) -> list[int]:
        return self.to_numpy().tolist()

    def largest_deficient(self, upto: Optional[int] = None) -> Optional[int]:
        """Largest n <= upto (default k) with count < cap, or None."""
        hi = self.k if upto is None else min(upto, self.k)
        if hi < 0:
            return None
        if self._bits is not None:
            inv = ~self._bits & ((1 << (hi + 1)) - 1)
            return inv.bit_length() - 1 if inv else None
        arr = self._array
        end = hi + 1
        while end > 0:
            start = max(0, end - _CHUNK)
            idx = np.flatnonzero(arr[start:end] < self.cap)
            if idx.size:
                return start + int(idx[-1])
            end = start
        return None

    def all_at_least(self, lo: int, hi: int) -> bool:
        """True iff count >= cap for every n in [lo, hi]; vacuous when lo > hi."""
        lo = max(lo, 0)
        if lo > hi:
            return True
        if hi > self.k:
            raise TableTooShort(f"table ends at {self.k}, range needs {hi}")
        if self._bits is not None:
            width = hi - lo + 1
            want = (1 << width) - 1
            return (self._bits >> lo) & want == want
        return bool(self._array[lo : hi + 1].min() >= self.cap)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CountTable):
            return NotImplemented
        return (self.k, self.cap) == (other.k, other.cap) and np.array_equal(self.to_numpy(), other.to_numpy())

    def __repr__(self) -> str:
        return f"CountTable(k={self.k}, cap={self.cap}, j0={self.j0}, j_max={self.j_max}, engine={self.engine})"


def _sweep_bits(values: Iterable[int], k: int) -> int:
    mask = (1 << (k + 1)) - 1
    bits = 1
    for v in values:
        bits |= (bits << v) & mask
    return bits


def _sweep_counters(values: Iterable[int], k: int, cap: int) -> np.ndarray:
    dt = counter_dtype(cap)
    counts = np.zeros(k + 1, dtype=dt)
    counts[0] = 1 if cap >= 1 else 0
    capv = dt.type(cap)
    for v in values:
        if v == 0:
            # doubling: min(cap, 2c) without overflow
            counts += np.minimum(counts, capv - counts)
            continue
        # sat_add(a, b) = a + min(b, cap - a) never exceeds cap, so no overflow
        room = capv - counts[v:]
        np.minimum(room, counts[:-v], out=room)
        counts[v:] += room
    return counts


def count_table(p: Polynomial, j0: int, cap: int, k: int, *, memory_budget: int = DEFAULT_MEMORY_BUDGET,
                method: str = "auto", order: Optional[Sequence[int]] = None) -> CountTable:
    """Build the capped count table for n in [0, k].

    ``order`` optionally permutes the item sweep (a list of positions into the
    value list); the result does not depend on it.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if k < 0:
        raise ValueError("k must be >= 0")
    engine = _resolve(method, cap)
    need = estimate_bytes(k, cap, engine)
    if need > memory_budget:
        raise BudgetExceeded(k, need, memory_budget)
    values, j_max = sequence_values(p, j0, k)
    if order is not None:
        values = [values[i] for i in order]
    log.debug("count_table k=%d cap=%d items=%d engine=%s", k, cap, len(values), engine)
    if engine == "bits":
        return CountTable(k, cap, j0, j_max, bits=_sweep_bits(values, k))
    return CountTable(k, cap, j0, j_max, array=_sweep_counters(values, k, cap))


def largest_deficient(table: CountTable) -> Optional[int]:
    return table.largest_deficient()
