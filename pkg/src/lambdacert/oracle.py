"""
Brute-force representation counting, kept deliberately separate from the DP engine.

Counts are exact (never capped) and come from top-down memoised subset
enumeration over (largest allowed item, remaining target).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from .errors import LimitExceeded
from .poly import Polynomial


@dataclass(frozen=True)
class OracleLimit:
    max_n: int = 10**6
    max_items: int = 64
    time_budget: float = 60.0

    def __post_init__(self):
        if self.max_n <= 0 or self.max_items <= 0 or self.time_budget <= 0:
            raise ValueError("oracle limits must be positive")


def _items(p: Polynomial, j0: int, n: int, limit: OracleLimit) -> list[int]:
    # values stop once p is increasing and past n; every allowed p satisfies this quickly
    items = []
    j = j0
    prev = None
    while True:
        v = p.eval_int(j)
        if v > n and prev is not None and v > prev:
            break
        if 0 <= v <= n and v not in items:
            items.append(v)
            if len(items) > limit.max_items:
                raise LimitExceeded(f"more than {limit.max_items} items <= {n}")
        prev = v
        j += 1
        if j - j0 > 10 * limit.max_items + 1000:
            break
    return sorted(items)


class _SubsetCounter:
    def __init__(self, items: list[int], limit: OracleLimit):
        self.items = items
        self.prefix = []
        total = 0
        for v in items:
            total += v
            self.prefix.append(total)
        self.memo: dict[tuple[int, int], int] = {}
        self.deadline = time.monotonic() + limit.time_budget
        self.calls = 0

    def count(self, i: int, r: int) -> int:
        """Subsets of items[0..i] summing to r."""
        if r == 0 and i < 0:
            return 1
        if i < 0 or r < 0 or r > self.prefix[i]:
            return 0
        key = (i, r)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.calls += 1
        if self.calls & 0xFFF == 0 and time.monotonic() > self.deadline:
            raise LimitExceeded("oracle time budget exhausted")
        v = self.items[i]
        res = self.count(i - 1, r) + (self.count(i - 1, r - v) if v <= r else 0)
        self.memo[key] = res
        return res


def rep_count_exact(p: Polynomial, j0: int, n: int, limit: OracleLimit = OracleLimit()) -> int:
    """Number of sets of distinct values p(j), j >= j0, summing to n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > limit.max_n:
        raise LimitExceeded(f"n = {n} exceeds max_n = {limit.max_n}")
    items = _items(p, j0, n, limit)
    return _SubsetCounter(items, limit).count(len(items) - 1, n)


def lambda_bruteforce(p: Polynomial, j0: int, cap: int, limit_n: int,
                      limit: OracleLimit = OracleLimit()) -> Optional[int]:
    """Largest n <= limit_n with fewer than ``cap`` representations, or None."""
    if limit_n > limit.max_n:
        raise LimitExceeded(f"limit {limit_n} exceeds max_n = {limit.max_n}")
    items = _items(p, j0, limit_n, limit)
    counter = _SubsetCounter(items, limit)
    top = len(items) - 1
    for n in range(limit_n, -1, -1):
        if counter.count(top, n) < cap:
            return n
    return None
