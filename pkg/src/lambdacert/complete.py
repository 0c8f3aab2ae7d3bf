"""Checkable conditions under which p(j0), p(j0+1), ... is a complete sequence."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

from .poly import Polynomial, positivity_cutoff


@dataclass(frozen=True)
class CompletenessReport:
    verdict: bool
    degree: int
    value_gcd: Optional[int]
    positivity_from: Optional[int]
    strictly_increasing_from: Optional[int]
    failures: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def value_gcd(p: Polynomial, j0: int) -> int:
    """gcd of p(j0), ..., p(j0 + deg p), which is the gcd of every value p(j), j >= j0."""
    g = 0
    for n in range(j0, j0 + max(p.degree, 0) + 1):
        g = math.gcd(g, p.eval_int(n))
    return g


def is_complete(p: Polynomial, j0: int) -> CompletenessReport:
    failures = []
    integral = p.is_integer_valued()
    if not integral:
        failures.append("not integer-valued")

    shape_ok = p.degree >= 1 and p.leading > 0
    if p.degree < 1:
        failures.append(f"degree {p.degree} < 1")
    elif p.leading <= 0:
        failures.append("leading coefficient is not positive")

    pos_from = inc_from = None
    if shape_ok:
        # for integer values, p(n) >= 1 is the same as p(n) > 0
        pos_from = positivity_cutoff(p, j0)
        if pos_from > j0:
            failures.append(f"not positive on [{j0}, {pos_from}); raise j0 to at least {pos_from}")
        inc_from = positivity_cutoff(p.shift(1) - p, j0)
        if inc_from > j0:
            failures.append(f"not strictly increasing on [{j0}, {inc_from}]; raise j0 to at least {inc_from}")

    g = None
    if integral:
        g = value_gcd(p, j0)
        if g != 1:
            failures.append(f"value gcd = {g}")

    return CompletenessReport(
        verdict=not failures,
        degree=p.degree,
        value_gcd=g,
        positivity_from=pos_from,
        strictly_increasing_from=inc_from,
        failures=failures,
    )
