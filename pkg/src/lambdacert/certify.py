"""
Explore-then-certify computation of lambda_{j0,C}(p).

The exploration phase guesses N0 from a truncated count table.  The proof
phase derives two polynomials in N,

    d1(N) = p(N) - p(N-t) - N0        (must be >= 0)
    d2(N) = 2 p(N-t) - p(N+1)         (must be  > 0)

finds the cutoff n1 past which both hold, and checks every n in
(N0, p(n1)] directly in the table.  Any y > p(n1) then splits as
(y - p(N-t)) + p(N-t) with N0 < y - p(N-t) < p(N-t), so representations of
the smaller part extend to y.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, fields, replace
from typing import Optional

from .complete import is_complete
from .counts import DEFAULT_MEMORY_BUDGET, CountTable, count_table, estimate_bytes
from .errors import BudgetExceeded, LambdaError, NotComplete, NotEventuallyPositive, TableTooShort, UnverifiedCertificate
from .parse import ParseError, parse_poly, render_poly
from .poly import Polynomial, positivity_cutoff, root_bound

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Limits:
    offset: int = 3
    initial_k: Optional[int] = None
    max_k: int = 2**31
    memory_budget: int = DEFAULT_MEMORY_BUDGET

    def __post_init__(self):
        if self.offset < 1:
            raise ValueError("offset must be >= 1")
        if self.initial_k is not None and self.initial_k < 1:
            raise ValueError("initial_k must be >= 1")
        if self.initial_k is not None and self.max_k < self.initial_k:
            raise ValueError("max_k must be >= initial_k")


@dataclass(frozen=True)
class CutoffWitness:
    offset_t: int
    d1: Polynomial
    d2: Polynomial
    n1: int
    root_bound: int


@dataclass(frozen=True)
class ProofCertificate:
    polynomial: str
    j0: int
    reps: int
    offset: int
    lam: Optional[int]
    n1: Optional[int]
    d1: str
    d2: str
    root_bound: int
    base_case_max: int
    k_explored: int
    lambda_deficiency: Optional[int]
    verified: bool = False

    @property
    def witness(self) -> CutoffWitness:
        return CutoffWitness(self.offset, parse_poly(self.d1), parse_poly(self.d2), self.n1, self.root_bound)

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            key = "lambda" if f.name == "lam" else f.name
            out[key] = _encode_int(getattr(self, f.name))
        return out

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict) -> ProofCertificate:
        names = [f.name for f in fields(cls)]
        keys = ["lambda" if n == "lam" else n for n in names]
        if set(data) != set(keys):
            raise ValueError(f"certificate fields must be exactly {sorted(keys)}")
        kw = {}
        for name, key in zip(names, keys):
            val = data[key]
            if name in ("polynomial", "d1", "d2"):
                if not isinstance(val, str):
                    raise ValueError(f"{key} must be a string")
            elif name == "verified":
                if not isinstance(val, bool):
                    raise ValueError("verified must be a boolean")
            else:
                val = _decode_int(key, val, nullable=name in ("lam", "n1", "lambda_deficiency"))
            kw[name] = val
        return cls(**kw)

    @classmethod
    def from_json(cls, text: str) -> ProofCertificate:
        return cls.from_dict(json.loads(text))


def _encode_int(v):
    if isinstance(v, int) and not isinstance(v, bool) and not -(2**63) <= v < 2**63:
        return str(v)
    return v


def _decode_int(key: str, v, nullable: bool):
    if v is None and nullable:
        return None
    if isinstance(v, bool):
        raise ValueError(f"{key} must be an integer")
    if isinstance(v, int):
        return v
    if isinstance(v, str) and v.lstrip("-").isdigit():
        return int(v)
    raise ValueError(f"{key} must be an integer")


# -- exploration ----------------------------------------------------------


def initial_k(p: Polynomial, j0: int) -> int:
    return max(1024, 4 * p.eval_int(j0 + 8))


def _required_detail(p: Polynomial, j0: int, n0: Optional[int], offset: int) -> str:
    """Lower bound on the table the proof will need, from a (genuinely deficient) candidate."""
    if n0 is None:
        return ""
    try:
        n1 = cutoff(p, j0, n0, offset).n1
    except NotEventuallyPositive:
        return f"lambda >= {n0}"
    need = max(p.eval_int(n1), 2 * n0)
    return f"lambda >= {n0}, so at least {need} table entries are required"


def explore(p: Polynomial, j0: int, cap: int, cfg: Limits = Limits()) -> tuple[Optional[int], CountTable]:
    """Double K until the largest deficient entry sits in the lower half of the table."""
    k = min(cfg.initial_k or initial_k(p, j0), cfg.max_k)
    candidate = None
    while True:
        try:
            table = count_table(p, j0, cap, k, memory_budget=cfg.memory_budget)
        except BudgetExceeded as exc:
            raise BudgetExceeded(exc.required_k, exc.required_bytes, exc.budget,
                                 _required_detail(p, j0, candidate, cfg.offset)) from None
        candidate = table.largest_deficient()
        log.info("explore K=%d candidate=%s", k, candidate)
        if candidate is None or 2 * candidate <= k:
            return candidate, table
        if k >= cfg.max_k:
            nxt = 2 * k
            raise BudgetExceeded(nxt, estimate_bytes(nxt, cap), cfg.memory_budget,
                                 f"exploration needs K > max_k = {cfg.max_k}; "
                                 + _required_detail(p, j0, candidate, cfg.offset))
        k = min(2 * k, cfg.max_k)


# -- the proof ------------------------------------------------------------


def derived_polys(p: Polynomial, n0: Optional[int], t: int) -> tuple[Polynomial, Polynomial]:
    base = -1 if n0 is None else n0
    back = p.shift(-t)
    return p - back - base, back.scale(2) - p.shift(1)


def cutoff(p: Polynomial, j0: int, n0: Optional[int], t: int) -> CutoffWitness:
    """Cutoff n1 with d1(N) >= 0 and d2(N) > 0 for every integer N >= n1, and n1 - t >= j0."""
    if t < 1:
        raise ValueError("offset must be >= 1")
    d1, d2 = derived_polys(p, n0, t)
    # d1 >= 0 over the integers is d1 + 1 > 0 once d1 is integer-valued
    strict = d1 + 1
    n1 = max(positivity_cutoff(strict, j0 + t), positivity_cutoff(d2, j0 + t))
    return CutoffWitness(t, d1, d2, n1, max(root_bound(strict), root_bound(d2)))


def base_case_check(table: CountTable, n0: Optional[int], base_case_max: int, cap: int) -> bool:
    """Every n in (n0, base_case_max] has at least ``cap`` representations."""
    if table.k < base_case_max:
        raise TableTooShort(f"table ends at {table.k} but base cases reach {base_case_max}")
    if table.cap != cap:
        raise ValueError("table cap differs from the requested representation count")
    lo = 0 if n0 is None else n0 + 1
    return table.all_at_least(lo, base_case_max)


def prove_lambda(p: Polynomial, j0: int, cap: int, cfg: Limits = Limits()) -> ProofCertificate:
    report = is_complete(p, j0)
    if not report.verdict:
        raise NotComplete(report)
    n0, table = explore(p, j0, cap, cfg)
    t = cfg.offset
    while True:
        w = cutoff(p, j0, n0, t)
        bcm = p.eval_int(w.n1)
        if bcm > table.k:
            log.info("extending table to p(n1) = %d", bcm)
            try:
                table = count_table(p, j0, cap, bcm, memory_budget=cfg.memory_budget)
            except BudgetExceeded as exc:
                raise BudgetExceeded(exc.required_k, exc.required_bytes, exc.budget,
                                     f"base cases reach p({w.n1}) = {bcm}") from None
        if base_case_check(table, n0, bcm, cap):
            break
        # the guess was too small: a larger deficient integer sits among the base cases
        n0 = table.largest_deficient(upto=bcm)
        log.info("base cases failed; new candidate %d", n0)

    cert = ProofCertificate(
        polynomial=render_poly(p),
        j0=j0,
        reps=cap,
        offset=t,
        lam=n0,
        n1=w.n1,
        d1=render_poly(w.d1),
        d2=render_poly(w.d2),
        root_bound=w.root_bound,
        base_case_max=bcm,
        k_explored=table.k,
        lambda_deficiency=None if n0 is None else table[n0],
        verified=False,
    )
    reason = check_certificate(cert, memory_budget=cfg.memory_budget)
    if reason is not None:
        raise LambdaError(f"self-check of the certificate failed: {reason}")
    return replace(cert, verified=True)


# -- verification ---------------------------------------------------------


def check_certificate(cert: ProofCertificate, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> Optional[str]:
    """Re-derive every clause from scratch; return the first failing clause or None.

    The ``verified`` flag itself is not consulted.  The table is rebuilt with
    the counter engine whatever the cap, so the C = 1 bit-vector path is never
    trusted on its own.
    """
    if not isinstance(cert.j0, int) or cert.j0 < 0:
        return "j0 must be a nonnegative integer"
    if cert.reps < 1:
        return "reps must be >= 1"
    if cert.offset < 1:
        return "offset must be >= 1"
    try:
        p = parse_poly(cert.polynomial)
    except ParseError as exc:
        return f"polynomial does not parse: {exc}"
    if render_poly(p) != cert.polynomial:
        return "polynomial is not in canonical form"
    report = is_complete(p, cert.j0)
    if not report.verdict:
        return "sequence not complete: " + "; ".join(report.failures)
    if cert.lam is not None and cert.lam < 0:
        return "lambda must be nonnegative"
    if cert.lam is None and cert.reps > 1:
        return "lambda absent but 0 has a single representation"

    try:
        w = cutoff(p, cert.j0, cert.lam, cert.offset)
    except NotEventuallyPositive as exc:
        return f"cutoff does not exist: {exc}"
    if cert.d1 != render_poly(w.d1):
        return f"d1 mismatch: expected {render_poly(w.d1)}"
    if cert.d2 != render_poly(w.d2):
        return f"d2 mismatch: expected {render_poly(w.d2)}"
    if cert.root_bound != w.root_bound:
        return f"root bound mismatch: expected {w.root_bound}"
    if cert.n1 != w.n1:
        return f"n1 mismatch: expected {w.n1}"
    if cert.n1 - cert.offset < cert.j0:
        return "n1 - offset < j0"
    if cert.base_case_max != p.eval_int(cert.n1):
        return f"base_case_max must equal p(n1) = {p.eval_int(cert.n1)}"
    if cert.lam is not None and not cert.lam < cert.base_case_max:
        return "lambda >= base_case_max"
    if cert.k_explored < cert.base_case_max:
        return "k_explored < base_case_max"
    if cert.lam is None:
        if cert.lambda_deficiency is not None:
            return "lambda_deficiency given without lambda"
    elif cert.lambda_deficiency is None or not 0 <= cert.lambda_deficiency < cert.reps:
        return "lambda_deficiency must lie in [0, reps)"

    try:
        table = count_table(p, cert.j0, cert.reps, cert.base_case_max, memory_budget=memory_budget,
                            method="counters")
    except BudgetExceeded as exc:
        return f"cannot recompute the table: {exc}"
    if cert.lam is not None and table[cert.lam] != cert.lambda_deficiency:
        return f"count at lambda is {table[cert.lam]}, certificate says {cert.lambda_deficiency}"
    if not base_case_check(table, cert.lam, cert.base_case_max, cert.reps):
        bad = table.largest_deficient(upto=cert.base_case_max)
        return f"base case fails: {bad} has fewer than {cert.reps} representations"
    return None


def verify_certificate(cert: ProofCertificate, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> bool:
    if not cert.verified:
        log.warning("certificate is not marked verified")
        return False
    reason = check_certificate(cert, memory_budget)
    if reason is not None:
        log.warning("certificate rejected: %s", reason)
        return False
    return True


# -- human-readable proof -------------------------------------------------


def render_proof(cert: ProofCertificate) -> str:
    if not cert.verified:
        raise UnverifiedCertificate("refusing to render an unverified certificate")
    p = parse_poly(cert.polynomial)
    t = cert.offset
    c = cert.reps
    d1 = render_poly(parse_poly(cert.d1), "N")
    d2 = render_poly(parse_poly(cert.d2), "N")
    ways = "way" if c == 1 else "ways"
    lines = [f"Let p(j) = {cert.polynomial}, j0 = {cert.j0}, C = {c}."]
    if cert.lam is None:
        lines += [
            "",
            f"Theorem. Every nonnegative integer has at least {c} representation(s) as a sum of distinct "
            f"values p(j), j >= {cert.j0}; no exceptional integer exists.",
        ]
        low, base0 = -1, 0
    else:
        lines += [
            "",
            f"Theorem. lambda = {cert.lam}: the integer {cert.lam} is a sum of distinct values p(j), "
            f"j >= {cert.j0}, in exactly {cert.lambda_deficiency} {'way' if cert.lambda_deficiency == 1 else 'ways'} "
            f"(< {c}), and every y > {cert.lam} is such a sum in at least {c} {ways}.",
        ]
        low, base0 = cert.lam, cert.lam + 1
    n1 = cert.n1
    lines += [
        "",
        f"Proof. Put t = {t} and let S(y) say that y has at least {c} such {ways}.",
        "",
        f"(1) p(N) - p(N-{t}) - ({low}) = {d1} >= 0 for every integer N >= N1,",
        f"(2) 2*p(N-{t}) - p(N+1) = {d2} > 0 for every integer N >= N1,",
        f"with N1 = {n1}. Both polynomials have no real root of modulus above {cert.root_bound}, "
        f"and every integer from N1 up to that bound was checked. Also N1 - t = {n1 - t} >= j0.",
        "",
        f"Base cases: the coefficients of q^n in prod_(j >= {cert.j0}) (1 + q^p(j)) were computed for "
        f"n = {base0} .. {cert.base_case_max} (= p(N1)); each is at least {c}.",
        "",
        f"Induction: take y > {cert.base_case_max} and assume S(y') for {low} < y' < y. Since p is strictly "
        f"increasing there is a unique N with p(N) < y <= p(N+1), and N >= N1. Let z = y - p(N-{t}). Then",
        f"  z > p(N) - p(N-{t}) >= {low}            by (1),",
        f"  z <= p(N+1) - p(N-{t}) < p(N-{t})       by (2).",
        f"So S(z) holds, and since every part of a representation of z is below p(N-{t}), adding the part "
        f"p(N-{t}) to each of them gives {c} distinct representation{'s' if c != 1 else ''} of y. Hence S(y) for all y > {low}.",
    ]
    if cert.lam is not None:
        lines.append(f"Together with the count at {cert.lam}, this proves lambda_{{{cert.j0},{c}}}(p) = {cert.lam}.")
    lines.append("QED")
    return "\n".join(lines) + "\n"
