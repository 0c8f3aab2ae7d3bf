"""
Exact univariate polynomials over the rationals.

A polynomial is stored as a tuple of :class:`fractions.Fraction` coefficients,
index ``i`` holding the coefficient of ``j**i``.  Trailing zeros are stripped,
so the zero polynomial is the empty tuple.

>>> p = Polynomial([1, Fraction(3, 2), Fraction(1, 2)])
>>> p.eval_int(5)
21
>>> shift(Polynomial.monomial(2), -3).coeffs
(Fraction(9, 1), Fraction(-6, 1), Fraction(1, 1))
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import NonIntegerValue, NotEventuallyPositive

Rational = Union[int, Fraction]


@dataclass(frozen=True, init=False)
class Polynomial:
    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[Rational] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def constant(cls, c: Rational) -> Polynomial:
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c: Rational = 1) -> Polynomial:
        return cls([0] * k + [c])

    @classmethod
    def binomial(cls, top: Polynomial, k: int) -> Polynomial:
        """``top*(top-1)*...*(top-k+1) / k!`` as a polynomial."""
        if k < 0:
            raise ValueError("binomial index must be nonnegative")
        out = cls.constant(1)
        for i in range(k):
            out = out * (top - i)
        return out.scale(Fraction(1, math.factorial(k)))

    # -- structure --------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @functools.cached_property
    def _cleared(self) -> tuple[tuple[int, ...], int]:
        # integer coefficients and the positive common denominator
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return tuple(int(c * den) for c in self.coeffs), den

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: Polynomial | Rational) -> Polynomial:
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other: Polynomial | Rational) -> Polynomial:
        return self + (-_coerce(other))

    def __rsub__(self, other: Rational) -> Polynomial:
        return _coerce(other) - self

    def __mul__(self, other: Polynomial | Rational) -> Polynomial:
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for k, b in enumerate(other.coeffs):
                out[i + k] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Polynomial:
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = Polynomial.constant(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scale(self, c: Rational) -> Polynomial:
        c = Fraction(c)
        return Polynomial(x * c for x in self.coeffs)

    def shift(self, a: int) -> Polynomial:
        """Return q with q(j) = p(j + a)."""
        # Horner in the polynomial ring: p(j+a) = (...(c_d (j+a) + c_{d-1})(j+a) ...)
        lin = Polynomial([a, 1])
        out = Polynomial()
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    # -- evaluation -------------------------------------------------------

    def eval(self, n: Rational) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def eval_int(self, n: int) -> int:
        ints, den = self._cleared
        acc = 0
        for c in reversed(ints):
            acc = acc * n + c
        q, r = divmod(acc, den)
        if r:
            raise NonIntegerValue(f"p({n}) = {Fraction(acc, den)} is not an integer")
        return q

    def sign_at(self, n: int) -> int:
        """Sign of p(n) for integer n, computed without fractions."""
        ints, _ = self._cleared
        acc = 0
        for c in reversed(ints):
            acc = acc * n + c
        return (acc > 0) - (acc < 0)

    def __call__(self, n: Rational) -> Fraction:
        return self.eval(n)

    # -- integrality ------------------------------------------------------

    def newton_coeffs(self) -> tuple[Fraction, ...]:
        """Coefficients b_k with p(j) = sum_k b_k * binomial(j, k)."""
        d = self.degree
        if d < 0:
            return ()
        row = [self.eval(i) for i in range(d + 1)]
        out = []
        for _ in range(d + 1):
            out.append(row[0])
            row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
        return tuple(out)

    @classmethod
    def from_newton(cls, bs: Sequence[Rational]) -> Polynomial:
        out = Polynomial()
        j = Polynomial.monomial(1)
        for k, b in enumerate(bs):
            if b:
                out = out + Polynomial.binomial(j, k).scale(b)
        return out

    def is_integer_valued(self) -> bool:
        return all(b.denominator == 1 for b in self.newton_coeffs())

    def __str__(self) -> str:
        from .parse import render_poly

        return render_poly(self)


def _coerce(x: Polynomial | Rational) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial.constant(x)


# -- spec-level operations ------------------------------------------------


def evaluate(p: Polynomial, n: Rational) -> Fraction:
    return p.eval(n)


def eval_int(p: Polynomial, n: int) -> int:
    return p.eval_int(n)


def shift(p: Polynomial, a: int) -> Polynomial:
    return p.shift(a)


def sub(p: Polynomial, q: Polynomial) -> Polynomial:
    return p - q


def scale(p: Polynomial, c: Rational) -> Polynomial:
    return p.scale(c)


def is_integer_valued(p: Polynomial) -> bool:
    return p.is_integer_valued()


def _ceil_root(x: Fraction, k: int) -> int:
    """Smallest nonnegative integer r with r**k >= x."""
    if x <= 0:
        return 0
    target = math.ceil(x)
    if k == 1:
        return target
    # integer Newton iteration for floor(target ** (1/k)), starting above the root
    r = 1 << -(-target.bit_length() // k)
    while True:
        nxt = ((k - 1) * r + target // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    return r if r**k >= target else r + 1


def cauchy_bound(p: Polynomial) -> int:
    """Integer B with |z| <= B for every complex root z of p."""
    lead = abs(p.leading)
    return math.ceil(1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0)))


def fujiwara_bound(p: Polynomial) -> int:
    """Integer upper bound on root moduli, 2*max |c_{d-i}/c_d|^(1/i) (last term halved)."""
    d = p.degree
    lead = abs(p.leading)
    best = 0
    for i in range(1, d + 1):
        ratio = abs(p.coeffs[d - i]) / lead
        if i == d:
            ratio /= 2
        best = max(best, _ceil_root(ratio, i))
    return 2 * best


def root_bound(p: Polynomial) -> int:
    """The tighter of the Cauchy and Fujiwara bounds; 0 for constants."""
    if p.degree < 1:
        return 0
    return min(cauchy_bound(p), fujiwara_bound(p))


def positivity_cutoff(p: Polynomial, floor: int) -> int:
    """Least m >= floor such that p(n) > 0 for every integer n >= m.

    Raises NotEventuallyPositive unless the leading coefficient is positive.
    """
    if p.leading <= 0:
        raise NotEventuallyPositive(f"leading coefficient of {p} is not positive")
    if p.degree == 0:
        return floor
    bound = root_bound(p)
    # every real root lies in [-bound, bound], so p > 0 on (bound, inf)
    m = max(bound + 1, floor)
    while m - 1 >= floor and p.sign_at(m - 1) > 0:
        m -= 1
    return m
