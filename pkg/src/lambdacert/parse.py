"""
Polynomial expression parser and canonical renderer.

Grammar::

    expr   := term { ("+"|"-") term }
    term   := factor { ("*"|"/") factor }
    factor := atom [ "^" uint ]
    atom   := uint | "j" | "binomial" "(" expr "," expr ")" | "(" expr ")" | "-" atom

Note that unary minus binds tighter than ``^``, so ``-j^2`` is ``(-j)^2``.
The renderer therefore always writes an explicit coefficient on a negative
leading term (``-1*j^2``).
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import NamedTuple, Union

from .errors import LambdaError
from .poly import Polynomial

MAX_DEGREE = 512
MAX_DEPTH = 100
MAX_COEFF_BITS = 1 << 17


class ParseErrorKind(enum.Enum):
    UnexpectedToken = "UnexpectedToken"
    UnbalancedParen = "UnbalancedParen"
    NonConstantBinomialIndex = "NonConstantBinomialIndex"
    NonIntegerExponent = "NonIntegerExponent"
    DivisionByZero = "DivisionByZero"
    NonConstantDivisor = "NonConstantDivisor"
    VariableNotJ = "VariableNotJ"


class ParseError(LambdaError, ValueError):
    def __init__(self, kind: ParseErrorKind, position: int, message: str):
        self.kind = kind
        self.position = position
        self.message = message
        super().__init__(f"{kind.value} at byte {position}: {message}")


class _Tok(NamedTuple):
    kind: str  # NUM, IDENT, EOF, or the punctuation character itself
    text: bytes
    pos: int


_PUNCT = frozenset(b"+-*/^(),")
_SPACE = frozenset(b" \t\r\n\f\v")


def _tokenize(data: bytes) -> list[_Tok]:
    toks = []
    i, n = 0, len(data)
    while i < n:
        ch = data[i]
        if ch in _SPACE:
            i += 1
        elif 48 <= ch <= 57:
            start = i
            while i < n and 48 <= data[i] <= 57:
                i += 1
            toks.append(_Tok("NUM", data[start:i], start))
        elif (65 <= ch <= 90) or (97 <= ch <= 122) or ch == 95:
            start = i
            while i < n and ((65 <= data[i] <= 90) or (97 <= data[i] <= 122) or data[i] == 95 or 48 <= data[i] <= 57):
                i += 1
            toks.append(_Tok("IDENT", data[start:i], start))
        elif ch in _PUNCT:
            toks.append(_Tok(chr(ch), data[i : i + 1], i))
            i += 1
        else:
            raise ParseError(ParseErrorKind.UnexpectedToken, i, f"unexpected byte 0x{ch:02x}")
    toks.append(_Tok("EOF", b"", n))
    return toks


class _Parser:
    def __init__(self, data: bytes):
        self.toks = _tokenize(data)
        self.i = 0
        self.depth = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, kind: ParseErrorKind, msg: str, tok: _Tok | None = None):
        raise ParseError(kind, (tok or self.tok).pos, msg)

    def unexpected(self):
        t = self.tok
        if t.kind == "EOF":
            self.fail(ParseErrorKind.UnexpectedToken, "unexpected end of input")
        if t.kind == ")":
            self.fail(ParseErrorKind.UnbalancedParen, "unmatched ')'")
        self.fail(ParseErrorKind.UnexpectedToken, f"unexpected {t.text.decode('latin-1')!r}")

    def expect_close(self, open_tok: _Tok):
        if self.tok.kind != ")":
            if self.tok.kind == "EOF":
                self.fail(ParseErrorKind.UnbalancedParen, "missing ')'", open_tok)
            self.unexpected()
        self.advance()

    def parse(self) -> Polynomial:
        p = self.expr()
        if self.tok.kind != "EOF":
            self.unexpected()
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.advance()
            q = self.term()
            p = p + q if op.kind == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.tok.kind in ("*", "/"):
            op = self.advance()
            at = self.tok
            q = self.factor()
            if op.kind == "*":
                if p.degree + q.degree > MAX_DEGREE:
                    self.fail(ParseErrorKind.UnexpectedToken, f"degree exceeds {MAX_DEGREE}", op)
                p = p * q
                _check_size(p, op)
            else:
                if not q.is_constant():
                    self.fail(ParseErrorKind.NonConstantDivisor, "divisor must be a constant", at)
                if q.is_zero():
                    self.fail(ParseErrorKind.DivisionByZero, "division by zero", at)
                p = p.scale(1 / q.coeffs[0])
        return p

    def factor(self) -> Polynomial:
        base = self.atom()
        if self.tok.kind == "^":
            caret = self.advance()
            t = self.tok
            if t.kind != "NUM":
                self.fail(ParseErrorKind.NonIntegerExponent, "exponent must be a nonnegative integer literal")
            self.advance()
            if len(t.text) > 1000:
                self.fail(ParseErrorKind.NonIntegerExponent, "exponent literal too long", t)
            e = int(t.text)
            if max(base.degree, 1) * e > MAX_DEGREE and not base.is_constant():
                self.fail(ParseErrorKind.NonIntegerExponent, f"degree exceeds {MAX_DEGREE}", t)
            if base.is_constant() and base.coeffs:
                c = base.coeffs[0]
                bits = max(abs(c.numerator).bit_length(), c.denominator.bit_length())
                if bits * e > MAX_COEFF_BITS:
                    self.fail(ParseErrorKind.NonIntegerExponent, "power too large", t)
            base = base**e
            _check_size(base, caret)
        return base

    def atom(self) -> Polynomial:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self.fail(ParseErrorKind.UnexpectedToken, "expression nested too deeply")
        try:
            return self._atom()
        finally:
            self.depth -= 1

    def _atom(self) -> Polynomial:
        t = self.tok
        if t.kind == "NUM":
            self.advance()
            if len(t.text) > 1000:
                self.fail(ParseErrorKind.UnexpectedToken, "integer literal too long", t)
            return Polynomial.constant(int(t.text))
        if t.kind == "-":
            self.advance()
            return -self.atom()
        if t.kind == "(":
            self.advance()
            p = self.expr()
            self.expect_close(t)
            return p
        if t.kind == "IDENT":
            name = t.text
            if name == b"j":
                self.advance()
                return Polynomial.monomial(1)
            if name == b"binomial":
                return self.binomial()
            self.fail(ParseErrorKind.VariableNotJ, f"unknown name {name.decode('latin-1')!r}; the variable is 'j'")
        self.unexpected()

    def binomial(self) -> Polynomial:
        self.advance()
        if self.tok.kind != "(":
            self.unexpected()
        open_tok = self.advance()
        top = self.expr()
        if self.tok.kind != ",":
            if self.tok.kind == "EOF":
                self.fail(ParseErrorKind.UnbalancedParen, "missing ')'", open_tok)
            self.unexpected()
        self.advance()
        at = self.tok
        k = self.expr()
        self.expect_close(open_tok)
        if not k.is_constant() or (k.coeffs and k.coeffs[0].denominator != 1) or (k.coeffs and k.coeffs[0] < 0):
            self.fail(ParseErrorKind.NonConstantBinomialIndex, "binomial index must be a constant nonnegative integer", at)
        kk = int(k.coeffs[0]) if k.coeffs else 0
        if max(top.degree, 1) * kk > MAX_DEGREE:
            self.fail(ParseErrorKind.NonConstantBinomialIndex, f"degree exceeds {MAX_DEGREE}", at)
        out = Polynomial.binomial(top, kk)
        _check_size(out, at)
        return out


def _check_size(p: Polynomial, tok: _Tok) -> None:
    for c in p.coeffs:
        if abs(c.numerator).bit_length() > MAX_COEFF_BITS or c.denominator.bit_length() > MAX_COEFF_BITS:
            raise ParseError(ParseErrorKind.UnexpectedToken, tok.pos, "coefficient too large")


def parse_poly(text: Union[str, bytes]) -> Polynomial:
    """Parse an expression in ``j`` into an exact :class:`Polynomial`.

    >>> parse_poly("binomial(j+2,2)").coeffs
    (Fraction(1, 1), Fraction(3, 2), Fraction(1, 2))
    """
    data = text.encode("utf-8") if isinstance(text, str) else bytes(text)
    return _Parser(data).parse()


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_poly(p: Polynomial, var: str = "j") -> str:
    """Canonical text: descending powers, ``a/b`` coefficients, explicit ``*`` and ``^``."""
    if p.is_zero():
        return "0"
    out = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else var if i == 1 else f"{var}^{i}"
        mag = abs(c)
        if not mono:
            body = _frac(mag)
        elif mag == 1 and (out or c > 0):
            body = mono
        else:
            body = f"{_frac(mag)}*{mono}"
        if not out:
            out.append(body if c > 0 else "-" + body)
        else:
            out.append((" + " if c > 0 else " - ") + body)
    return "".join(out)
