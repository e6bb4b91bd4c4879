"""Sparse bivariate polynomials over Q(sqrt2), optionally Laurent in y.

A polynomial is a map from exponent pairs (i, j) to nonzero Scalars.
Polynomial mode requires i, j >= 0; LaurentY mode allows negative j but
still requires i >= 0.  Values are immutable after construction and all
operations are pure.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ModeViolation
from .scalars import ONE, Scalar


class Mode(Enum):
    POLY = "polynomial"
    LAURENT_Y = "laurent_y"


def _join_mode(a: Mode, b: Mode) -> Mode:
    return Mode.LAURENT_Y if Mode.LAURENT_Y in (a, b) else Mode.POLY


def monomial_key(exp: tuple[int, int]) -> tuple[int, int]:
    """Graded lexicographic order with x > y: compare (i+j, i)."""
    i, j = exp
    return (i + j, i)


class BiPoly:
    """Immutable sparse polynomial in x, y (y possibly Laurent)."""

    __slots__ = ("terms", "mode")

    def __init__(self, terms: Mapping[tuple[int, int], Scalar] | None = None,
                 mode: Mode = Mode.POLY):
        clean: dict[tuple[int, int], Scalar] = {}
        for (i, j), c in (terms or {}).items():
            c = Scalar.of(c)
            if not c:
                continue
            if i < 0:
                raise ModeViolation(f"negative x exponent in x^{i}*y^{j}")
            if j < 0 and mode is not Mode.LAURENT_Y:
                raise ModeViolation(f"negative y exponent y^{j} outside Laurent mode")
            clean[(i, j)] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "mode", mode)

    def __setattr__(self, name, value):
        raise AttributeError("BiPoly is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(mode: Mode = Mode.POLY) -> "BiPoly":
        return BiPoly({}, mode)

    @staticmethod
    def const(c, mode: Mode = Mode.POLY) -> "BiPoly":
        return BiPoly({(0, 0): Scalar.of(c)}, mode)

    @staticmethod
    def monomial(i: int, j: int, c=ONE, mode: Mode = Mode.POLY) -> "BiPoly":
        return BiPoly({(i, j): Scalar.of(c)}, mode)

    @staticmethod
    def var_x(mode: Mode = Mode.POLY) -> "BiPoly":
        return BiPoly.monomial(1, 0, ONE, mode)

    @staticmethod
    def var_y(mode: Mode = Mode.POLY) -> "BiPoly":
        return BiPoly.monomial(0, 1, ONE, mode)

    def with_mode(self, mode: Mode) -> "BiPoly":
        return self if mode is self.mode else BiPoly(self.terms, mode)

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0, 0)}

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0, 0), Scalar())

    def coefficient(self, i: int, j: int) -> Scalar:
        return self.terms.get((i, j), Scalar())

    def total_degree(self) -> int:
        """Max of i+j over stored terms (0 for the zero polynomial)."""
        if not self.terms:
            return 0
        return max(i + j for i, j in self.terms)

    def sorted_terms(self) -> list[tuple[tuple[int, int], Scalar]]:
        """Terms in descending graded-lex order, the canonical print order."""
        return sorted(self.terms.items(), key=lambda kv: monomial_key(kv[0]),
                      reverse=True)

    # -- equality -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "BiPoly") -> "BiPoly":
        mode = _join_mode(self.mode, other.mode)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            out[exp] = out.get(exp, Scalar()) + c
        return BiPoly(out, mode)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __neg__(self) -> "BiPoly":
        return BiPoly({e: -c for e, c in self.terms.items()}, self.mode)

    def __mul__(self, other) -> "BiPoly":
        if isinstance(other, (Scalar, int, Fraction)):
            c = Scalar.of(other)
            return BiPoly({e: v * c for e, v in self.terms.items()}, self.mode)
        mode = _join_mode(self.mode, other.mode)
        out: dict[tuple[int, int], Scalar] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                exp = (i1 + i2, j1 + j2)
                out[exp] = out.get(exp, Scalar()) + c1 * c2
        return BiPoly(out, mode)

    def __rmul__(self, other) -> "BiPoly":
        return self.__mul__(other)

    def __pow__(self, n: int) -> "BiPoly":
        if n < 0:
            raise ModeViolation("negative polynomial power")
        out = BiPoly.const(ONE, self.mode)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def diff(self, var: str) -> "BiPoly":
        """Exact partial derivative; Laurent powers of y follow the power rule."""
        out: dict[tuple[int, int], Scalar] = {}
        for (i, j), c in self.terms.items():
            if var == "x":
                if i != 0:
                    out[(i - 1, j)] = c * i
            elif var == "y":
                if j != 0:
                    out[(i, j - 1)] = c * j
            else:
                raise ValueError(f"unknown variable {var!r}")
        return BiPoly(out, self.mode)

    def subst(self, px: "BiPoly", py: "BiPoly") -> "BiPoly":
        """Substitute px for x and py for y (Polynomial mode only)."""
        if self.mode is not Mode.POLY:
            raise ModeViolation("substitution into a Laurent polynomial")
        mode = _join_mode(px.mode, py.mode)
        xpows: dict[int, BiPoly] = {0: BiPoly.const(ONE, mode)}
        ypows: dict[int, BiPoly] = {0: BiPoly.const(ONE, mode)}

        def power(cache, base, n):
            if n not in cache:
                cache[n] = power(cache, base, n - 1) * base
            return cache[n]

        out = BiPoly.zero(mode)
        for (i, j), c in self.sorted_terms():
            out = out + power(xpows, px, i) * power(ypows, py, j) * c
        return out

    # -- printing -----------------------------------------------------------

    def __str__(self) -> str:
        return poly_text(self)

    def __repr__(self) -> str:
        return f"BiPoly({poly_text(self)!r})"


def poly_text(p: BiPoly) -> str:
    """Canonical text form, parseable by the expression parser."""
    if not p.terms:
        return "0"
    pieces = []
    for (i, j), c in p.sorted_terms():
        pieces.append(_term_text(i, j, c))
    out = pieces[0]
    for piece in pieces[1:]:
        if piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


def _mono_text(i: int, j: int) -> str:
    parts = []
    if i == 1:
        parts.append("x")
    elif i != 0:
        parts.append(f"x^{i}")
    if j == 1:
        parts.append("y")
    elif j != 0:
        parts.append(f"y^{j}")
    return "*".join(parts)


def scalar_expr_text(c: Scalar, parenthesize_mixed: bool = True) -> str:
    """Render a scalar as an expression term (e.g. 3, -1/2, sqrt2, (1+sqrt2))."""
    if c.surd == 0:
        return _frac_text(c.rat)
    if c.rat == 0:
        return _surd_text(c.surd)
    sign = "+" if c.surd > 0 else "-"
    inner = f"{_frac_text(c.rat)}{sign}{_surd_text(abs(c.surd))}"
    return f"({inner})" if parenthesize_mixed else inner


def _frac_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _surd_text(q: Fraction) -> str:
    if q == 1:
        return "sqrt2"
    if q == -1:
        return "-sqrt2"
    return f"{_frac_text(q)}*sqrt2"


def _term_text(i: int, j: int, c: Scalar) -> str:
    mono = _mono_text(i, j)
    if not mono:
        return scalar_expr_text(c)
    if c == ONE:
        return mono
    if c == -ONE:
        return "-" + mono
    return f"{scalar_expr_text(c)}*{mono}"
