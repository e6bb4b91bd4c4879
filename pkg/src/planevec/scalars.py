"""Exact arithmetic in the real quadratic field Q(sqrt2).

A scalar is a + b*sqrt2 with rational a, b.  ``fractions.Fraction`` keeps
numerators and denominators coprime with positive denominators, so equal
values always have identical representations and zero is uniquely (0, 0).
The field embeds in the reals, which gives an exact total order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DivisionByZero, ZeroDenominator

ScalarLike = "Scalar | Fraction | int"


@dataclass(frozen=True)
class Scalar:
    rat: Fraction = Fraction(0)
    surd: Fraction = Fraction(0)

    @staticmethod
    def of(value) -> "Scalar":
        """Promote an int or Fraction to a Scalar (Scalars pass through)."""
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return Scalar(Fraction(value))
        raise TypeError(f"cannot interpret {value!r} as a scalar")

    @staticmethod
    def sqrt2() -> "Scalar":
        return Scalar(Fraction(0), Fraction(1))

    @staticmethod
    def ratio(num: int, den: int) -> "Scalar":
        return Scalar(Fraction(num, den))

    # -- field operations -------------------------------------------------

    def __add__(self, other) -> "Scalar":
        other = Scalar.of(other)
        return Scalar(self.rat + other.rat, self.surd + other.surd)

    __radd__ = __add__

    def __sub__(self, other) -> "Scalar":
        other = Scalar.of(other)
        return Scalar(self.rat - other.rat, self.surd - other.surd)

    def __rsub__(self, other) -> "Scalar":
        return Scalar.of(other) - self

    def __neg__(self) -> "Scalar":
        return Scalar(-self.rat, -self.surd)

    def __mul__(self, other) -> "Scalar":
        other = Scalar.of(other)
        return Scalar(
            self.rat * other.rat + 2 * self.surd * other.surd,
            self.rat * other.surd + self.surd * other.rat,
        )

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        # 1/(a+b*sqrt2) = (a-b*sqrt2)/(a^2-2b^2); the norm vanishes only at 0
        # because sqrt2 is irrational.
        norm = self.rat * self.rat - 2 * self.surd * self.surd
        if norm == 0:
            raise DivisionByZero("scalar division by zero")
        return Scalar(self.rat / norm, -self.surd / norm)

    def __truediv__(self, other) -> "Scalar":
        return self * Scalar.of(other).inverse()

    def __rtruediv__(self, other) -> "Scalar":
        return Scalar.of(other) * self.inverse()

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- predicates and order ---------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.rat) or bool(self.surd)

    @property
    def is_rational(self) -> bool:
        return self.surd == 0

    def sign(self) -> int:
        """Exact sign of the real number a + b*sqrt2."""
        a, b = self.rat, self.surd
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: compare |a| with sqrt2*|b| via squares
        cmp = a * a - 2 * b * b
        if cmp == 0:
            # would mean sqrt2 = |a/b| rational
            raise AssertionError("unreachable: sqrt2 is irrational")
        bigger_rat = cmp > 0
        return (1 if a > 0 else -1) if bigger_rat else (1 if b > 0 else -1)

    def __lt__(self, other) -> bool:
        return (self - Scalar.of(other)).sign() < 0

    def __le__(self, other) -> bool:
        return (self - Scalar.of(other)).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - Scalar.of(other)).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - Scalar.of(other)).sign() >= 0

    # -- rendering ----------------------------------------------------------

    def exact_str(self) -> str:
        """Canonical exact form INT(/INT)?((+|-)INT(/INT)?*sqrt2)?."""
        out = _frac_str(self.rat)
        if self.surd:
            sign = "+" if self.surd > 0 else "-"
            out += f"{sign}{_frac_str(abs(self.surd))}*sqrt2"
        return out

    def __str__(self) -> str:
        return self.exact_str()


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


ZERO = Scalar()
ONE = Scalar(Fraction(1))
SQRT2 = Scalar.sqrt2()


def is_rational_ratio(alpha: Scalar, beta: Scalar) -> bool:
    """Decide exactly whether alpha/beta lies in Q.

    alpha/beta is rational iff (rat, surd) of alpha and beta are parallel
    as rational vectors, i.e. the cross product vanishes.
    """
    if not beta:
        raise ZeroDenominator("ratio against zero")
    return alpha.rat * beta.surd == alpha.surd * beta.rat
