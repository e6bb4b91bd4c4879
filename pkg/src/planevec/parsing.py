"""Recursive-descent parser for polynomial and vector-field expressions.

Grammar (whitespace ignored, `^` binds tightest, `*` explicit or implicit):

    scalar   := INT | INT/INT | sqrt2
    polyatom := scalar | x | y | ( expr )
    vecatom  := dx | dy | E | D[int,int] | delta[expr,expr]
    factor   := (polyatom | vecatom) ['^' ['-'] INT]
    product  := factor {['*'] factor}
    expr     := ['-'] product {('+'|'-') product}

A product may contain at most one vector atom; multiplying it by polynomial
factors scales the field.  Negative exponents are accepted on y only, and
only when Laurent mode is enabled.  Automorphism literals have the fixed
shape auto(x->expr, y->expr; inverse x->expr, y->expr).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import ModeViolation, ParseError
from .poly import BiPoly, Mode
from .scalars import Scalar
from .vecfield import (
    Derivation,
    GradedForm,
    PolyAutomorphism,
    basis_field,
    euler_field,
    from_graded,
    in_lattice,
    toral_field,
)

Value = Union[BiPoly, Derivation]

_SYMBOLS = set("+-*/^()[],;")


@dataclass(frozen=True)
class Token:
    kind: str  # "INT" | "NAME" | "SYM" | "ARROW" | "END"
    text: str
    pos: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("INT", source[i:j], i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(Token("NAME", source[i:j], i))
            i = j
            continue
        if ch == "-" and i + 1 < n and source[i + 1] == ">":
            tokens.append(Token("ARROW", "->", i))
            i += 2
            continue
        if ch in _SYMBOLS:
            tokens.append(Token("SYM", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i, source)
    tokens.append(Token("END", "", n))
    return tokens


class _Parser:
    def __init__(self, source: str, allow_laurent: bool = False):
        self.source = source
        self.tokens = tokenize(source)
        self.idx = 0
        self.allow_laurent = allow_laurent
        self.mode = Mode.LAURENT_Y if allow_laurent else Mode.POLY

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.idx]

    def advance(self) -> Token:
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        tok = self.peek()
        if tok.kind == kind and (text is None or tok.text == text):
            return self.advance()
        return None

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        tok = self.accept(kind, text)
        if tok is None:
            got = self.peek()
            want = text if text is not None else kind
            raise ParseError(f"expected {want!r}, found {got.text or 'end of input'!r}",
                             got.pos, self.source)
        return tok

    def fail(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.pos, self.source)

    # -- expression grammar --------------------------------------------------

    def parse_expr(self) -> Value:
        negate = False
        if self.accept("SYM", "-"):
            negate = True
        else:
            self.accept("SYM", "+")
        value = self.parse_product()
        if negate:
            value = -value
        while True:
            if self.accept("SYM", "+"):
                value = self._combine_add(value, self.parse_product(), subtract=False)
            elif self.accept("SYM", "-"):
                value = self._combine_add(value, self.parse_product(), subtract=True)
            else:
                return value

    def _combine_add(self, lhs: Value, rhs: Value, subtract: bool) -> Value:
        if subtract:
            rhs = -rhs
        if isinstance(lhs, BiPoly) and isinstance(rhs, BiPoly):
            return lhs + rhs
        if isinstance(lhs, Derivation) and isinstance(rhs, Derivation):
            return lhs + rhs
        raise self.fail("cannot add a polynomial and a vector field")

    _PRODUCT_START = {"x", "y", "sqrt2", "dx", "dy", "D", "E", "delta"}

    def parse_product(self) -> Value:
        value = self.parse_factor()
        while True:
            tok = self.peek()
            if tok.kind == "SYM" and tok.text == "*":
                self.advance()
            elif tok.kind == "INT" or tok.kind == "SYM" and tok.text == "(" \
                    or tok.kind == "NAME" and tok.text in self._PRODUCT_START:
                pass  # implicit multiplication by juxtaposition
            else:
                return value
            value = self._combine_mul(value, self.parse_factor())

    def _combine_mul(self, lhs: Value, rhs: Value) -> Value:
        if isinstance(lhs, BiPoly) and isinstance(rhs, BiPoly):
            return lhs * rhs
        if isinstance(lhs, Derivation) and isinstance(rhs, Derivation):
            raise self.fail("a product may contain at most one vector field atom")
        if isinstance(lhs, Derivation):
            return lhs * rhs
        return rhs * lhs

    def parse_factor(self) -> Value:
        base = self.parse_atom()
        if not self.accept("SYM", "^"):
            return base
        neg = self.accept("SYM", "-") is not None
        exp_tok = self.expect("INT")
        exponent = int(exp_tok.text)
        if not neg:
            if isinstance(base, Derivation):
                raise ParseError("cannot raise a vector field to a power",
                                 exp_tok.pos, self.source)
            return base ** exponent
        # negative exponent: only y^-n, and only in Laurent mode
        if not isinstance(base, BiPoly) or base != BiPoly.var_y(self.mode):
            raise ModeViolation("negative exponents are only allowed on y")
        if not self.allow_laurent:
            raise ModeViolation("negative exponents require Laurent mode")
        return BiPoly.monomial(0, -exponent, mode=Mode.LAURENT_Y)

    def parse_atom(self) -> Value:
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            num = int(tok.text)
            if self.accept("SYM", "/"):
                den_tok = self.expect("INT")
                den = int(den_tok.text)
                if den == 0:
                    raise ParseError("zero denominator", den_tok.pos, self.source)
                return BiPoly.const(Fraction(num, den), self.mode)
            return BiPoly.const(num, self.mode)
        if tok.kind == "SYM" and tok.text == "(":
            self.advance()
            value = self.parse_expr()
            self.expect("SYM", ")")
            return value
        if tok.kind == "NAME":
            return self.parse_name_atom()
        raise self.fail(f"unexpected token {tok.text or 'end of input'!r}")

    def parse_name_atom(self) -> Value:
        tok = self.advance()
        name = tok.text
        if name == "x":
            return BiPoly.var_x(self.mode)
        if name == "y":
            return BiPoly.var_y(self.mode)
        if name == "sqrt2":
            return BiPoly.const(Scalar.sqrt2(), self.mode)
        if name == "dx":
            return Derivation(BiPoly.const(1, self.mode), BiPoly.zero(self.mode))
        if name == "dy":
            return Derivation(BiPoly.zero(self.mode), BiPoly.const(1, self.mode))
        if name == "E":
            return euler_field()
        if name == "D":
            self.expect("SYM", "[")
            a = self.parse_signed_int()
            self.expect("SYM", ",")
            b = self.parse_signed_int()
            self.expect("SYM", "]")
            if not in_lattice((a, b)):
                raise ParseError(f"D[{a},{b}] is outside the lattice", tok.pos,
                                 self.source)
            return basis_field(a, b)
        if name == "delta":
            self.expect("SYM", "[")
            alpha = self.parse_constant()
            self.expect("SYM", ",")
            beta = self.parse_constant()
            self.expect("SYM", "]")
            return toral_field(alpha, beta)
        raise ParseError(f"unknown name {name!r}", tok.pos, self.source)

    def parse_signed_int(self) -> int:
        sign = -1 if self.accept("SYM", "-") else 1
        tok = self.expect("INT")
        return sign * int(tok.text)

    def parse_constant(self) -> Scalar:
        value = self.parse_expr()
        if not isinstance(value, BiPoly) or not value.is_constant():
            raise self.fail("expected a constant scalar expression")
        return value.constant_value()

    def at_end(self) -> bool:
        return self.peek().kind == "END"


def parse_poly(source: str, allow_laurent: bool = False) -> BiPoly:
    parser = _Parser(source, allow_laurent)
    value = parser.parse_expr()
    if not parser.at_end():
        raise parser.fail("trailing input")
    if isinstance(value, Derivation):
        raise ParseError("expected a polynomial, found a vector field", 0, source)
    return value


def parse_derivation(source: str, allow_laurent: bool = False) -> Derivation:
    parser = _Parser(source, allow_laurent)
    value = parser.parse_expr()
    if not parser.at_end():
        raise parser.fail("trailing input")
    if isinstance(value, BiPoly):
        raise ParseError("expression is not a vector field "
                         "(no dx, dy, D[..], E or delta[..] atom)", 0, source)
    return value


def parse_automorphism(source: str) -> PolyAutomorphism:
    parser = _Parser(source)
    parser.expect("NAME", "auto")
    parser.expect("SYM", "(")

    def image_pair() -> tuple[BiPoly, BiPoly]:
        parser.expect("NAME", "x")
        parser.expect("ARROW")
        fx = parser.parse_expr()
        parser.expect("SYM", ",")
        parser.expect("NAME", "y")
        parser.expect("ARROW")
        fy = parser.parse_expr()
        if not isinstance(fx, BiPoly) or not isinstance(fy, BiPoly):
            raise parser.fail("automorphism images must be polynomials")
        return fx, fy

    fwd = image_pair()
    parser.expect("SYM", ";")
    parser.expect("NAME", "inverse")
    inv = image_pair()
    parser.expect("SYM", ")")
    if not parser.at_end():
        raise parser.fail("trailing input")
    return PolyAutomorphism(fwd, inv)


def split_generators(text: str) -> list[str]:
    """Split an inline generator list on top-level commas (commas inside
    brackets or parentheses belong to D[..]/delta[..] arguments)."""
    parts = []
    depth = 0
    current = []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    tail = "".join(current).strip()
    if tail:
        parts.append(tail)
    return [p for p in parts if p]
