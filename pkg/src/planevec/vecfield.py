"""Polynomial vector fields on the plane and their bigraded form.

A derivation is p*d/dx + q*d/dy.  Fields with constant divergence decompose
uniquely as c0 * (x d/dx + y d/dy) plus a sum of the divergence-free basis
fields

    D[a,b] = (b+1) x^(a+1) y^b d/dx - (a+1) x^a y^(b+1) d/dy

indexed by the lattice points a, b >= -1, (a, b) != (-1, -1).  Brackets can
be computed either by differentiation or purely from structure constants on
the graded side; the two must agree exactly and the test suite checks that.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    InvalidAutomorphism,
    ModeViolation,
    NotCertified,
    NotConstantDivergence,
    ZeroDerivation,
)
from .poly import BiPoly, Mode, poly_text
from .scalars import ONE, Scalar

LatticePoint = tuple[int, int]


def in_lattice(point: LatticePoint) -> bool:
    a, b = point
    return a >= -1 and b >= -1 and point != (-1, -1)


class Derivation:
    """p*d/dx + q*d/dy with both coefficients in one mode."""

    __slots__ = ("p", "q")

    def __init__(self, p: BiPoly, q: BiPoly):
        if p.mode is not q.mode:
            if p.mode is Mode.LAURENT_Y:
                q = q.with_mode(Mode.LAURENT_Y)
            else:
                p = p.with_mode(Mode.LAURENT_Y)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("Derivation is immutable")

    @property
    def mode(self) -> Mode:
        return self.p.mode

    @staticmethod
    def zero(mode: Mode = Mode.POLY) -> "Derivation":
        return Derivation(BiPoly.zero(mode), BiPoly.zero(mode))

    def is_zero(self) -> bool:
        return self.p.is_zero() and self.q.is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.p == other.p and self.q == other.q

    def __hash__(self) -> int:
        return hash((self.p, self.q))

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.p + other.p, self.q + other.q)

    def __sub__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.p - other.p, self.q - other.q)

    def __neg__(self) -> "Derivation":
        return Derivation(-self.p, -self.q)

    def __mul__(self, other) -> "Derivation":
        if isinstance(other, BiPoly):
            return Derivation(self.p * other, self.q * other)
        c = Scalar.of(other)
        return Derivation(self.p * c, self.q * c)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return derivation_text(self)

    def __repr__(self) -> str:
        return f"Derivation({derivation_text(self)!r})"


def derivation_text(d: Derivation) -> str:
    """Canonical `P*dx + Q*dy` form, parseable by the derivation grammar."""
    parts = []
    for coeff, sym in ((d.p, "dx"), (d.q, "dy")):
        if coeff.is_zero():
            continue
        parts.append((_poly_factor_text(coeff), sym))
    if not parts:
        return "0*dx"
    texts = []
    for factor, sym in parts:
        if factor == "1":
            texts.append(sym)
        elif factor == "-1":
            texts.append(f"-{sym}")
        else:
            texts.append(f"{factor}*{sym}")
    out = texts[0]
    for t in texts[1:]:
        if t.startswith("-"):
            out += " - " + t[1:]
        else:
            out += " + " + t
    return out


def _poly_factor_text(p: BiPoly) -> str:
    if len(p.terms) <= 1:
        return poly_text(p)
    return f"({poly_text(p)})"


# -- construction of the standard fields -------------------------------------


def euler_field() -> Derivation:
    return Derivation(BiPoly.var_x(), BiPoly.var_y())


def basis_field(a: int, b: int) -> Derivation:
    """The divergence-free basis field D[a,b]."""
    if not in_lattice((a, b)):
        raise ValueError(f"({a},{b}) is outside the lattice")
    p = BiPoly.monomial(a + 1, b, Scalar.of(b + 1)) if b + 1 != 0 else BiPoly.zero()
    q = BiPoly.monomial(a, b + 1, Scalar.of(-(a + 1))) if a + 1 != 0 else BiPoly.zero()
    return Derivation(p, q)


def toral_field(alpha, beta) -> Derivation:
    """delta[alpha,beta] = alpha*x*dx + beta*y*dy."""
    alpha, beta = Scalar.of(alpha), Scalar.of(beta)
    return Derivation(BiPoly.monomial(1, 0, alpha), BiPoly.monomial(0, 1, beta))


# -- basic operations ---------------------------------------------------------


def divergence(d: Derivation) -> BiPoly:
    return d.p.diff("x") + d.q.diff("y")


def apply_derivation(d: Derivation, f: BiPoly) -> BiPoly:
    """d(f) = p*df/dx + q*df/dy."""
    return d.p * f.diff("x") + d.q * f.diff("y")


def bracket(d1: Derivation, d2: Derivation) -> Derivation:
    """Lie bracket by differentiation: [d1,d2](u) = d1(d2(u)) - d2(d1(u))."""
    return Derivation(
        apply_derivation(d1, d2.p) - apply_derivation(d2, d1.p),
        apply_derivation(d1, d2.q) - apply_derivation(d2, d1.q),
    )


# -- the graded side ----------------------------------------------------------


class GradedForm:
    """Euler coefficient plus a sparse map over the lattice.

    The weight-(0,0) piece is two-dimensional: euler carries x*dx + y*dy and
    the (0,0) lattice coordinate carries x*dx - y*dy, so delta[alpha,beta]
    is stored as euler=(alpha+beta)/2 and graded[(0,0)]=(alpha-beta)/2.
    """

    __slots__ = ("euler", "graded")

    def __init__(self, euler=Scalar(), graded: Mapping[LatticePoint, Scalar] | None = None):
        clean: dict[LatticePoint, Scalar] = {}
        for point, c in (graded or {}).items():
            c = Scalar.of(c)
            if not c:
                continue
            if not in_lattice(point):
                raise ValueError(f"{point} is outside the lattice")
            clean[tuple(point)] = c
        object.__setattr__(self, "euler", Scalar.of(euler))
        object.__setattr__(self, "graded", clean)

    def __setattr__(self, name, value):
        raise AttributeError("GradedForm is immutable")

    @staticmethod
    def zero() -> "GradedForm":
        return GradedForm()

    @staticmethod
    def basis(a: int, b: int, c=ONE) -> "GradedForm":
        return GradedForm(Scalar(), {(a, b): Scalar.of(c)})

    @staticmethod
    def euler_term(c=ONE) -> "GradedForm":
        return GradedForm(Scalar.of(c), {})

    @staticmethod
    def toral(alpha, beta) -> "GradedForm":
        alpha, beta = Scalar.of(alpha), Scalar.of(beta)
        half = Fraction(1, 2)
        return GradedForm((alpha + beta) * half, {(0, 0): (alpha - beta) * half})

    def toral_part(self) -> tuple[Scalar, Scalar]:
        """(alpha, beta) of the weight-(0,0) piece."""
        g00 = self.graded.get((0, 0), Scalar())
        return (self.euler + g00, self.euler - g00)

    def is_zero(self) -> bool:
        return not self.euler and not self.graded

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedForm):
            return NotImplemented
        return self.euler == other.euler and self.graded == other.graded

    def __hash__(self) -> int:
        return hash((self.euler, frozenset(self.graded.items())))

    def __add__(self, other: "GradedForm") -> "GradedForm":
        out = dict(self.graded)
        for p, c in other.graded.items():
            out[p] = out.get(p, Scalar()) + c
        return GradedForm(self.euler + other.euler, out)

    def __sub__(self, other: "GradedForm") -> "GradedForm":
        return self + (-other)

    def __neg__(self) -> "GradedForm":
        return GradedForm(-self.euler, {p: -c for p, c in self.graded.items()})

    def __mul__(self, other) -> "GradedForm":
        c = Scalar.of(other)
        return GradedForm(self.euler * c, {p: v * c for p, v in self.graded.items()})

    __rmul__ = __mul__

    def support(self) -> set[LatticePoint]:
        return set(self.graded)

    def sorted_items(self) -> list[tuple[LatticePoint, Scalar]]:
        return sorted(self.graded.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0]))

    def max_total_weight(self) -> int:
        """Max of a+b over the support ((0,0) weight for a pure toral form)."""
        if not self.graded:
            return 0
        return max(a + b for a, b in self.graded)

    def __str__(self) -> str:
        return graded_text(self)

    def __repr__(self) -> str:
        return f"GradedForm({graded_text(self)!r})"


def graded_text(g: GradedForm) -> str:
    """Shorthand in basis symbols, e.g. `1/3*D[-1,2] - D[0,1] + E`."""
    pieces = []
    for (a, b), c in g.sorted_items():
        pieces.append((c, f"D[{a},{b}]"))
    if g.euler:
        pieces.append((g.euler, "E"))
    if not pieces:
        return "0"
    from .poly import scalar_expr_text

    texts = []
    for c, sym in pieces:
        if c == ONE:
            texts.append(sym)
        elif c == -ONE:
            texts.append(f"-{sym}")
        else:
            texts.append(f"{scalar_expr_text(c)}*{sym}")
    out = texts[0]
    for t in texts[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def to_graded(d: Derivation) -> GradedForm:
    """Decompose a constant-divergence polynomial field into graded form."""
    if d.mode is not Mode.POLY:
        raise ModeViolation("graded form is only defined in Polynomial mode")
    div = divergence(d)
    if not div.is_constant():
        raise NotConstantDivergence(f"divergence {div} is not constant")
    euler = div.constant_value() * Fraction(1, 2)
    p0 = d.p - BiPoly.monomial(1, 0, euler)
    q0 = d.q - BiPoly.monomial(0, 1, euler)
    coeffs: dict[LatticePoint, Scalar] = {}
    for (i, j), c in p0.terms.items():
        # x^i y^j in the dx part comes from D[i-1, j] with factor j+1
        coeffs[(i - 1, j)] = c / (j + 1)
    for (i, j), c in q0.terms.items():
        if j == 0:
            # x^i in the dy part comes from D[i, -1] with factor -(i+1)
            coeffs[(i, -1)] = c / (-(i + 1))
    g = GradedForm(euler, coeffs)
    if from_graded(g) != d:
        # unreachable for constant divergence; kept as a hard consistency check
        raise NotConstantDivergence("decomposition failed to reconstruct the field")
    return g


def from_graded(g: GradedForm) -> Derivation:
    out = Derivation.zero()
    if g.euler:
        out = out + euler_field() * g.euler
    for (a, b), c in g.sorted_items():
        out = out + basis_field(a, b) * c
    return out


def bracket_graded(g1: GradedForm, g2: GradedForm) -> GradedForm:
    """Bracket from structure constants only.

    [D[a,b], D[a',b']] = det [[a'+1, a+1], [b'+1, b+1]] * D[a+a', b+b']
    with D[-1,-1] := 0, and the Euler part acts by [E, D[a,b]] = (a+b) D[a,b].
    """
    out: dict[LatticePoint, Scalar] = {}

    def accumulate(point: LatticePoint, c: Scalar):
        if not c:
            return
        out[point] = out.get(point, Scalar()) + c

    e1, e2 = g1.euler, g2.euler
    for (a, b), c in g2.graded.items():
        if e1:
            accumulate((a, b), e1 * c * (a + b))
    for (a, b), c in g1.graded.items():
        if e2:
            accumulate((a, b), -(e2 * c * (a + b)))
    for (a, b), c1 in g1.graded.items():
        for (a2, b2), c2 in g2.graded.items():
            det = (a2 + 1) * (b + 1) - (a + 1) * (b2 + 1)
            if det == 0:
                continue
            target = (a + a2, b + b2)
            if target == (-1, -1):
                continue  # D[-1,-1] := 0
            accumulate(target, c1 * c2 * det)
    return GradedForm(Scalar(), out)


def graded_weight(alpha: Scalar, beta: Scalar, point: LatticePoint) -> Scalar:
    """Eigenvalue of ad_delta[alpha,beta] on D[a,b]: alpha*a + beta*b."""
    a, b = point
    return alpha * a + beta * b


# -- Newton polygon -----------------------------------------------------------


@dataclass(frozen=True)
class NewtonPolygon:
    support: frozenset[LatticePoint]
    vertices: tuple[LatticePoint, ...]  # extreme points, counterclockwise

    def vertex_set(self) -> set[LatticePoint]:
        return set(self.vertices)


def convex_hull_vertices(points: Iterable[LatticePoint]) -> list[LatticePoint]:
    """Monotone chain; collinear points are not vertices.

    Returns the extreme points in counterclockwise order starting from the
    lexicographically smallest point.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[LatticePoint] = []
    for p in pts:
        while len(lower) > 1 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[LatticePoint] = []
    for p in reversed(pts):
        while len(upper) > 1 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def newton_polygon(g: GradedForm) -> NewtonPolygon:
    """Convex hull of the support, joined with the origin when euler != 0."""
    if g.is_zero():
        raise ZeroDerivation("the zero derivation has no Newton polygon")
    support = g.support()
    hull_input = set(support)
    if g.euler:
        hull_input.add((0, 0))
    return NewtonPolygon(frozenset(support), tuple(convex_hull_vertices(hull_input)))


def is_demazure(point: LatticePoint) -> bool:
    a, b = point
    return (a == -1 and b >= 0) or (b == -1 and a >= 0)


@dataclass(frozen=True)
class ShapeClassification:
    """Necessary-condition filter from the Newton polygon vertices.

    kind is one of:
      "PassesLND" - every vertex is a Demazure point;
      "PassesLF"  - every vertex is Demazure or the origin, but not all
                    Demazure (witness = the non-Demazure vertex);
      "FailsLF"   - some vertex is neither (witness = that vertex).
    """

    kind: str
    witness: LatticePoint | None = None

    @property
    def passes_lf(self) -> bool:
        return self.kind in ("PassesLND", "PassesLF")

    @property
    def passes_lnd(self) -> bool:
        return self.kind == "PassesLND"


def classify_lf_shape(g: GradedForm) -> ShapeClassification:
    polygon = newton_polygon(g)
    for v in polygon.vertices:
        if not is_demazure(v) and v != (0, 0):
            return ShapeClassification("FailsLF", v)
    for v in polygon.vertices:
        if not is_demazure(v):
            return ShapeClassification("PassesLF", v)  # witness fails LND
    return ShapeClassification("PassesLND")


# -- automorphisms ------------------------------------------------------------


class PolyAutomorphism:
    """A polynomial automorphism given by coordinate images and their inverse.

    The inverse is supplied, not computed; the constructor verifies that the
    two substitutions compose to the identity in both orders.
    """

    __slots__ = ("fwd", "inv")

    def __init__(self, fwd: tuple[BiPoly, BiPoly], inv: tuple[BiPoly, BiPoly]):
        x, y = BiPoly.var_x(), BiPoly.var_y()
        fx, fy = fwd
        ix, iy = inv
        if ix.subst(fx, fy) != x or iy.subst(fx, fy) != y \
                or fx.subst(ix, iy) != x or fy.subst(ix, iy) != y:
            raise InvalidAutomorphism("forward and inverse do not compose to identity")
        object.__setattr__(self, "fwd", (fx, fy))
        object.__setattr__(self, "inv", (ix, iy))

    def __setattr__(self, name, value):
        raise AttributeError("PolyAutomorphism is immutable")

    @staticmethod
    def identity() -> "PolyAutomorphism":
        xy = (BiPoly.var_x(), BiPoly.var_y())
        return PolyAutomorphism(xy, xy)

    @staticmethod
    def swap() -> "PolyAutomorphism":
        yx = (BiPoly.var_y(), BiPoly.var_x())
        return PolyAutomorphism(yx, yx)

    def compose(self, other: "PolyAutomorphism") -> "PolyAutomorphism":
        """self after other, as substitution maps."""
        fx = self.fwd[0].subst(other.fwd[0], other.fwd[1])
        fy = self.fwd[1].subst(other.fwd[0], other.fwd[1])
        ix = other.inv[0].subst(self.inv[0], self.inv[1])
        iy = other.inv[1].subst(self.inv[0], self.inv[1])
        return PolyAutomorphism((fx, fy), (ix, iy))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyAutomorphism):
            return NotImplemented
        return self.fwd == other.fwd and self.inv == other.inv

    def __repr__(self) -> str:
        fx, fy = self.fwd
        ix, iy = self.inv
        return (f"auto(x->{poly_text(fx)}, y->{poly_text(fy)}; "
                f"inverse x->{poly_text(ix)}, y->{poly_text(iy)})")


def exp_lnd(d: Derivation, t, cert) -> PolyAutomorphism:
    """exp(t*d) for a certified locally nilpotent d.

    The certificate must be a LocallyNilpotent certificate for d itself; the
    truncation order comes from it, so no nilpotency check is repeated here.
    """
    from .finiteness import Certificate  # local import to avoid a cycle

    t = Scalar.of(t)
    if not isinstance(cert, Certificate) or cert.kind != "LocallyNilpotent" \
            or cert.subject != d:
        raise NotCertified("certificate does not certify this derivation")

    def flow(sign: Scalar) -> tuple[BiPoly, BiPoly]:
        images = []
        for var in (BiPoly.var_x(), BiPoly.var_y()):
            total = BiPoly.zero()
            term = var
            coeff = ONE  # sign^k / k!
            for k in range(cert.order):
                if k > 0:
                    term = apply_derivation(d, term)
                    coeff = coeff * sign / k
                total = total + term * coeff
            images.append(total)
        return images[0], images[1]

    return PolyAutomorphism(flow(t), flow(-t))


def ad_conjugate(phi: PolyAutomorphism, d: Derivation) -> Derivation:
    """Pushforward Ad_phi(d): substitute fwd into d applied to the inverse images."""
    if d.mode is not Mode.POLY:
        raise ModeViolation("Ad-conjugation is only defined in Polynomial mode")
    fx, fy = phi.fwd
    ix, iy = phi.inv
    new_p = apply_derivation(d, ix).subst(fx, fy)
    new_q = apply_derivation(d, iy).subst(fx, fy)
    return Derivation(new_p, new_q)
