"""Bounded certification of local finiteness and local nilpotency, plus the
Jordan decomposition of locally finite derivations.

Local finiteness of a derivation is semi-decidable here: we iterate
V_{k+1} = V_k + d(V_k) starting from a generator and either reach a stable
finite-dimensional invariant subspace (a positive certificate) or exhaust a
budget (inconclusive).  Orbits of x and y suffice for a positive answer
because derivations satisfy the product rule.  Refutations come from two
exact sources: the Newton-polygon vertex filter, and a closed orbit whose
operator matrix is not nilpotent (for the nilpotency question).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import InternalConsistencyError, NotLocallyFinite
from .linalg import (
    SparseEchelon,
    mat_identity,
    mat_inverse,
    mat_is_zero,
    mat_mul,
    mat_nilpotent,
    mat_sub,
    mat_vec,
    minimal_polynomial,
    upoly_derivative,
    upoly_divmod,
    upoly_eval_matrix,
    upoly_gcd,
)
from .poly import BiPoly, Mode
from .scalars import Scalar
from .vecfield import (
    Derivation,
    NotConstantDivergence,
    apply_derivation,
    bracket,
    classify_lf_shape,
    to_graded,
)


def _mono_order(exp: tuple[int, int]):
    # pivot = leading monomial under graded lex with x > y
    i, j = exp
    return (-(i + j), -i)


@dataclass(frozen=True)
class OrbitBudget:
    max_dim: int = 64
    max_deg: int = 32


@dataclass(frozen=True)
class OrbitClosure:
    """A d-invariant subspace containing the seed, with the action matrix.

    ``matrix`` is square over the echelonized basis: column j holds the
    coordinates of d(basis[j]).
    """

    seed: BiPoly
    basis: tuple[BiPoly, ...]
    matrix: tuple[tuple[Scalar, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix_rows(self) -> list[list[Scalar]]:
        return [list(row) for row in self.matrix]


@dataclass(frozen=True)
class Inconclusive:
    """Budget ran out before the orbit stabilized; dims per iteration."""

    dims: tuple[int, ...]
    budget: OrbitBudget


def invariant_subspace(d: Derivation, f: BiPoly, budget: OrbitBudget = OrbitBudget()):
    """Smallest d-invariant subspace containing f, within budget.

    Returns an OrbitClosure when the iteration stabilizes, otherwise an
    Inconclusive value carrying the dimension growth trace.
    """
    ech = SparseEchelon(_mono_order)
    ech.insert(dict(f.terms))
    frontier = [f]
    dims = [ech.dim]
    while frontier:
        if ech.dim > budget.max_dim:
            return Inconclusive(tuple(dims), budget)
        new_frontier = []
        for g in frontier:
            image = apply_derivation(d, g)
            if image.total_degree() > budget.max_deg:
                return Inconclusive(tuple(dims), budget)
            if ech.insert(dict(image.terms)):
                new_frontier.append(image)
        frontier = new_frontier
        dims.append(ech.dim)
        if ech.dim > budget.max_dim:
            return Inconclusive(tuple(dims), budget)
    basis = [BiPoly(vec) for vec in ech.basis()]
    matrix_cols = []
    for b in basis:
        coords = ech.coordinates(dict(apply_derivation(d, b).terms))
        if coords is None:
            raise InternalConsistencyError("stable orbit not closed under d")
        matrix_cols.append(coords)
    n = len(basis)
    matrix = tuple(tuple(matrix_cols[j][i] for j in range(n)) for i in range(n))
    return OrbitClosure(seed=f, basis=tuple(basis), matrix=matrix)


@dataclass(frozen=True)
class Certificate:
    """Evidence for or against local finiteness / nilpotency of a derivation.

    kind is one of "LocallyFinite", "LocallyNilpotent", "Inconclusive",
    "Refuted".  A LocallyNilpotent certificate stores the exact order N with
    d^N(x) = d^N(y) = 0; a LocallyFinite one stores the orbit closures of x
    and y.  Refuted carries a witness (an offending Newton vertex, or a text
    description of a non-nilpotent orbit matrix).
    """

    kind: str
    subject: Derivation
    budget: OrbitBudget
    order: int = 0
    orbit_x: Optional[OrbitClosure] = None
    orbit_y: Optional[OrbitClosure] = None
    growth: tuple[tuple[str, tuple[int, ...]], ...] = ()
    witness: object = None

    def __bool__(self) -> bool:
        return self.kind in ("LocallyFinite", "LocallyNilpotent")


def _shape_witness(d: Derivation, want_lnd: bool):
    """Run the Newton-vertex filter; returns a refuting vertex or None.

    The filter only applies to nonzero constant-divergence polynomial fields;
    anywhere else it is skipped and the orbit method decides alone.
    """
    if d.mode is not Mode.POLY or d.is_zero():
        return None
    try:
        g = to_graded(d)
    except NotConstantDivergence:
        return None
    cls = classify_lf_shape(g)
    if want_lnd:
        return None if cls.passes_lnd else cls.witness
    return None if cls.passes_lf else cls.witness


def certify_locally_finite(d: Derivation, budget: OrbitBudget = OrbitBudget()) -> Certificate:
    witness = _shape_witness(d, want_lnd=False)
    if witness is not None:
        return Certificate("Refuted", d, budget, witness=witness)
    orbit_x = invariant_subspace(d, BiPoly.var_x(), budget)
    orbit_y = invariant_subspace(d, BiPoly.var_y(), budget)
    if isinstance(orbit_x, OrbitClosure) and isinstance(orbit_y, OrbitClosure):
        return Certificate("LocallyFinite", d, budget, orbit_x=orbit_x, orbit_y=orbit_y)
    growth = []
    for name, orbit in (("x", orbit_x), ("y", orbit_y)):
        if isinstance(orbit, Inconclusive):
            growth.append((name, orbit.dims))
    return Certificate("Inconclusive", d, budget, growth=tuple(growth))


def _kill_order(d: Derivation, f: BiPoly, cap: int) -> Optional[int]:
    """Least k with d^k(f) = 0, or None past the cap."""
    term = f
    for k in range(cap + 1):
        if term.is_zero():
            return k
        term = apply_derivation(d, term)
    return None


def certify_locally_nilpotent(d: Derivation, budget: OrbitBudget = OrbitBudget()) -> Certificate:
    witness = _shape_witness(d, want_lnd=True)
    if witness is not None:
        return Certificate("Refuted", d, budget, witness=witness)
    orbit_x = invariant_subspace(d, BiPoly.var_x(), budget)
    orbit_y = invariant_subspace(d, BiPoly.var_y(), budget)
    if isinstance(orbit_x, Inconclusive) or isinstance(orbit_y, Inconclusive):
        growth = []
        for name, orbit in (("x", orbit_x), ("y", orbit_y)):
            if isinstance(orbit, Inconclusive):
                growth.append((name, orbit.dims))
        return Certificate("Inconclusive", d, budget, growth=tuple(growth))
    for name, orbit in (("x", orbit_x), ("y", orbit_y)):
        if not mat_nilpotent(orbit.matrix_rows()):
            return Certificate(
                "Refuted", d, budget,
                witness=f"orbit matrix of {name} is not nilpotent",
                orbit_x=orbit_x, orbit_y=orbit_y,
            )
    cap = orbit_x.dim + orbit_y.dim + 1
    kx = _kill_order(d, BiPoly.var_x(), cap)
    ky = _kill_order(d, BiPoly.var_y(), cap)
    if kx is None or ky is None:
        raise InternalConsistencyError("nilpotent orbit matrices but unbounded kill order")
    order = max(kx, ky, 1)
    return Certificate("LocallyNilpotent", d, budget, order=order,
                       orbit_x=orbit_x, orbit_y=orbit_y)


def _semisimple_part_matrix(m: list[list[Scalar]]) -> list[list[Scalar]]:
    """Jordan-Chevalley by Newton iteration on the squarefree part.

    No eigenvalue extraction: take q = minpoly / gcd(minpoly, minpoly'),
    then iterate A <- A - q(A) * q'(A)^{-1} until q(A) = 0.  Everything stays
    inside Q(sqrt2); a singular q'(A) surfaces as FieldExtensionRequired.
    """
    mu = minimal_polynomial(m)
    g = upoly_gcd(mu, upoly_derivative(mu))
    if len(g) <= 1:
        return [row[:] for row in m]  # minimal polynomial already squarefree
    q, rem = upoly_divmod(mu, g)
    assert not rem
    dq = upoly_derivative(q)
    a = [row[:] for row in m]
    for _ in range(64):
        qa = upoly_eval_matrix(q, a)
        if mat_is_zero(qa):
            return a
        correction = mat_mul(qa, mat_inverse(upoly_eval_matrix(dq, a)))
        a = mat_sub(a, correction)
    raise InternalConsistencyError("Jordan-Chevalley iteration did not converge")


def jordan_decompose(d: Derivation, budget: OrbitBudget = OrbitBudget()) -> tuple[Derivation, Derivation]:
    """Split a locally finite derivation into commuting semisimple and
    locally nilpotent parts, exactly.

    The operator is decomposed on V = span(orbit of x, orbit of y, 1); the
    parts are read off on x and y and extended by the derivation property.
    """
    cert = certify_locally_finite(d, budget)
    if cert.kind != "LocallyFinite":
        raise NotLocallyFinite(
            f"local finiteness certification returned {cert.kind}"
            + (f" (witness {cert.witness})" if cert.kind == "Refuted" else "")
        )
    ech = SparseEchelon(_mono_order)
    for b in cert.orbit_x.basis + cert.orbit_y.basis:
        ech.insert(dict(b.terms))
    ech.insert({(0, 0): Scalar.of(1)})
    basis = [BiPoly(vec) for vec in ech.basis()]
    n = len(basis)
    cols = []
    for b in basis:
        coords = ech.coordinates(dict(apply_derivation(d, b).terms))
        if coords is None:
            raise InternalConsistencyError("V is not d-invariant")
        cols.append(coords)
    m = [[cols[j][i] for j in range(n)] for i in range(n)]
    ms = _semisimple_part_matrix(m)

    def part_value(var: BiPoly) -> BiPoly:
        coords = ech.coordinates(dict(var.terms))
        image = mat_vec(ms, coords)
        out = BiPoly.zero()
        for c, b in zip(image, basis):
            if c:
                out = out + b * c
        return out

    d_s = Derivation(part_value(BiPoly.var_x()), part_value(BiPoly.var_y()))
    d_n = d - d_s
    if bracket(d_s, d_n):
        raise InternalConsistencyError("Jordan parts do not commute as derivations")
    if d_n and certify_locally_nilpotent(d_n, budget).kind != "LocallyNilpotent":
        raise InternalConsistencyError("nilpotent Jordan part failed certification")
    return d_s, d_n


def is_semisimple(d: Derivation, budget: OrbitBudget = OrbitBudget()) -> bool:
    """True iff d certifies locally finite with zero nilpotent Jordan part."""
    try:
        _, d_n = jordan_decompose(d, budget)
    except NotLocallyFinite:
        return False
    return d_n.is_zero()
