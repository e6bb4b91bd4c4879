"""Spectral decomposition against toral fields, centralizers, principal
parts, and the opportune-pair machinery.

ad of delta[alpha,beta] acts on the basis field D[a,b] with eigenvalue
alpha*a + beta*b, so decomposing a graded form is a matter of grouping its
support by that weight.  When alpha/beta is irrational every nonzero weight
has a one-dimensional eigenspace, which is what lets single basis terms be
extracted from members of a Lie algebra containing such a delta.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from .errors import (
    CentralizesDelta,
    DependentResult,
    InconclusiveBudget,
    NotCoprime,
    NotLocallyFinite,
    RationalRatio,
    ZeroDelta,
)
from .finiteness import (
    Certificate,
    OrbitBudget,
    certify_locally_finite,
    certify_locally_nilpotent,
    is_semisimple,
    jordan_decompose,
)
from .scalars import Scalar, is_rational_ratio
from .vecfield import (
    Derivation,
    GradedForm,
    NotConstantDivergence,
    ad_conjugate,
    bracket,
    bracket_graded,
    exp_lnd,
    from_graded,
    graded_weight,
    in_lattice,
    to_graded,
)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigencomponents of a graded form under ad_delta[alpha,beta]."""

    alpha: Scalar
    beta: Scalar
    components: tuple[tuple[Scalar, GradedForm], ...]  # sorted by eigenvalue

    def component_map(self) -> dict[Scalar, GradedForm]:
        return dict(self.components)

    def eigenvalues(self) -> list[Scalar]:
        return [lam for lam, _ in self.components]

    def reconstruct(self) -> GradedForm:
        total = GradedForm.zero()
        for _, comp in self.components:
            total = total + comp
        return total


def eigencomponents(g: GradedForm, alpha, beta) -> SpectralDecomposition:
    """Group the graded terms of g by weight alpha*a + beta*b.

    The whole weight-(0,0) piece (Euler part plus the (0,0) coordinate) goes
    to eigenvalue 0.
    """
    alpha, beta = Scalar.of(alpha), Scalar.of(beta)
    if not alpha and not beta:
        raise ZeroDelta("(alpha, beta) = (0, 0)")
    buckets: dict[Scalar, GradedForm] = {}
    if g.euler:
        zero = Scalar()
        buckets[zero] = buckets.get(zero, GradedForm.zero()) + GradedForm.euler_term(g.euler)
    for point, c in g.sorted_items():
        lam = graded_weight(alpha, beta, point)
        piece = GradedForm(Scalar(), {point: c})
        buckets[lam] = buckets.get(lam, GradedForm.zero()) + piece
    components = tuple(sorted(buckets.items(), key=lambda kv: kv[0]))
    return SpectralDecomposition(alpha, beta, components)


def homogeneous_pieces(g: GradedForm, alpha, beta) -> list[GradedForm]:
    """All single-term eigenpieces plus the weight-zero remainder.

    Requires alpha/beta irrational, so that every nonzero weight determines
    the lattice point uniquely.
    """
    alpha, beta = Scalar.of(alpha), Scalar.of(beta)
    if not beta or is_rational_ratio(alpha, beta):
        raise RationalRatio("alpha/beta must be irrational")
    decomp = eigencomponents(g, alpha, beta)
    pieces = []
    for lam, comp in decomp.components:
        if lam:
            if len(comp.graded) != 1 or comp.euler:
                raise RationalRatio(
                    "nonzero-weight component is not a single term; "
                    "this contradicts irrationality of alpha/beta"
                )
            pieces.append(comp)
        else:
            pieces.append(comp)  # the t2-weight remainder, kept as one block
    return pieces


def centralizer_basis(m: int, n: int, deg_bound: int) -> list[GradedForm]:
    """Basis of the centralizer of the toral field named by coprime (m, n),
    truncated along its lattice line.

    The centralizer always contains the weight-(0,0) plane (Euler and
    D[0,0]).  The lattice terms commuting with delta are exactly the D points
    on the line alpha*a + beta*b = 0; the pairs (m, n) = +-(m0, 1) and
    +-(1, n0) with m0, n0 >= 2 name delta[m0,1] resp. delta[1,n0] (the lines
    carrying a single Demazure term D[-1,m0] resp. D[n0,-1]); every other
    coprime pair names delta[-m,n], whose line carries the family
    D[i*n, i*m].  The positive direction is truncated at |i| <= deg_bound.
    """
    if deg_bound < 1:
        raise NotCoprime("deg_bound must be >= 1")
    alpha, beta = centralizer_delta(m, n)
    # primitive direction vector of the zero-weight line
    ddir = _primitive_direction(alpha, beta)
    out = [GradedForm.euler_term(), GradedForm.basis(0, 0)]
    points = []
    for i in range(1, deg_bound + 1):
        for sign in (1, -1):
            point = (sign * i * ddir[0], sign * i * ddir[1])
            if in_lattice(point) and point != (0, 0):
                points.append(point)
    points.sort(key=lambda p: (p[0] + p[1], p))
    out.extend(GradedForm.basis(a, b) for a, b in points)
    delta = GradedForm.toral(alpha, beta)
    for z in out:
        if bracket_graded(delta, z):
            raise InconclusiveBudget("centralizer construction produced a non-commuting term")
    return out


def centralizer_delta(m: int, n: int) -> tuple[Scalar, Scalar]:
    """The toral parameters named by a coprime pair (m, n).

    +-(m0, 1) with m0 >= 2 names delta[m0,1] and +-(1, n0) with n0 >= 2
    names delta[1,n0]; every other coprime pair names delta[-m,n].
    """
    if (m, n) == (0, 0) or gcd(abs(m), abs(n)) != 1:
        raise NotCoprime(f"({m}, {n}) must be coprime and nonzero")
    m0, n0 = abs(m), abs(n)
    if n0 == 1 and m0 >= 2 and (m, n) in ((m0, 1), (-m0, -1)):
        return Scalar.of(m0), Scalar.of(1)
    if m0 == 1 and n0 >= 2 and (m, n) in ((1, n0), (-1, -n0)):
        return Scalar.of(1), Scalar.of(n0)
    return Scalar.of(-m), Scalar.of(n)


def _primitive_direction(alpha: Scalar, beta: Scalar) -> tuple[int, int]:
    # alpha, beta are integers here; solve alpha*a + beta*b = 0 primitively
    ai, bi = int(alpha.rat), int(beta.rat)
    g = gcd(abs(ai), abs(bi))
    v = (bi // g, -ai // g)
    # fix a deterministic orientation: first nonzero component positive
    if v[0] < 0 or (v[0] == 0 and v[1] < 0):
        v = (-v[0], -v[1])
    return v


@dataclass(frozen=True)
class OpportunePair:
    """(s, dn) with s semisimple, dn locally nilpotent, [dn, s] != 0 and
    [dn, [dn, s]] = 0; when dn is an eigenvector of ad_s the eigenvalue is
    recorded."""

    semisimple_part: Derivation
    nilpotent_part: Derivation
    nilpotent_cert: Certificate
    eigenvalue: Optional[Scalar] = None


def principal_part(d: Derivation, alpha, beta,
                   budget: OrbitBudget = OrbitBudget()) -> tuple[Scalar, GradedForm]:
    """Extreme-weight eigencomponent of a locally finite d under delta.

    The spectrum is real (Q(sqrt2) embeds in R), so its convex hull is an
    interval; the principal part sits at max(sigma), falling back to
    min(sigma) when the maximum is 0.  For locally finite d that component
    is locally nilpotent and the pair (delta, part) is opportune.
    """
    alpha, beta = Scalar.of(alpha), Scalar.of(beta)
    cert = certify_locally_finite(d, budget)
    if cert.kind != "LocallyFinite":
        raise NotLocallyFinite(f"certification returned {cert.kind}")
    g = to_graded(d)
    decomp = eigencomponents(g, alpha, beta)
    spectrum = decomp.eigenvalues()
    nonzero = [lam for lam in spectrum if lam]
    if not nonzero:
        raise CentralizesDelta("the field commutes with delta")
    lam = max(spectrum)
    if not lam:
        lam = min(spectrum)
    part = decomp.component_map()[lam]
    part_cert = certify_locally_nilpotent(from_graded(part), budget)
    if part_cert.kind != "LocallyNilpotent":
        raise InconclusiveBudget(
            f"principal part failed nilpotency certification ({part_cert.kind})")
    return lam, part


def is_opportune(s: Derivation, dn: Derivation,
                 budget: OrbitBudget = OrbitBudget()) -> bool:
    """Exact check of the defining relations plus both certifications."""
    dn_cert = certify_locally_nilpotent(dn, budget)
    if dn_cert.kind == "Inconclusive":
        raise InconclusiveBudget("nilpotency certification budget exhausted")
    if dn_cert.kind != "LocallyNilpotent":
        return False
    s_lf = certify_locally_finite(s, budget)
    if s_lf.kind == "Inconclusive":
        raise InconclusiveBudget("local finiteness certification budget exhausted")
    if s_lf.kind != "LocallyFinite" or not is_semisimple(s, budget):
        return False
    first = bracket(dn, s)
    if first.is_zero():
        return False
    return bracket(dn, first).is_zero()


def toral_from_opportune(pair: OpportunePair) -> tuple[Derivation, Derivation]:
    """The two commuting independent semisimple fields s0 = s and
    s1 = s + [dn, s]; s1 is verified to equal Ad_{exp(dn)}(s0) exactly."""
    s = pair.semisimple_part
    dn = pair.nilpotent_part
    step = bracket(dn, s)
    if step.is_zero():
        raise DependentResult("[dn, s] = 0: the pair is not opportune")
    s1 = s + step
    if bracket(s, s1):
        raise DependentResult("s0 and s1 do not commute")
    if not _independent(s, s1):
        raise DependentResult("s0 and s1 are linearly dependent")
    phi = exp_lnd(dn, Scalar.of(1), pair.nilpotent_cert)
    if ad_conjugate(phi, s) != s1:
        raise DependentResult("Ad-orbit identity failed for the pair")
    return s, s1


def _independent(d1: Derivation, d2: Derivation) -> bool:
    """Exact rank-2 test on the coefficient coordinates of two fields."""
    coords: dict[tuple[int, tuple[int, int]], list[Scalar]] = {}
    for tag, d in ((0, d1), (1, d2)):
        for part_idx, poly in ((0, d.p), (1, d.q)):
            for exp, c in poly.terms.items():
                key = (part_idx, exp)
                pair = coords.setdefault(key, [Scalar(), Scalar()])
                pair[tag] = pair[tag] + c
    values = list(coords.values())
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if values[i][0] * values[j][1] - values[i][1] * values[j][0]:
                return True
    return False


@dataclass(frozen=True)
class SearchResult:
    """Outcome of opportune_search: kind is "OpportunePair", "CentralDelta"
    or "NotFound"."""

    kind: str
    pair: Optional[OpportunePair] = None
    delta: Optional[Derivation] = None


def opportune_search(elements: list[Derivation],
                     budget: OrbitBudget = OrbitBudget()) -> SearchResult:
    """Scan the elements, in order, for a toral semisimple delta and a
    partner with nonzero bracket; build the opportune pair from the
    partner's principal part.

    Jordan semisimple parts of certifiable elements are tried after the
    elements themselves.  Only deltas living in the weight-(0,0) plane are
    usable (spectral decomposition needs the toral coordinates); candidates
    outside it are skipped.
    """
    if not elements:
        raise ValueError("opportune_search needs at least one element")

    candidates: list[Derivation] = []

    def add_candidate(d: Derivation):
        if d and d not in candidates:
            candidates.append(d)

    for e in elements:
        add_candidate(e)
    for e in elements:
        cert = certify_locally_finite(e, budget)
        if cert.kind == "LocallyFinite":
            try:
                d_s, _ = jordan_decompose(e, budget)
            except NotLocallyFinite:
                continue
            add_candidate(d_s)

    delta_found = None
    for cand in candidates:
        toral = _as_toral(cand)
        if toral is None:
            continue
        if not is_semisimple(cand, budget):
            continue
        delta_found = (cand, toral)
        break
    if delta_found is None:
        return SearchResult("NotFound")
    delta, (alpha, beta) = delta_found
    for e in elements:
        if e == delta:
            continue
        if bracket(delta, e).is_zero():
            continue
        lam, part = principal_part(e, alpha, beta, budget)
        dn = from_graded(part)
        cert = certify_locally_nilpotent(dn, budget)
        pair = OpportunePair(delta, dn, cert, eigenvalue=lam)
        if not is_opportune(delta, dn, budget):
            raise InconclusiveBudget("principal part did not yield an opportune pair")
        return SearchResult("OpportunePair", pair=pair)
    return SearchResult("CentralDelta", delta=delta)


def _as_toral(d: Derivation) -> Optional[tuple[Scalar, Scalar]]:
    """(alpha, beta) when d = delta[alpha,beta], else None."""
    try:
        g = to_graded(d)
    except NotConstantDivergence:
        return None
    if set(g.graded) - {(0, 0)}:
        return None
    if g.is_zero():
        return None
    return g.toral_part()
