"""Named verification scenarios: each worked example and lemma-level fact
the workbench reproduces runs here as an executable check.

Every scenario returns (ok, detail); the CLI prints one line per scenario
and exits nonzero if any fails.  All checks are exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .closure import (
    ClosureBudget,
    LieSpan,
    derived_series,
    exclusion_check,
    graded_to_vector,
    lie_closure,
    lower_central_series,
    span_of,
    triangular_analysis,
)
from .finiteness import OrbitBudget, certify_locally_finite, certify_locally_nilpotent
from .linalg import mat_nullspace
from .parsing import parse_derivation
from .poly import BiPoly, Mode
from .scalars import ONE, SQRT2, Scalar
from .spectral import centralizer_basis, centralizer_delta, homogeneous_pieces
from .vecfield import (
    Derivation,
    GradedForm,
    PolyAutomorphism,
    ad_conjugate,
    apply_derivation,
    basis_field,
    bracket,
    bracket_graded,
    exp_lnd,
    from_graded,
    graded_weight,
    in_lattice,
    newton_polygon,
    to_graded,
    toral_field,
)

Scenario = tuple[str, Callable[[], tuple[bool, str]]]


def structure_constant_sweep(bracket_fn=bracket_graded,
                             span_lo: int = -1, span_hi: int = 3) -> tuple[bool, str]:
    """Deterministic oracle sweep: the structure-constant bracket must agree
    with the differentiation bracket on a grid of basis terms, and the toral
    relations must hold."""
    points = [(a, b) for a in range(span_lo, span_hi + 1)
              for b in range(span_lo, span_hi + 1) if in_lattice((a, b))]
    pairs = 0
    for p1 in points:
        for p2 in points:
            g1 = GradedForm.basis(*p1)
            g2 = GradedForm.basis(*p2)
            lhs = from_graded(bracket_fn(g1, g2))
            rhs = bracket(from_graded(g1), from_graded(g2))
            if lhs != rhs:
                return False, f"bracket mismatch at D{p1}, D{p2}"
            pairs += 1
    for alpha, beta in ((Scalar.of(1), Scalar.of(1)), (Scalar.of(1), SQRT2),
                        (Scalar.of(2), Scalar.of(-3))):
        delta = GradedForm.toral(alpha, beta)
        for p in points:
            expected = GradedForm.basis(*p) * graded_weight(alpha, beta, p)
            got = bracket_fn(delta, GradedForm.basis(*p))
            if got != expected:
                return False, f"toral relation failed at delta[{alpha},{beta}], D{p}"
        other = GradedForm.toral(beta, alpha)
        if not bracket_fn(delta, other).is_zero():
            return False, "toral fields do not commute"
    return True, f"{pairs} basis pairs plus toral relations agree with the oracle"


def _squared_difference_field() -> Derivation:
    f = (BiPoly.var_x() - BiPoly.var_y()) ** 2
    return Derivation(f, f)


_SQ_EXPECTED = {
    (-1, 2): Scalar(Fraction(1, 3)),
    (0, 1): Scalar(Fraction(-1)),
    (1, 0): Scalar(Fraction(1)),
    (2, -1): Scalar(Fraction(-1, 3)),
}


def squared_difference_scenario() -> tuple[bool, str]:
    """(x-y)^2*(dx+dy): graded coefficients, Newton vertices, nilpotency,
    piece extraction, the exclusion violation and the closure blow-up."""
    d = _squared_difference_field()
    g = to_graded(d)
    if g.euler or dict(g.graded) != _SQ_EXPECTED:
        return False, f"decomposition mismatch: {g}"
    polygon = newton_polygon(g)
    if set(polygon.vertices) != {(-1, 2), (2, -1)}:
        return False, f"vertices {polygon.vertices}"
    cert = certify_locally_nilpotent(d)
    if cert.kind != "LocallyNilpotent" or cert.order != 2:
        return False, f"nilpotency certificate {cert.kind}, order {cert.order}"
    pieces = homogeneous_pieces(g, ONE, SQRT2)
    if len(pieces) != 4 or any(len(p.graded) != 1 for p in pieces):
        return False, f"{len(pieces)} pieces"
    got = {}
    for p in pieces:
        ((point, coeff),) = p.graded.items()
        got[point] = coeff
    if got != _SQ_EXPECTED:
        return False, "piece coefficients differ from the decomposition"
    span = span_of(pieces)
    excl = exclusion_check(span)
    if (excl.status, excl.k, excl.l) != ("Violation", 2, 2):
        return False, f"exclusion {excl}"
    # a budget tall enough to watch five full rounds of strict growth
    report = lie_closure(pieces, ClosureBudget(max_dim=512, max_total_weight=40,
                                               max_rounds=6))
    dims = [dim for _, dim in report.growth_trace]
    growing = len(dims) >= 6 and all(dims[i] < dims[i + 1] for i in range(5))
    if report.stabilized or not growing:
        return False, f"closure trace {dims}"
    return True, f"coefficients, vertices, order 2, violation (2,2), growth {dims[:6]}"


def demazure_blowup_scenario() -> tuple[bool, str]:
    """Iterated ad of D[1,-1] on D[-1,2] walks through D[0,1], D[1,0],
    D[2,-1] with nonzero coefficients, and the pair generates a
    budget-breaking closure whose 4th derived term is still nonzero."""
    start = GradedForm.basis(-1, 2)
    stepper = GradedForm.basis(1, -1)
    expected_points = [(0, 1), (1, 0), (2, -1)]
    current = start
    for point in expected_points:
        current = bracket_graded(stepper, current)
        if set(current.graded) != {point} or not current.graded[point]:
            return False, f"ad chain left the expected path at {point}: {current}"
    budget = ClosureBudget(max_dim=96, max_total_weight=40, max_rounds=32)
    report = lie_closure([start, stepper], budget)
    if report.stabilized:
        return False, "closure unexpectedly stabilized"
    series = derived_series(report.span, depth=4, budget=budget)
    dims = series.dims()
    if len(dims) < 5 or dims[4] == 0:
        return False, f"derived dims {dims}"
    return True, f"chain D[0,1]->D[1,0]->D[2,-1]; derived dims {dims}"


def sl2_scenario() -> tuple[bool, str]:
    """The closure of D[-1,1], D[1,-1] is the three-dimensional simple
    algebra: constant derived series, not triangular, exclusion (1,1)."""
    gens = [GradedForm.basis(-1, 1), GradedForm.basis(1, -1)]
    report = lie_closure(gens, ClosureBudget())
    if not report.stabilized or report.span.dim != 3:
        return False, f"dim {report.span.dim}, stabilized {report.stabilized}"
    if not report.span.contains(GradedForm.basis(0, 0)):
        return False, "D[0,0] missing from the closure"
    series = derived_series(report.span, depth=4)
    if not series.repeating or series.dims()[-1] != 3:
        return False, f"derived dims {series.dims()}"
    tri = triangular_analysis(report.span)
    if tri.kind != "Neither":
        return False, f"triangular {tri.kind}"
    excl = exclusion_check(report.span)
    if (excl.status, excl.k, excl.l) != ("Violation", 1, 1):
        return False, f"exclusion {excl}"
    return True, "dim 3 with D[0,0], constant derived series, Neither, violation (1,1)"


def centralizer_scenario() -> tuple[bool, str]:
    """Centralizer bases for (2,1), (1,2), (1,1), (3,2) against a brute-force
    scan of all lattice terms of weight <= 12."""
    bound = 12
    for (m, n) in ((2, 1), (1, 2), (1, 1), (3, 2)):
        basis = centralizer_basis(m, n, bound)
        alpha, beta = centralizer_delta(m, n)
        delta = GradedForm.toral(alpha, beta)
        for z in basis:
            if not bracket_graded(delta, z).is_zero():
                return False, f"({m},{n}): returned element does not commute"
        returned_points = {next(iter(z.graded)) for z in basis if z.graded} - {(0, 0)}
        for a in range(-1, bound + 2):
            for b in range(-1, bound + 2):
                point = (a, b)
                if not in_lattice(point) or point == (0, 0) or a + b > bound:
                    continue
                commutes = not graded_weight(alpha, beta, point)
                if commutes and point not in returned_points:
                    return False, f"({m},{n}): omitted commuting term D[{a},{b}]"
                if not commutes and point in returned_points:
                    return False, f"({m},{n}): spurious term D[{a},{b}]"
    expected_21 = {(-1, 2)}
    got_21 = {next(iter(z.graded)) for z in centralizer_basis(2, 1, bound) if z.graded}
    if got_21 - {(0, 0)} != expected_21:
        return False, f"(2,1) basis points {got_21}"
    return True, "four centralizer lines match the brute-force scan at weight 12"


def ad_orbit_scenario() -> tuple[bool, str]:
    """The unipotent orbit identity Ad_exp(t*dn)(s) = s + t*[dn, s] for both
    triangular directions and t in {1, 2, 5}; swap conjugation mirrors them."""
    s = parse_derivation("x*dx - y*dy")
    for dn_text in ("y*dx", "x*dy"):
        dn = parse_derivation(dn_text)
        cert = certify_locally_nilpotent(dn)
        if cert.kind != "LocallyNilpotent":
            return False, f"{dn_text} failed nilpotency certification"
        step = bracket(dn, s)
        for t in (1, 2, 5):
            phi = exp_lnd(dn, Scalar.of(t), cert)
            if ad_conjugate(phi, s) != s + step * Scalar.of(t):
                return False, f"orbit identity failed for {dn_text}, t={t}"
    tau = PolyAutomorphism.swap()
    p_of_y = BiPoly({(0, 2): Scalar.of(3), (0, 0): Scalar.of(-1)})
    mirrored = ad_conjugate(tau, Derivation(p_of_y, BiPoly.zero()))
    expected = Derivation(BiPoly.zero(), BiPoly({(2, 0): Scalar.of(3), (0, 0): Scalar.of(-1)}))
    if mirrored != expected:
        return False, "swap conjugation did not mirror p(y)dx to p(x)dy"
    return True, "identity holds for both directions at t=1,2,5; swap mirrors"


def rank_one_sl2_scenario() -> tuple[bool, str]:
    """The only origin line whose lattice points are all Demazure joins
    (-1,1) and (1,-1); solvable pieces built on it stay inside the closure
    of those two fields, which carries D[0,0]."""
    for l in range(0, 13):
        for lp in range(0, 13):
            collinear = (-1) * (-1) - l * lp == 0
            if collinear != (l == 1 and lp == 1):
                return False, f"collinearity classification failed at ({l},{lp})"
    sl2 = lie_closure([GradedForm.basis(-1, 1), GradedForm.basis(1, -1)],
                      ClosureBudget()).span
    if not sl2.contains(GradedForm.basis(0, 0)):
        return False, "sl2 closure misses D[0,0]"
    sub = lie_closure([GradedForm.basis(0, 0), GradedForm.basis(-1, 1)],
                      ClosureBudget())
    if not sub.stabilized or sub.span.dim != 2:
        return False, f"rank-one model closure dim {sub.span.dim}"
    if not sl2.contains_span(sub.span):
        return False, "rank-one model escapes the sl2 ambient"
    return True, "Demazure pair (1,1) unique; model subalgebra sits inside sl2"


def laurent_scenario() -> tuple[bool, str]:
    """The Laurent cylinder witness: iterated ad of dy on y^-1*dx produces
    20 independent fields, so no finite-dimensional invariant space exists."""
    a0 = Derivation(BiPoly.zero(Mode.LAURENT_Y), BiPoly.const(1, Mode.LAURENT_Y))
    a1 = Derivation(BiPoly.monomial(0, -1, mode=Mode.LAURENT_Y),
                    BiPoly.zero(Mode.LAURENT_Y))
    first = bracket(a0, a1)
    if first != Derivation(BiPoly.monomial(0, -2, Scalar.of(-1), mode=Mode.LAURENT_Y),
                           BiPoly.zero(Mode.LAURENT_Y)):
        return False, f"[dy, y^-1 dx] = {first}"
    chain = [a1]
    for _ in range(19):
        chain.append(bracket(a0, chain[-1]))
    exponents = set()
    for k, elem in enumerate(chain, start=1):
        if not elem.q.is_zero() or len(elem.p.terms) != 1:
            return False, f"chain element {k} left the expected shape"
        ((i, j),) = elem.p.terms
        exponents.add((i, j))
        if i != 0 or j != -k:
            return False, f"chain element {k} has exponent y^{j}"
    if len(exponents) != 20:
        return False, "chain exponents collide"
    for i in range(0, len(chain), 7):
        for j in range(i + 1, len(chain), 5):
            if not bracket(chain[i], chain[j]).is_zero():
                return False, "the abelian tail brackets are nonzero"
    return True, "20 independent Laurent fields from iterated ad of dy"


def triangular_filtration_scenario() -> tuple[bool, str]:
    """Triangular span diagnostics plus the degree filtration by locally
    finite subalgebras."""
    gens = [parse_derivation(t) for t in ("y^2*dx", "x*dx - y*dy", "dy")]
    graded = [to_graded(d) for d in gens]
    report = lie_closure(graded, ClosureBudget())
    if not report.stabilized or report.span.dim != 5:
        return False, f"closure dim {report.span.dim}"
    tri = triangular_analysis(report.span)
    if (tri.kind, tri.filtration_degree) != ("InJplus", 2):
        return False, f"triangular {tri}"
    series = derived_series(report.span, depth=5)
    if series.derived_length() != 3:
        return False, f"derived dims {series.dims()}"
    h1 = series.spans[1]
    lcs = lower_central_series(h1, h1)
    if lcs.nilpotent_step() is None:
        return False, "derived ideal is not nilpotent"
    h1_series = derived_series(h1, depth=3)
    if h1_series.derived_length() is None or h1_series.derived_length() > 2:
        return False, "derived ideal is not metabelian"
    dims = []
    for degree in (0, 1, 2):
        piece = _filtration_piece(report.span, degree)
        dims.append(piece.dim)
        if not piece.is_zero():
            sub = lie_closure(piece, ClosureBudget())
            if not sub.stabilized or sub.span != piece:
                return False, f"filtration piece at degree {degree} is not a subalgebra"
            for g in piece.basis:
                cert = certify_locally_finite(from_graded(g))
                if cert.kind != "LocallyFinite":
                    return False, f"filtration element not locally finite at degree {degree}"
    if dims != [3, 4, 5]:
        return False, f"filtration dims {dims}"
    return True, f"InJplus degree 2, derived length 3, filtration dims {dims}"


def _filtration_piece(span: LieSpan, degree: int) -> LieSpan:
    """span intersected with the triangular algebra of p-degree <= degree."""
    allowed = {(0, 0), (0, -1)} | {(-1, k) for k in range(0, degree + 1)}

    def coord_allowed(key) -> bool:
        return key == "euler" or key in allowed

    vectors = [graded_to_vector(g) for g in span.basis]
    bad_coords = sorted(
        {k for vec in vectors for k in vec if not coord_allowed(k)},
        key=lambda k: (k[0] + k[1], k),
    )
    if not bad_coords:
        return span
    rows = [[vec.get(coord, Scalar()) for vec in vectors] for coord in bad_coords]
    kernel = mat_nullspace(rows, len(vectors))
    forms = []
    for combo in kernel:
        total = GradedForm.zero()
        for c, g in zip(combo, span.basis):
            if c:
                total = total + g * c
        if not total.is_zero():
            forms.append(total)
    return span_of(forms)


SCENARIOS: list[Scenario] = [
    ("structure-constants-oracle", structure_constant_sweep),
    ("squared-difference-field", squared_difference_scenario),
    ("demazure-pair-blowup", demazure_blowup_scenario),
    ("sl2-closure", sl2_scenario),
    ("centralizer-lines", centralizer_scenario),
    ("unipotent-orbit-identity", ad_orbit_scenario),
    ("rank-one-sl2-ambient", rank_one_sl2_scenario),
    ("laurent-cylinder-witness", laurent_scenario),
    ("triangular-filtration", triangular_filtration_scenario),
]


def run_all() -> list[tuple[str, bool, str]]:
    results = []
    for name, fn in SCENARIOS:
        ok, detail = fn()
        results.append((name, ok, detail))
    return results
