import random

import pytest

from planevec.closure import (
    ClosureBudget,
    LieSpan,
    derived_series,
    exclusion_check,
    finite_dim_verdict,
    full_closure_report,
    lie_closure,
    lower_central_series,
    rank_analysis,
    span_of,
    triangular_analysis,
)
from planevec.errors import BudgetZero
from planevec.parsing import parse_derivation
from planevec.scalars import Scalar
from planevec.spectral import homogeneous_pieces
from planevec.vecfield import (
    GradedForm,
    bracket_graded,
    from_graded,
    to_graded,
)

from conftest import random_graded

D = GradedForm.basis


def graded(text: str) -> GradedForm:
    return to_graded(parse_derivation(text))


def test_closure_sl2():
    report = lie_closure([D(-1, 1), D(1, -1)])
    assert report.stabilized and report.span.dim == 3
    assert report.span.contains(D(0, 0, Scalar.of(4)))


def test_closure_blowup_growth():
    report = lie_closure([D(-1, 2), D(1, -1)], ClosureBudget(max_dim=50))
    assert not report.stabilized
    dims = [d for _, d in report.growth_trace]
    assert all(dims[i] < dims[i + 1] for i in range(len(dims) - 1))


def test_closure_singleton():
    report = lie_closure([graded("y*dx")])
    assert report.stabilized and report.span.dim == 1


def test_closure_budget_zero():
    with pytest.raises(BudgetZero):
        lie_closure([D(0, 0)], ClosureBudget(max_dim=0))
    with pytest.raises(ValueError):
        lie_closure([])


def test_closure_bracket_soundness(rng: random.Random):
    # stabilized spans reduce every pairwise bracket to zero, exactly
    for gens in ([D(-1, 1), D(1, -1)], [graded("y^2*dx"), graded("x*dx - y*dy")],
                 [random_graded(rng, max_weight=3, max_terms=2)]):
        report = lie_closure(gens)
        if not report.stabilized:
            continue
        basis = report.span.basis
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                assert report.span.contains(bracket_graded(basis[i], basis[j]))


def test_closure_determinism():
    gens = [graded("y^2*dx"), graded("x*dx - y*dy"), graded("dy")]
    first = lie_closure(gens)
    second = lie_closure(list(gens))
    assert first.span == second.span
    assert first.growth_trace == second.growth_trace


def test_derived_series_triangular_truncation():
    # triangular algebra truncated at degree 3:
    # basis y^k dx (k <= 3), x dx, y dy, dy
    gens = [D(-1, k) for k in range(0, 4)]
    gens += [graded("x*dx"), graded("y*dy"), graded("dy")]
    series = derived_series(gens, depth=5)
    assert series.derived_length() == 3
    # h1 = span{y^k dx, dy}, h2 = span{y^k dx : k <= 2}, h3 = 0
    assert series.dims() == (7, 5, 3, 0)


def test_derived_series_sl2_constant():
    series = derived_series([D(-1, 1), D(1, -1)], depth=5)
    assert series.repeating
    assert series.dims()[-1] == 3
    assert series.derived_length() is None


def test_derived_series_abelian():
    series = derived_series([graded("y*dx")], depth=3)
    assert series.dims() == (1, 0)
    assert series.derived_length() == 1


def test_derived_series_containment(rng: random.Random):
    gens = [graded("y^2*dx"), graded("x*dx - y*dy"), graded("dy")]
    series = derived_series(gens, depth=5)
    for prev, nxt in zip(series.spans, series.spans[1:]):
        assert prev.contains_span(nxt)


def test_lower_central_series_truncated_triangular():
    # u2+ truncated at degree 3: {p(y) dx: deg p <= 3} + k dy; its honest
    # lower central series steps down one degree at a time (class 4); the
    # paper-dialect claim of class 2 is metabelian-ness, checked separately
    basis = [D(-1, k) for k in range(0, 4)] + [graded("dy")]
    span = span_of(basis)
    lcs = lower_central_series(span, span)
    assert lcs.dims() == (5, 3, 2, 1, 0)
    assert lcs.nilpotent_step() == 4
    h1 = derived_series(span, depth=3)
    assert h1.derived_length() == 2  # metabelian


def test_lower_central_series_two_step():
    span = span_of([graded("y*dx"), graded("dy")])
    lcs = lower_central_series(span, span)
    # C2 = span{dx}, C3 = 0
    assert lcs.dims() == (2, 1, 0)
    assert lcs.nilpotent_step() == 2


def test_lower_central_series_zero_span():
    zero = LieSpan(())
    lcs = lower_central_series(zero, zero)
    assert lcs.nilpotent_step() == 0


def test_finite_dim_examples():
    verdict = finite_dim_verdict([graded("x*dx - y*dy"), graded("y*dx")])
    assert verdict.kind == "FiniteDim" and verdict.dim == 2

    blowup = finite_dim_verdict([D(-1, 2), D(1, -1)])
    assert blowup.kind == "LikelyInfinite"

    single = finite_dim_verdict([graded("E")])
    assert single.kind == "FiniteDim" and single.dim == 1


def test_rank_analysis_examples():
    rank = rank_analysis([parse_derivation("x*dx - y*dy"), parse_derivation("y*dx")])
    assert rank.kind == "Rank2"
    assert rank.pair.semisimple_part == parse_derivation("x*dx - y*dy")
    assert rank.pair.nilpotent_part == parse_derivation("y*dx")

    toral = rank_analysis([parse_derivation("x*dx + y*dy")])
    assert toral.kind == "AtMost1"

    nofind = rank_analysis([parse_derivation("y*dx"), parse_derivation("y^2*dx")])
    assert nofind.kind in ("AtMost1", "Unknown")


def test_rank_analysis_uses_homogeneous_pieces():
    # neither generator is toral, but the semisimple piece of the first is
    combined = parse_derivation("x*dx - y*dy + y^2*dx")
    rank = rank_analysis([combined, parse_derivation("y*dx")])
    assert rank.kind == "Rank2"


def test_triangular_analysis_examples():
    span = span_of([graded("y^2*dx"), graded("x*dx - y*dy"), graded("dy")])
    result = triangular_analysis(span)
    assert (result.kind, result.filtration_degree) == ("InJplus", 2)

    mirror = triangular_analysis(span_of([graded("x^2*dy")]))
    assert (mirror.kind, mirror.filtration_degree) == ("InJminus", 2)

    sl2 = lie_closure([D(-1, 1), D(1, -1)]).span
    assert triangular_analysis(sl2).kind == "Neither"

    toral_only = triangular_analysis(span_of([graded("E"), graded("x*dx")]))
    assert (toral_only.kind, toral_only.filtration_degree) == ("InJplus", 0)


def test_exclusion_examples():
    pieces = homogeneous_pieces(graded("(x-y)^2*(dx+dy)"), Scalar.of(1),
                                Scalar.sqrt2())
    excl = exclusion_check(span_of(pieces))
    assert (excl.status, excl.k, excl.l) == ("Violation", 2, 2)

    clean = exclusion_check(span_of([graded("y^2*dx"), graded("y^3*dx")]))
    assert clean.status == "Clean"

    sl2 = lie_closure([D(-1, 1), D(1, -1)]).span
    excl = exclusion_check(sl2)
    assert (excl.status, excl.k, excl.l) == ("Violation", 1, 1)


def test_exclusion_needs_membership_not_support():
    # D[-1,1] + D[2,-1] has both support types in one element, but neither
    # basis field lies in the one-dimensional span
    span = span_of([D(-1, 1) + D(2, -1)])
    assert exclusion_check(span).status == "Clean"


def test_full_report_solvable_case():
    gens = [graded("y^2*dx"), graded("x*dx - y*dy"), graded("dy")]
    report = full_closure_report(gens)
    assert report.stabilized and report.span.dim == 5
    assert report.verdicts["solvable"] == {"status": "Yes", "depth": 3}
    assert report.verdicts["finite_dim"] == {"status": "FiniteDim", "dim": 5}
    assert report.verdicts["triangular"] == "InJplus"
    assert report.verdicts["filtration_degree"] == 2
    assert report.verdicts["nilpotent_derived"]["status"] == "Yes"
    assert report.exclusion.status == "Clean"


def test_jordan_part_monotonicity():
    # enlarging by a member's semisimple Jordan part keeps the shifted
    # derived-series containment: enlarged^(n+1) is inside original^(n)
    member = parse_derivation("E + x*dy")
    original = lie_closure([to_graded(member)])
    from planevec.finiteness import jordan_decompose

    d_s, _ = jordan_decompose(member)
    enlarged = lie_closure([to_graded(member), to_graded(d_s)])
    orig_series = derived_series(original.span, depth=4)
    enl_series = derived_series(enlarged.span, depth=4)
    for n, enl_span in enumerate(enl_series.spans[1:]):
        if n < len(orig_series.spans):
            assert orig_series.spans[n].contains_span(enl_span)
