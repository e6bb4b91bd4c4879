import random
from fractions import Fraction

import pytest

from planevec.errors import (
    CentralizesDelta,
    DependentResult,
    NotCoprime,
    RationalRatio,
    ZeroDelta,
)
from planevec.finiteness import certify_locally_nilpotent
from planevec.parsing import parse_derivation
from planevec.scalars import ONE, SQRT2, Scalar
from planevec.spectral import (
    OpportunePair,
    centralizer_basis,
    centralizer_delta,
    eigencomponents,
    homogeneous_pieces,
    is_opportune,
    opportune_search,
    principal_part,
    toral_from_opportune,
)
from planevec.vecfield import (
    GradedForm,
    bracket,
    bracket_graded,
    from_graded,
    graded_weight,
    in_lattice,
    to_graded,
)

from conftest import random_graded


def sq_graded():
    return to_graded(parse_derivation("(x-y)^2*(dx+dy)"))


def test_eigencomponents_paper_example():
    decomp = eigencomponents(sq_graded(), ONE, SQRT2)
    eigenvalues = set(decomp.eigenvalues())
    expected = {
        Scalar(Fraction(-1), Fraction(2)),   # -1 + 2*sqrt2
        SQRT2,
        ONE,
        Scalar(Fraction(2), Fraction(-1)),   # 2 - sqrt2
    }
    assert eigenvalues == expected
    assert decomp.reconstruct() == sq_graded()


def test_eigencomponents_toral_is_weight_zero():
    g = GradedForm.toral(2, 3)
    decomp = eigencomponents(g, ONE, SQRT2)
    assert decomp.eigenvalues() == [Scalar()]


def test_eigencomponents_weight_zero_pair():
    g = GradedForm.basis(-1, 1) + GradedForm.basis(1, -1)
    decomp = eigencomponents(g, ONE, ONE)
    assert decomp.eigenvalues() == [Scalar()]
    with pytest.raises(ZeroDelta):
        eigencomponents(g, Scalar(), Scalar())


def test_eigen_property(rng: random.Random):
    delta = GradedForm.toral(ONE, SQRT2)
    for _ in range(60):
        g = random_graded(rng)
        decomp = eigencomponents(g, ONE, SQRT2)
        assert decomp.reconstruct() == g
        for lam, comp in decomp.components:
            assert bracket_graded(delta, comp) == comp * lam


def test_homogeneous_pieces_paper_example():
    pieces = homogeneous_pieces(sq_graded(), ONE, SQRT2)
    assert len(pieces) == 4
    points = {}
    for p in pieces:
        assert len(p.graded) == 1 and not p.euler
        ((point, c),) = p.graded.items()
        points[point] = c
    assert points == {
        (-1, 2): Scalar(Fraction(1, 3)),
        (0, 1): Scalar(Fraction(-1)),
        (1, 0): Scalar(Fraction(1)),
        (2, -1): Scalar(Fraction(-1, 3)),
    }


def test_homogeneous_pieces_single_term():
    g = GradedForm.basis(2, 3)
    assert homogeneous_pieces(g, ONE, SQRT2) == [g]


def test_homogeneous_pieces_rejects_rational_ratio():
    with pytest.raises(RationalRatio):
        homogeneous_pieces(sq_graded(), ONE, Scalar.of(2))


def test_one_dimensionality_random(rng: random.Random):
    for _ in range(100):
        g = random_graded(rng)
        for piece in homogeneous_pieces(g, ONE, SQRT2):
            weight_zero = all(
                not graded_weight(ONE, SQRT2, p) for p in piece.graded)
            if not weight_zero:
                assert len(piece.graded) == 1 and not piece.euler


def test_centralizer_eigen1():
    basis = centralizer_basis(2, 1, 12)
    points = {next(iter(z.graded)) for z in basis if z.graded}
    assert points == {(0, 0), (-1, 2)}
    assert any(z.euler and not z.graded for z in basis)


def test_centralizer_eigen2():
    basis = centralizer_basis(1, 2, 12)
    points = {next(iter(z.graded)) for z in basis if z.graded}
    assert points == {(0, 0), (2, -1)}


def test_centralizer_diagonal_line():
    basis = centralizer_basis(1, 1, 3)
    points = {next(iter(z.graded)) for z in basis if z.graded}
    assert points == {(0, 0), (1, 1), (2, 2), (3, 3)}


def test_centralizer_commutes_exactly():
    for (m, n) in ((2, 1), (1, 2), (1, 1), (3, 2), (-2, -1), (1, 0), (0, 1)):
        alpha, beta = centralizer_delta(m, n)
        delta = GradedForm.toral(alpha, beta)
        for z in centralizer_basis(m, n, 8):
            assert bracket_graded(delta, z).is_zero()


def test_centralizer_completeness_brute_force():
    bound = 12
    for (m, n) in ((2, 1), (1, 2), (1, 1), (3, 2)):
        alpha, beta = centralizer_delta(m, n)
        returned = {next(iter(z.graded)) for z in centralizer_basis(m, n, bound)
                    if z.graded} - {(0, 0)}
        for a in range(-1, bound + 2):
            for b in range(-1, bound + 2):
                if not in_lattice((a, b)) or (a, b) == (0, 0) or a + b > bound:
                    continue
                if not graded_weight(alpha, beta, (a, b)):
                    assert (a, b) in returned


def test_centralizer_rejects_bad_input():
    with pytest.raises(NotCoprime):
        centralizer_basis(2, 4, 5)
    with pytest.raises(NotCoprime):
        centralizer_basis(0, 0, 5)


def test_principal_part_examples():
    lam, part = principal_part(parse_derivation("x*dx + y*dx"), ONE, SQRT2)
    assert lam == SQRT2 - ONE
    assert from_graded(part) == parse_derivation("y*dx")

    lam, part = principal_part(parse_derivation("D[-1,2]"), ONE, ONE)
    assert lam == ONE
    assert part == GradedForm.basis(-1, 2)

    with pytest.raises(CentralizesDelta):
        principal_part(parse_derivation("delta[1,1]"), ONE, SQRT2)


def test_principal_part_takes_min_when_max_is_zero():
    # spectrum {-2, 0} under delta[1,-1]: y*dx has weight -2, the toral part 0
    d = parse_derivation("x*dx - y*dy + y*dx")
    lam, part = principal_part(d, ONE, Scalar.of(-1))
    assert lam == Scalar.of(-2)
    assert from_graded(part) == parse_derivation("y*dx")


def test_is_opportune_examples():
    s = parse_derivation("x*dx - y*dy")
    dn = parse_derivation("y*dx")
    assert is_opportune(s, dn)
    assert not is_opportune(parse_derivation("x*dx + y*dy"), dn)  # commutes
    assert not is_opportune(dn, dn)  # s not semisimple


def test_toral_from_opportune_surfaces_commutation_failure():
    # For an opportune pair whose nilpotent part is an ad_s-eigenvector,
    # s1 - s0 = [dn, s] is itself nilpotent, so span{s0, s1} cannot be toral
    # and the commutation check [s0, s1] = 0 fails exactly:
    # [s, s + 2*y*dx] = -4*y*dx.  The operation surfaces this loudly; see
    # the decisions ledger on the toral-pair construction.
    s = parse_derivation("x*dx - y*dy")
    dn = parse_derivation("y*dx")
    step = bracket(dn, s)
    assert step == parse_derivation("2*y*dx")
    assert bracket(s, s + step) == parse_derivation("-4*y*dx")
    pair = OpportunePair(s, dn, certify_locally_nilpotent(dn))
    with pytest.raises(DependentResult):
        toral_from_opportune(pair)

    mirror_dn = parse_derivation("x*dy")
    assert bracket(mirror_dn, s) == parse_derivation("-2*x*dy")
    mirror = OpportunePair(s, mirror_dn, certify_locally_nilpotent(mirror_dn))
    with pytest.raises(DependentResult):
        toral_from_opportune(mirror)


def test_toral_from_opportune_rejects_commuting():
    euler = parse_derivation("E")
    dn = parse_derivation("y*dx")
    pair = OpportunePair(euler, dn, certify_locally_nilpotent(dn))
    with pytest.raises(DependentResult):
        toral_from_opportune(pair)


def test_opportune_search_finds_pair():
    elements = [parse_derivation("x*dx - y*dy"),
                parse_derivation("y*dx + y^2*dx")]
    result = opportune_search(elements)
    assert result.kind == "OpportunePair"
    assert result.pair.semisimple_part == elements[0]
    assert result.pair.nilpotent_part == parse_derivation("y*dx")
    assert result.pair.eigenvalue == Scalar.of(-2)


def test_opportune_search_central():
    result = opportune_search([parse_derivation("E")])
    assert result.kind == "CentralDelta"
    assert result.delta == parse_derivation("E")


def test_opportune_search_not_found():
    result = opportune_search([parse_derivation("y*dx"), parse_derivation("x*dy")])
    assert result.kind == "NotFound"
