import random
from fractions import Fraction

import pytest

from planevec.errors import (
    NotCertified,
    NotConstantDivergence,
    ZeroDerivation,
)
from planevec.finiteness import certify_locally_nilpotent
from planevec.parsing import parse_derivation
from planevec.poly import BiPoly, Mode
from planevec.scalars import ONE, SQRT2, Scalar
from planevec.vecfield import (
    Derivation,
    GradedForm,
    PolyAutomorphism,
    ad_conjugate,
    apply_derivation,
    basis_field,
    bracket,
    bracket_graded,
    classify_lf_shape,
    convex_hull_vertices,
    divergence,
    euler_field,
    exp_lnd,
    from_graded,
    newton_polygon,
    to_graded,
    toral_field,
)

from conftest import random_graded


def sq_field() -> Derivation:
    return parse_derivation("(x-y)^2*(dx+dy)")


def test_divergence_examples():
    assert divergence(sq_field()).is_zero()
    assert divergence(euler_field()) == BiPoly.const(2)
    assert divergence(parse_derivation("y^2*dx")).is_zero()


def test_to_graded_paper_example():
    g = to_graded(sq_field())
    assert not g.euler
    assert g.graded == {
        (-1, 2): Scalar(Fraction(1, 3)),
        (0, 1): Scalar(Fraction(-1)),
        (1, 0): Scalar(Fraction(1)),
        (2, -1): Scalar(Fraction(-1, 3)),
    }


def test_to_graded_euler():
    g = to_graded(euler_field())
    assert g.euler == ONE and not g.graded


def test_to_graded_rejects_nonconstant_divergence():
    with pytest.raises(NotConstantDivergence):
        to_graded(parse_derivation("x^2*dx"))


def test_from_graded_round_trip(rng: random.Random):
    for _ in range(100):
        g = random_graded(rng)
        assert to_graded(from_graded(g)) == g


def test_apply_examples():
    assert apply_derivation(basis_field(-1, 2), BiPoly.var_x()) == \
        BiPoly.monomial(0, 2, Scalar.of(3))
    assert apply_derivation(basis_field(2, 3), BiPoly.const(5)).is_zero()
    assert apply_derivation(euler_field(), BiPoly.monomial(2, 1)) == \
        BiPoly.monomial(2, 1, Scalar.of(3))


def test_apply_matches_determinant_grid():
    for a in range(-1, 5):
        for b in range(-1, 5):
            if (a, b) == (-1, -1):
                continue
            d = basis_field(a, b)
            for i in range(0, 6):
                for j in range(0, 6):
                    got = apply_derivation(d, BiPoly.monomial(i, j))
                    det = i * (b + 1) - j * (a + 1)
                    if det == 0 or i + a < 0 or j + b < 0:
                        # the determinant vanishes whenever the target
                        # monomial would leave the quadrant
                        if i + a < 0 or j + b < 0:
                            assert det == 0
                        assert got.is_zero() or got == BiPoly.monomial(
                            i + a, j + b, Scalar.of(det))
                    else:
                        assert got == BiPoly.monomial(i + a, j + b, Scalar.of(det))


def test_bracket_examples():
    assert bracket(parse_derivation("y*dx"), parse_derivation("x*dy")) == \
        parse_derivation("y*dy - x*dx")
    d = sq_field()
    assert bracket(d, d).is_zero()
    a0 = Derivation(BiPoly.zero(Mode.LAURENT_Y), BiPoly.const(1, Mode.LAURENT_Y))
    a1 = Derivation(BiPoly.monomial(0, -1, mode=Mode.LAURENT_Y),
                    BiPoly.zero(Mode.LAURENT_Y))
    assert bracket(a0, a1) == Derivation(
        BiPoly.monomial(0, -2, Scalar.of(-1), mode=Mode.LAURENT_Y),
        BiPoly.zero(Mode.LAURENT_Y))


def test_bracket_graded_examples():
    assert bracket_graded(GradedForm.basis(-1, 1), GradedForm.basis(1, -1)) == \
        GradedForm.basis(0, 0, Scalar.of(4))
    assert bracket_graded(GradedForm.basis(0, 1), GradedForm.basis(1, 0)) == \
        GradedForm.basis(1, 1, Scalar.of(3))
    assert bracket_graded(GradedForm.toral(1, 1), GradedForm.basis(-1, 2)) == \
        GradedForm.basis(-1, 2)


def test_dminus1minus1_is_zero():
    # [D[-1,0], D[0,-1]] targets (-1,-1), which is declared zero
    out = bracket_graded(GradedForm.basis(-1, 0), GradedForm.basis(0, -1))
    assert out.is_zero()


def test_bracket_oracle_equivalence(rng: random.Random):
    for _ in range(150):
        g1, g2 = random_graded(rng), random_graded(rng)
        assert from_graded(bracket_graded(g1, g2)) == \
            bracket(from_graded(g1), from_graded(g2))


def test_jacobi_both_implementations(rng: random.Random):
    for _ in range(60):
        g1, g2, g3 = (random_graded(rng, max_weight=6, max_terms=3) for _ in range(3))
        total = (bracket_graded(bracket_graded(g1, g2), g3)
                 + bracket_graded(bracket_graded(g2, g3), g1)
                 + bracket_graded(bracket_graded(g3, g1), g2))
        assert total.is_zero()
        d1, d2, d3 = map(from_graded, (g1, g2, g3))
        dtotal = (bracket(bracket(d1, d2), d3)
                  + bracket(bracket(d2, d3), d1)
                  + bracket(bracket(d3, d1), d2))
        assert dtotal.is_zero()


def test_grading_compatibility(rng: random.Random):
    for _ in range(80):
        a, b = rng.randint(-1, 5), rng.randint(-1, 5)
        c, d = rng.randint(-1, 5), rng.randint(-1, 5)
        if (a, b) == (-1, -1) or (c, d) == (-1, -1):
            continue
        out = bracket_graded(GradedForm.basis(a, b), GradedForm.basis(c, d))
        assert set(out.graded) <= {(a + c, b + d)}


def test_basis_divergences():
    for a in range(-1, 4):
        for b in range(-1, 4):
            if (a, b) == (-1, -1):
                continue
            assert divergence(basis_field(a, b)).is_zero()
    assert divergence(euler_field()) == BiPoly.const(2)


def test_newton_polygon_examples():
    polygon = newton_polygon(to_graded(sq_field()))
    assert set(polygon.vertices) == {(-1, 2), (2, -1)}
    assert polygon.support == frozenset({(-1, 2), (0, 1), (1, 0), (2, -1)})

    single = newton_polygon(GradedForm.basis(-1, 3))
    assert polygon_vertices(single) == {(-1, 3)}

    with_euler = newton_polygon(GradedForm.euler_term() + GradedForm.basis(2, -1))
    assert polygon_vertices(with_euler) == {(0, 0), (2, -1)}

    with pytest.raises(ZeroDerivation):
        newton_polygon(GradedForm.zero())


def polygon_vertices(polygon):
    return set(polygon.vertices)


def test_hull_oracle(rng: random.Random):
    # brute force: a point is a vertex iff it is not in the hull of the rest
    for _ in range(60):
        g = random_graded(rng, max_weight=6, max_terms=6, with_euler=False)
        polygon = newton_polygon(g)
        points = sorted(polygon.support)
        vertices = set(polygon.vertices)
        assert vertices <= set(points)
        for p in points:
            assert (p in vertices) == _is_extreme(p, points)


def _is_extreme(p, points) -> bool:
    # p is extreme iff some closed half-plane through p strictly excludes the
    # other points; over a small integer grid, scan all direction vectors
    others = [q for q in points if q != p]
    if not others:
        return True
    for nx in range(-8, 9):
        for ny in range(-8, 9):
            if nx == ny == 0:
                continue
            if all(nx * (q[0] - p[0]) + ny * (q[1] - p[1]) < 0 for q in others):
                return True
    return False


def test_classify_shapes():
    assert classify_lf_shape(to_graded(sq_field())).kind == "PassesLND"
    cls = classify_lf_shape(GradedForm.basis(1, 1))
    assert cls.kind == "FailsLF" and cls.witness == (1, 1)
    euler_cls = classify_lf_shape(GradedForm.toral(1, 1))
    assert euler_cls.kind == "PassesLF" and euler_cls.witness == (0, 0)
    assert euler_cls.passes_lf and not euler_cls.passes_lnd


def test_exp_lnd_translation():
    d = parse_derivation("y*dx")
    cert = certify_locally_nilpotent(d)
    phi = exp_lnd(d, Scalar.of(1), cert)
    assert phi.fwd == (BiPoly.var_x() + BiPoly.var_y(), BiPoly.var_y())
    assert phi.inv == (BiPoly.var_x() - BiPoly.var_y(), BiPoly.var_y())
    ident = exp_lnd(d, Scalar(), cert)
    assert ident == PolyAutomorphism.identity()


def test_exp_lnd_mirror_and_cert_mismatch():
    d = parse_derivation("x*dy")
    cert = certify_locally_nilpotent(d)
    phi = exp_lnd(d, ONE, cert)
    assert phi.fwd == (BiPoly.var_x(), BiPoly.var_y() + BiPoly.var_x())
    other = parse_derivation("y*dx")
    with pytest.raises(NotCertified):
        exp_lnd(other, ONE, cert)


def test_exp_lnd_order_three():
    d = sq_field()
    cert = certify_locally_nilpotent(d)
    phi = exp_lnd(d, ONE, cert)  # constructor verifies the composition


def test_ad_conjugate_examples():
    dn = parse_derivation("y*dx")
    s = parse_derivation("x*dx - y*dy")
    cert = certify_locally_nilpotent(dn)
    for t in (1, 2, 5):
        phi = exp_lnd(dn, Scalar.of(t), cert)
        expected = s + bracket(dn, s) * Scalar.of(t)
        assert ad_conjugate(phi, s) == expected
    assert ad_conjugate(PolyAutomorphism.identity(), s) == s
    tau = PolyAutomorphism.swap()
    assert ad_conjugate(tau, parse_derivation("y^3*dx")) == parse_derivation("x^3*dy")


def test_ad_is_lie_homomorphism(rng: random.Random):
    dn1 = parse_derivation("y*dx")
    dn2 = parse_derivation("x*dy")
    c1 = certify_locally_nilpotent(dn1)
    c2 = certify_locally_nilpotent(dn2)
    phi = exp_lnd(dn1, Scalar.of(2), c1).compose(exp_lnd(dn2, Scalar.of(-1), c2))
    for _ in range(25):
        d1 = from_graded(random_graded(rng, max_weight=4, max_terms=2))
        d2 = from_graded(random_graded(rng, max_weight=4, max_terms=2))
        assert ad_conjugate(phi, bracket(d1, d2)) == \
            bracket(ad_conjugate(phi, d1), ad_conjugate(phi, d2))
