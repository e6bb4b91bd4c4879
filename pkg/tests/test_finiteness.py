import random
from fractions import Fraction

import pytest

from planevec.errors import NotLocallyFinite
from planevec.finiteness import (
    Certificate,
    Inconclusive,
    OrbitBudget,
    OrbitClosure,
    certify_locally_finite,
    certify_locally_nilpotent,
    invariant_subspace,
    is_semisimple,
    jordan_decompose,
)
from planevec.linalg import mat_vec
from planevec.parsing import parse_derivation
from planevec.poly import BiPoly, poly_text
from planevec.scalars import Scalar
from planevec.vecfield import apply_derivation, bracket, euler_field

x = BiPoly.var_x()
y = BiPoly.var_y()


def coords_in(basis, f):
    from planevec.finiteness import _mono_order
    from planevec.linalg import SparseEchelon

    ech = SparseEchelon(_mono_order)
    for b in basis:
        ech.insert(dict(b.terms))
    return ech.coordinates(dict(f.terms))


def check_orbit_invariants(d, orbit: OrbitClosure):
    # d(basis_j) must equal the column j combination of the basis, exactly
    rows = orbit.matrix_rows()
    n = orbit.dim
    for j, b in enumerate(orbit.basis):
        image = apply_derivation(d, b)
        combo = BiPoly.zero()
        for i in range(n):
            if rows[i][j]:
                combo = combo + orbit.basis[i] * rows[i][j]
        assert image == combo
    assert coords_in(orbit.basis, orbit.seed) is not None


def test_orbit_nilpotent_pair():
    d = parse_derivation("y*dx")
    orbit = invariant_subspace(d, x)
    assert isinstance(orbit, OrbitClosure)
    assert set(orbit.basis) == {x, y}
    rows = orbit.matrix_rows()
    square = [[sum((rows[i][k] * rows[k][j] for k in range(2)), Scalar())
               for j in range(2)] for i in range(2)]
    assert all(not c for row in square for c in row)  # nilpotent of order 2
    check_orbit_invariants(d, orbit)


def test_orbit_euler_eigenvector():
    orbit = invariant_subspace(euler_field(), BiPoly.monomial(2, 1))
    assert isinstance(orbit, OrbitClosure)
    assert list(orbit.basis) == [BiPoly.monomial(2, 1)]
    assert orbit.matrix == ((Scalar.of(3),),)


def test_orbit_stable_at_two():
    d = parse_derivation("x^2*dy")
    orbit = invariant_subspace(d, y, OrbitBudget(max_dim=5))
    assert isinstance(orbit, OrbitClosure)
    assert set(orbit.basis) == {y, BiPoly.monomial(2, 0)}
    check_orbit_invariants(d, orbit)


def test_orbit_growth_is_inconclusive():
    d = parse_derivation("x^2*dx")
    result = invariant_subspace(d, x, OrbitBudget(max_dim=8, max_deg=12))
    assert isinstance(result, Inconclusive)
    assert len(result.dims) >= 2


def test_certify_lf_examples():
    cert = certify_locally_finite(parse_derivation("(x-y)^2*(dx+dy)"))
    assert cert.kind == "LocallyFinite"
    # orbit of x closes with (x-y)^2 in the basis span
    assert coords_in(cert.orbit_x.basis, (x - y) ** 2) is not None

    refuted = certify_locally_finite(parse_derivation("D[1,1]"))
    assert refuted.kind == "Refuted" and refuted.witness == (1, 1)

    grows = certify_locally_finite(parse_derivation("x^2*dx"))
    assert grows.kind == "Inconclusive"
    assert any(name == "x" for name, _ in grows.growth)


def test_certify_lnd_examples():
    cert = certify_locally_nilpotent(parse_derivation("y*dx"))
    assert cert.kind == "LocallyNilpotent" and cert.order == 2

    semisimple = certify_locally_nilpotent(parse_derivation("x*dx - y*dy"))
    assert semisimple.kind == "Refuted"

    sq = certify_locally_nilpotent(parse_derivation("(x-y)^2*(dx+dy)"))
    assert sq.kind == "LocallyNilpotent" and sq.order == 2


def test_lnd_order_invariant():
    for text in ("y*dx", "x*dy", "(x-y)^2*(dx+dy)", "y^3*dx + dy"):
        d = parse_derivation(text)
        cert = certify_locally_nilpotent(d)
        assert cert.kind == "LocallyNilpotent"
        n = cert.order
        dx_n, dy_n = x, y
        for _ in range(n):
            dx_n = apply_derivation(d, dx_n)
            dy_n = apply_derivation(d, dy_n)
        assert dx_n.is_zero() and dy_n.is_zero()
        # order is sharp: d^(n-1) does not kill both generators
        dx_p, dy_p = x, y
        for _ in range(n - 1):
            dx_p = apply_derivation(d, dx_p)
            dy_p = apply_derivation(d, dy_p)
        assert not (dx_p.is_zero() and dy_p.is_zero())


def test_zero_derivation_certificates():
    zero = parse_derivation("0*dx")
    cert = certify_locally_nilpotent(zero)
    assert cert.kind == "LocallyNilpotent" and cert.order == 1


def test_fast_filter_soundness(rng: random.Random):
    # no derivation both certifies LocallyNilpotent and fails the vertex filter
    from planevec.vecfield import classify_lf_shape, from_graded, to_graded

    from conftest import random_graded

    for _ in range(60):
        g = random_graded(rng, max_weight=5, max_terms=2)
        d = from_graded(g)
        cert = certify_locally_nilpotent(d, OrbitBudget(max_dim=12, max_deg=16))
        if cert.kind == "LocallyNilpotent":
            assert classify_lf_shape(g).passes_lnd


def test_jordan_paper_example():
    d = parse_derivation("x*dx + y*dy + x*dy")
    d_s, d_n = jordan_decompose(d)
    assert d_s == parse_derivation("x*dx + y*dy")
    assert d_n == parse_derivation("x*dy")
    assert d_s + d_n == d
    assert bracket(d_s, d_n).is_zero()
    assert certify_locally_nilpotent(d_n).kind == "LocallyNilpotent"


def test_jordan_trivial_cases():
    s = parse_derivation("x*dx - y*dy")
    d_s, d_n = jordan_decompose(s)
    assert d_s == s and d_n.is_zero()

    n = parse_derivation("y*dx")
    d_s, d_n = jordan_decompose(n)
    assert d_s.is_zero() and d_n == n


def test_jordan_idempotence():
    d = parse_derivation("x*dx + y*dy + x*dy")
    d_s, d_n = jordan_decompose(d)
    again_s, again_n = jordan_decompose(d_s)
    assert again_s == d_s and again_n.is_zero()
    nil_s, nil_n = jordan_decompose(d_n)
    assert nil_s.is_zero() and nil_n == d_n


def test_jordan_requires_local_finiteness():
    with pytest.raises(NotLocallyFinite):
        jordan_decompose(parse_derivation("x^2*dx"))


def test_jordan_with_surd_eigenvalues():
    # sqrt2 * Euler has a double eigenvalue on span{x, y}, so the y*dx part
    # is genuinely nilpotent and the Newton iteration runs over Q(sqrt2)
    d = parse_derivation("delta[sqrt2,sqrt2] + y*dx")
    d_s, d_n = jordan_decompose(d)
    assert d_s == parse_derivation("delta[sqrt2,sqrt2]")
    assert d_n == parse_derivation("y*dx")


def test_jordan_distinct_eigenvalues_is_semisimple():
    # eigenvalues 1 and sqrt2 are distinct, so the whole field is semisimple
    # even though y*dx does not commute with the toral part
    d = parse_derivation("delta[1,sqrt2] + y*dx")
    d_s, d_n = jordan_decompose(d)
    assert d_s == d and d_n.is_zero()
    assert is_semisimple(d)


def test_jordan_nontrivial_mix():
    # s = x*dx - y*dy with eigenvalue gap 2; the nilpotent part y*dx is an
    # ad-eigenvector, so the splitting is exact
    d = parse_derivation("x*dx - y*dy + x*dy")
    d_s, d_n = jordan_decompose(d)
    assert d_s + d_n == d
    assert bracket(d_s, d_n).is_zero()
    assert is_semisimple(d_s)
    assert certify_locally_nilpotent(d_n).kind == "LocallyNilpotent"


def test_is_semisimple():
    assert is_semisimple(parse_derivation("x*dx - y*dy"))
    assert is_semisimple(euler_field())
    assert not is_semisimple(parse_derivation("y*dx"))
    assert not is_semisimple(parse_derivation("x^2*dx"))


def test_product_rule_propagation():
    # if orbits of x and y close, products of their bases span an invariant
    # space of degree-2 polynomials
    d = parse_derivation("(x-y)^2*(dx+dy)")
    cert = certify_locally_finite(d)
    basis = list(cert.orbit_x.basis) + list(cert.orbit_y.basis)
    products = []
    for i in range(len(basis)):
        for j in range(i, len(basis)):
            products.append(basis[i] * basis[j])
    span = basis + products
    for f in products:
        image = apply_derivation(d, f)
        assert coords_in(span, image) is not None
