"""Exact linear algebra over Q(sqrt2).

Two flavors are needed: sparse reduced echelon forms over an ordered set of
coordinate keys (monomials, lattice points), and small dense matrices for
orbit operators (products, inverses, minimal polynomials).  Everything is
deterministic: the reduced echelon basis of a subspace is unique once the
coordinate order is fixed.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable

from .errors import FieldExtensionRequired
from .scalars import ONE, Scalar

Vector = dict  # coordinate key -> nonzero Scalar


class SparseEchelon:
    """Incremental reduced echelon form over sparse vectors.

    ``key_order`` maps a coordinate key to a sortable value; the pivot of a
    vector is its minimal coordinate under that order.  Rows are kept fully
    reduced against each other and normalized to pivot coefficient 1, so the
    stored basis is the unique RREF basis of the span.
    """

    def __init__(self, key_order: Callable[[Hashable], object]):
        self.key_order = key_order
        self.rows: dict[Hashable, Vector] = {}  # pivot key -> row

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Vector) -> Vector:
        """Remainder of vec modulo the current span (a fresh dict).

        The form is fully reduced, so no pivot coordinate occurs in another
        row; one pass over the pivots present in vec suffices (subtracting a
        row can only introduce non-pivot coordinates).
        """
        out = {k: c for k, c in vec.items() if c}
        for pivot in [k for k in out if k in self.rows]:
            c = out.get(pivot)
            if not c:
                continue
            for k, v in self.rows[pivot].items():
                newc = out.get(k, Scalar()) - c * v
                if newc:
                    out[k] = newc
                else:
                    out.pop(k, None)
        return out

    def contains(self, vec: Vector) -> bool:
        return not self.reduce(vec)

    def insert(self, vec: Vector) -> bool:
        """Add vec to the span; returns True when the dimension grew."""
        rem = self.reduce(vec)
        if not rem:
            return False
        pivot = min(rem, key=self.key_order)
        inv = rem[pivot].inverse()
        row = {k: c * inv for k, c in rem.items()}
        # back-substitute into existing rows to keep the form fully reduced
        for other in self.rows.values():
            c = other.get(pivot)
            if not c:
                continue
            for k, v in row.items():
                newc = other.get(k, Scalar()) - c * v
                if newc:
                    other[k] = newc
                else:
                    other.pop(k, None)
        self.rows[pivot] = row
        return True

    def basis(self) -> list[Vector]:
        """Rows ordered by pivot; each is a copy."""
        return [dict(self.rows[p]) for p in sorted(self.rows, key=self.key_order)]

    def coordinates(self, vec: Vector) -> list[Scalar] | None:
        """Coordinates of vec in the pivot-ordered basis, or None if outside."""
        out = {k: c for k, c in vec.items() if c}
        pivots = sorted(self.rows, key=self.key_order)
        coords = []
        for pivot in pivots:
            c = out.get(pivot, Scalar())
            coords.append(c)
            if c:
                for k, v in self.rows[pivot].items():
                    newc = out.get(k, Scalar()) - c * v
                    if newc:
                        out[k] = newc
                    else:
                        out.pop(k, None)
        if out:
            return None
        return coords


# -- dense matrices -----------------------------------------------------------

Matrix = list  # list of rows of Scalar


def mat_identity(n: int) -> Matrix:
    return [[ONE if i == j else Scalar() for j in range(n)] for i in range(n)]


def mat_zero(n: int) -> Matrix:
    return [[Scalar() for _ in range(n)] for _ in range(n)]


def mat_is_zero(m: Matrix) -> bool:
    return all(not c for row in m for c in row)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]

def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, c: Scalar) -> Matrix:
    return [[x * c for x in row] for row in a]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    m = len(b[0])
    k = len(b)
    out = [[Scalar() for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for l in range(k):
            c = a[i][l]
            if not c:
                continue
            row_b = b[l]
            row_o = out[i]
            for j in range(m):
                if row_b[j]:
                    row_o[j] = row_o[j] + c * row_b[j]
    return out


def mat_vec(a: Matrix, v: list[Scalar]) -> list[Scalar]:
    return [sum((c * x for c, x in zip(row, v) if c and x), Scalar()) for row in a]


def mat_pow(a: Matrix, n: int) -> Matrix:
    out = mat_identity(len(a))
    base = [row[:] for row in a]
    while n:
        if n & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        n >>= 1
    return out


def mat_inverse(a: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan; raises FieldExtensionRequired if singular."""
    n = len(a)
    aug = [row[:] + ident_row for row, ident_row in zip(a, mat_identity(n))]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise FieldExtensionRequired("matrix is singular over Q(sqrt2)")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [c * inv for c in aug[col]]
        for r in range(n):
            if r == col or not aug[r][col]:
                continue
            factor = aug[r][col]
            aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def mat_nilpotent(a: Matrix) -> bool:
    """Exact nilpotency test: a^n == 0 for n = dim."""
    return mat_is_zero(mat_pow(a, len(a))) if a else True


def mat_nullspace(a: Matrix, ncols: int) -> list[list[Scalar]]:
    """Deterministic kernel basis of a (possibly non-square) matrix."""
    rows = [row[:] for row in a]
    nrows = len(rows)
    pivots: dict[int, int] = {}  # column -> row
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, nrows) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[row], rows[pivot] = rows[pivot], rows[row]
        inv = rows[row][col].inverse()
        rows[row] = [c * inv for c in rows[row]]
        for r in range(nrows):
            if r != row and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[row])]
        pivots[col] = row
        row += 1
    kernel = []
    for free in range(ncols):
        if free in pivots:
            continue
        vec = [Scalar() for _ in range(ncols)]
        vec[free] = ONE
        for col, r in pivots.items():
            vec[col] = -rows[r][free]
        kernel.append(vec)
    return kernel


# -- univariate polynomials over Q(sqrt2) --------------------------------------
# Represented as coefficient lists, low degree first, no trailing zeros.


def upoly_trim(p: list[Scalar]) -> list[Scalar]:
    while p and not p[-1]:
        p.pop()
    return p


def upoly_mul(p: list[Scalar], q: list[Scalar]) -> list[Scalar]:
    if not p or not q:
        return []
    out = [Scalar()] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] = out[i + j] + a * b
    return upoly_trim(out)


def upoly_divmod(p: list[Scalar], q: list[Scalar]) -> tuple[list[Scalar], list[Scalar]]:
    q = upoly_trim(q[:])
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = upoly_trim(p[:])
    quot = [Scalar()] * max(0, len(rem) - len(q) + 1)
    lead_inv = q[-1].inverse()
    while rem and len(rem) >= len(q):
        shift = len(rem) - len(q)
        factor = rem[-1] * lead_inv
        quot[shift] = factor
        for i, c in enumerate(q):
            rem[shift + i] = rem[shift + i] - factor * c
        upoly_trim(rem)
    return upoly_trim(quot), rem


def upoly_monic(p: list[Scalar]) -> list[Scalar]:
    p = upoly_trim(p[:])
    if not p:
        return p
    inv = p[-1].inverse()
    return [c * inv for c in p]


def upoly_gcd(p: list[Scalar], q: list[Scalar]) -> list[Scalar]:
    a, b = upoly_trim(p[:]), upoly_trim(q[:])
    while b:
        _, r = upoly_divmod(a, b)
        a, b = b, r
    return upoly_monic(a)


def upoly_derivative(p: list[Scalar]) -> list[Scalar]:
    return upoly_trim([c * k for k, c in enumerate(p)][1:])


def upoly_eval_matrix(p: list[Scalar], m: Matrix) -> Matrix:
    """Evaluate p at a square matrix (Horner)."""
    n = len(m)
    out = mat_zero(n)
    for c in reversed(p):
        out = mat_mul(out, m)
        for i in range(n):
            out[i][i] = out[i][i] + c
    return out


def minimal_polynomial(m: Matrix) -> list[Scalar]:
    """Monic minimal polynomial via Krylov chains and lcm of annihilators."""
    n = len(m)
    if n == 0:
        return [Scalar(), ONE]  # T, by convention

    def vector_annihilator(v: list[Scalar]) -> list[Scalar]:
        # iterate v, Mv, M^2 v, ... until linear dependence; solve for the
        # monic relation among them
        iterates = [v]
        ech = SparseEchelon(lambda k: k)
        ech.insert({i: c for i, c in enumerate(v) if c})
        while True:
            nxt = mat_vec(m, iterates[-1])
            vec = {i: c for i, c in enumerate(nxt) if c}
            if ech.contains(vec):
                iterates.append(nxt)
                break
            ech.insert(vec)
            iterates.append(nxt)
        # solve sum_k a_k * iterates[k] = last iterate, then T^r - sum a_k T^k
        r = len(iterates) - 1
        cols = iterates[:r]
        target = iterates[r]
        coeffs = _solve_dense(cols, target)
        poly = [-c for c in coeffs] + [ONE]
        return upoly_trim(poly)

    result: list[Scalar] = [ONE]
    for idx in range(n):
        v = [ONE if i == idx else Scalar() for i in range(n)]
        ann = vector_annihilator(v)
        g = upoly_gcd(result, ann)
        quot, rem = upoly_divmod(ann, g)
        assert not rem
        result = upoly_mul(result, quot)
        if len(result) == n + 1:
            break
    return upoly_monic(result)


def _solve_dense(cols: list[list[Scalar]], target: list[Scalar]) -> list[Scalar]:
    """Solve sum_k x_k cols[k] = target exactly (must be consistent)."""
    n = len(target)
    k = len(cols)
    aug = [[cols[j][i] for j in range(k)] + [target[i]] for i in range(n)]
    piv_rows = []
    row = 0
    for col in range(k):
        pivot = next((r for r in range(row, n) if aug[r][col]), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = aug[row][col].inverse()
        aug[row] = [c * inv for c in aug[row]]
        for r in range(n):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        piv_rows.append((row, col))
        row += 1
    xs = [Scalar()] * k
    for r, c in piv_rows:
        xs[c] = aug[r][k]
    # consistency: rows beyond the pivots must be zero
    for r in range(row, n):
        if aug[r][k]:
            raise FieldExtensionRequired("inconsistent linear system")
    return xs
