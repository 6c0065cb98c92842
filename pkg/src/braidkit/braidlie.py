"""
Braided Lie algebra structure on the span of the generator grid.

The quadratic exchange operator conjugates the copies basis by the
braiding; the bracket composes the grid product with the complement
of that exchange, and its adjoint action is exactly the coproduct
action of the grid on itself.  For an involutive symmetry the
exchange coincides with the braiding of the endomorphism space and
the bracket satisfies the generalized Lie algebra axioms; in the
Hecke case the Jacobi identity survives in a one-sided form and the
skew-symmetry is measured against a total symmetrizer.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import NotInvolutive
from .linalg import FormalMat, TensorOperator, embed
from .ncpoly import mrea_from_R
from .reptheory import Representation, check_rep
from .scalars import one, q, qint, qpow, zero


def _mm(a, b):
    """Product of rectangular matrices over QScalar."""
    rows, inner, cols = len(a), len(b), len(b[0])
    out = [[zero] * cols for _ in range(rows)]
    for i in range(rows):
        for k in range(inner):
            v = a[i][k]
            if not v:
                continue
            brow = b[k]
            orow = out[i]
            for j in range(cols):
                if brow[j]:
                    orow[j] = orow[j] + v * brow[j]
    return out


def _ident(m):
    return [[one if i == j else zero for j in range(m)] for i in range(m)]


def _msub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _rkron(a, b):
    """Kronecker product of rectangular matrices."""
    ra, ca = len(a), len(a[0])
    rb, cb = len(b), len(b[0])
    out = [[zero] * (ca * cb) for _ in range(ra * rb)]
    for i in range(ra):
        for j in range(ca):
            v = a[i][j]
            if not v:
                continue
            for k in range(rb):
                for l in range(cb):
                    if b[k][l]:
                        out[i * rb + k][j * cb + l] = v * b[k][l]
    return out


@lru_cache(maxsize=None)
def _copies_transform(H):
    """Plain coordinates of the copies basis of the grid square.

    Column (a*n^2 + d) holds the entry at position (a, d) of the
    product of the two grid copies, expanded over the plain basis
    with flat index g1*n^2 + g2.
    """
    n = H.n
    dims = (n, n)
    lab = lambda i, j: i * n + j
    L1 = FormalMat.generator_slot(dims, 1, lab)
    Rf = FormalMat.from_scalar(H.R)
    Rfi = FormalMat.from_scalar(H.R.inverse())
    CB = L1 * (Rf * L1 * Rfi)
    m = n * n
    rows = [[zero] * (m * m) for _ in range(m * m)]
    for a in range(m):
        for d in range(m):
            for (g1, g2), v in CB.entry(a, d).items():
                rows[g1 * m + g2][a * m + d] = v
    return TensorOperator([m, m], rows), CB


def _exchange(H, right_inverse):
    n = H.n
    m = n * n
    U, CB = _copies_transform(H)
    Rf = FormalMat.from_scalar(H.R)
    Rfi = FormalMat.from_scalar(H.R.inverse())
    moved = Rfi * CB * (Rfi if right_inverse else Rf)
    rows = [[zero] * (m * m) for _ in range(m * m)]
    for a in range(m):
        for d in range(m):
            for (g1, g2), v in moved.entry(a, d).items():
                rows[g1 * m + g2][a * m + d] = v
    return TensorOperator([m, m], rows) * U.inverse()


def build_Q(H):
    """Exchange operator on the grid square: conjugation of the copies
    by the braiding, expressed in the plain basis."""
    return _exchange(H, right_inverse=False)


def build_Qprime(H):
    """Partner exchange with the inverse braiding on both sides; its
    complement spans the antisymmetric half of the grid square."""
    return _exchange(H, right_inverse=True)


def build_Sq(H):
    """Total symmetrizer of the grid square, the spectral projector of
    the exchange operator on its fixed subspace.  The coefficients use
    the eigenvalue of the symmetry, so the involutive case degenerates
    to the plain half-sum."""
    Q = build_Q(H)
    e = H.eigenvalue
    ee = e * e + (e * e).inv()
    Id = TensorOperator.identity(Q.dims)
    Qinv = Q * Q + Q.scale(ee - one) - Id.scale(ee - one)
    two = e + e.inv()
    return (Id.scale(ee) + Q + Qinv).scale((two * two).inv())


def grid_product(H):
    """Composition product on the grid span in the plain basis: the
    matrix of End(V) multiplication transported through the basic
    module action, as rows over pairs g1*n^2 + g2."""
    n = H.n
    m = n * n
    rows = [[zero] * (m * m) for _ in range(m)]
    for i1 in range(n):
        for j1 in range(n):
            for i2 in range(n):
                for j2 in range(n):
                    v = H.B.rows[j1][i2]
                    if v:
                        rows[i1 * n + j2][(i1 * n + j1) * m + i2 * n + j2] = v
    return rows


class BraidedBracket:
    """Bracket on the grid span, as structure constants.

    rows[h][g1*n^2 + g2] is the coefficient of the h-th grid element
    in the bracket of the g1-th with the g2-th.
    """

    __slots__ = ("symmetry", "rows")

    def __init__(self, symmetry, rows):
        self.symmetry = symmetry
        self.rows = tuple(tuple(r) for r in rows)

    def apply(self, x, y):
        """Bracket of two vectors in grid coordinates."""
        m = self.symmetry.n ** 2
        out = [zero] * m
        for g1, a in enumerate(x):
            if not a:
                continue
            for g2, b in enumerate(y):
                if not b:
                    continue
                col = g1 * m + g2
                for h in range(m):
                    v = self.rows[h][col]
                    if v:
                        out[h] = out[h] + a * b * v
        return out

    def adjoint_images(self):
        """ad of each grid element as an operator on the grid span,
        with the two index legs kept separate."""
        n = self.symmetry.n
        m = n * n
        images = {}
        for g in range(m):
            rows = [[self.rows[h][g * m + g2] for g2 in range(m)]
                    for h in range(m)]
            images[g] = TensorOperator([n, n], rows)
        return images

    def __repr__(self):
        return f"BraidedBracket(n={self.symmetry.n})"


def bracket(H, validate=True):
    """The braided bracket: grid product composed with the complement
    of the exchange operator.

    With validate the construction checks skew-symmetry against the
    total symmetrizer, the one-sided Jacobi identity, the adjoint
    action being a module structure and the invariance under the
    braiding of the endomorphism space.
    """
    Q = build_Q(H)
    m = Q.size
    mult = grid_product(H)
    rows = _mm(mult, _msub(_ident(m * m), [list(r) for r in Q.rows]))
    br = BraidedBracket(H, rows)
    if validate:
        _validate_bracket(br, Q)
    return br


def _validate_bracket(br, Q):
    from .reptheory import end_braiding

    H = br.symmetry
    m = H.n ** 2
    rows = [list(r) for r in br.rows]
    Sq = [list(r) for r in build_Sq(H).rows]
    if any(v for row in _mm(rows, Sq) for v in row):
        raise AssertionError("bracket is not skew against the symmetrizer")
    Id_m = _ident(m)
    br12 = _rkron(rows, Id_m)
    br23 = _rkron(Id_m, rows)
    d3 = (m, m, m)
    Q12 = [list(r) for r in embed(Q, 1, d3).rows]
    lhs = _mm(rows, _mm(br23, _msub(_ident(m ** 3), Q12)))
    rhs = _mm(rows, br12)
    if lhs != rhs:
        raise AssertionError("one-sided Jacobi identity fails")
    P = mrea_from_R(H, 1)
    rep = Representation(P, H, br.adjoint_images(), ("V", "V*"))
    if check_rep(rep):
        raise AssertionError("adjoint action is not a module structure")
    RE = end_braiding(H)
    RE12 = [list(r) for r in embed(RE, 1, d3).rows]
    RE23 = [list(r) for r in embed(RE, 2, d3).rows]
    REm = [list(r) for r in RE.rows]
    if _mm(REm, br23) != _mm(br12, _mm(RE23, RE12)):
        raise AssertionError("bracket is not invariant under the braiding")
    if _mm(REm, br12) != _mm(br23, _mm(RE12, RE23)):
        raise AssertionError("bracket is not invariant under the braiding")


def glie_axiom_check(H, br=None):
    """Generalized Lie algebra axioms for an involutive symmetry.

    Returns {axiom: bool} for the skew-symmetry, the three forms of
    the Jacobi identity and the compatibility with the braiding; the
    bracket defaults to the braided one, which for involutive input
    is the product composed with the braiding complement.
    """
    from .reptheory import end_braiding

    Id2 = TensorOperator.identity(H.R.dims)
    if H.R * H.R != Id2:
        raise NotInvolutive("axioms need an involutive symmetry")
    if br is None:
        br = bracket(H)
    m = H.n ** 2
    rows = [list(r) for r in br.rows]
    RET = end_braiding(H)
    RE = [list(r) for r in RET.rows]
    Id_m = _ident(m)
    br12 = _rkron(rows, Id_m)
    br23 = _rkron(Id_m, rows)
    d3 = (m, m, m)
    R12 = [list(r) for r in embed(RET, 1, d3).rows]
    R23 = [list(r) for r in embed(RET, 2, d3).rows]
    I3 = _ident(m ** 3)
    cyc = [[a + b for a, b in zip(ra, rb)]
           for ra, rb in zip(_mm(R12, R23), _mm(R23, R12))]
    cyc = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(I3, cyc)]
    out = {}
    out["skew"] = _mm(rows, RE) == [[-v for v in r] for r in rows]
    out["jacobi"] = not any(v for row in _mm(rows, _mm(br12, cyc))
                            for v in row)
    out["jacobi_a"] = not any(v for row in _mm(rows, _mm(br23, cyc))
                              for v in row)
    out["jacobi_b"] = _mm(rows, _mm(br12, _msub(I3, R23))) == \
        _mm(rows, br23)
    out["jacobi_c"] = _mm(rows, _mm(br23, _msub(I3, R12))) == \
        _mm(rows, br12)
    out["equivariance"] = _mm(RE, br23) == _mm(br12, _mm(R23, R12))
    return out


# ---------------------------------------------------------------------------
# the traceless part at n = 2


def sl_basis(H):
    """Grid coordinates of b, h, c spanning the kernel of the
    categorical trace for the standard two dimensional symmetry."""
    if H.n != 2:
        raise ValueError("the named traceless basis needs n = 2")
    b = (zero, one, zero, zero)
    h = (one, zero, zero, -one)
    c = (zero, zero, one, zero)
    return b, h, c


def sl_bracket_table(br):
    """The restricted bracket in the b, h, c coordinates.

    Returns ({(x, y): {name: coeff}}, w) where w is the overall scale
    read off the bracket of b with h; the output of the bracket on
    traceless inputs is itself traceless, which makes the coordinate
    split well defined.
    """
    H = br.symmetry
    vecs = dict(zip("bhc", sl_basis(H)))
    table = {}
    for x in "bhc":
        for y in "bhc":
            v = br.apply(vecs[x], vecs[y])
            if v[0] + v[3]:
                raise AssertionError("restricted bracket left the traceless part")
            out = {}
            for name, coeff in (("h", v[0]), ("b", v[1]), ("c", v[2])):
                if coeff:
                    out[name] = coeff
            table[(x, y)] = out
    w = -table[("b", "h")].get("b", zero)
    return table, w


def sl_split(H):
    """Splitting of the grid span into the trace line and its
    complement: the R-trace vector and the traceless grid.

    Returns (ell, F) where ell is the vector of the weighted trace of
    the grid and F maps a grid position to the vector of the traceless
    combination at that position.
    """
    from .errors import TracelessUnitError

    n = H.n
    trc = sum((H.C.rows[i][i] for i in range(n)), zero)
    if not trc:
        raise TracelessUnitError("the weighted trace of the unit vanishes")
    ell = [zero] * (n * n)
    for i in range(n):
        for j in range(n):
            c = H.C.rows[i][j]
            if c:
                ell[j * n + i] = ell[j * n + i] + c
    F = {}
    for i in range(n):
        for j in range(n):
            v = [zero] * (n * n)
            v[i * n + j] = one
            if i == j:
                for g in range(n * n):
                    v[g] = v[g] - ell[g] / trc
            F[(i, j)] = tuple(v)
    return tuple(ell), F


def _grid_slot1(vecs, n):
    """A grid of span vectors as a formal matrix acting on the first
    of two legs."""
    rows = []
    for i in range(n):
        for u in range(n):
            row = []
            for j in range(n):
                for v in range(n):
                    d = {}
                    if u == v:
                        for g, c in enumerate(vecs[(i, j)]):
                            if c:
                                d[(g,)] = c
                    row.append(d)
            rows.append(row)
    return FormalMat((n, n), rows)


def sl_naive_witness(H):
    """Inconsistency witness for the two-term traceless bracket.

    Dropping the conjugation term from the traceless adjoint formula
    leaves a prescription on the paired traceless copies that no
    linear map on the traceless square satisfies.  The witness is a
    vanishing combination of the paired entries whose two-term value
    is a nonzero span vector, returned as (coefficients over matrix
    positions, value); None means the prescription is consistent.
    """
    from .linalg import kernel

    n = H.n
    m = n * n
    _, F = sl_split(H)
    F1 = _grid_slot1(F, n)
    Rf = FormalMat.from_scalar(H.R)
    Rfi = FormalMat.from_scalar(H.R.inverse())
    prod = F1 * (Rf * F1 * Rfi)
    two_term = F1 * Rf - Rf * F1
    cols = []
    targets = []
    for a in range(m):
        for d in range(m):
            col = [zero] * (m * m)
            for (g1, g2), c in prod.entry(a, d).items():
                col[g1 * m + g2] = c
            cols.append(col)
            tv = [zero] * m
            for (g,), c in two_term.entry(a, d).items():
                tv[g] = tv[g] + c
            targets.append(tv)
    U = TensorOperator([m, m], [[cols[j][i] for j in range(m * m)]
                                for i in range(m * m)])
    for k in kernel(U):
        value = [zero] * m
        for j in range(m * m):
            if k[j]:
                for h in range(m):
                    value[h] = value[h] + k[j] * targets[j][h]
        if any(value):
            return tuple(k), tuple(value)
    return None


def adjoint_matrices(w):
    """The adjoint operators of b, h, c in their own basis, scaled by
    the free factor w; they satisfy the traceless quotient relations
    with the shifted constant w (q^4 - q^2 + 1) / 2_q."""
    if not w:
        raise ValueError("the scale must be nonzero")
    two = qint(2)
    B = TensorOperator([3], [[zero, -one, zero],
                             [zero, zero, q / two],
                             [zero, zero, zero]]).scale(w)
    Hm = TensorOperator([3], [[q * q, zero, zero],
                              [zero, q * q - one, zero],
                              [zero, zero, -one]]).scale(w)
    C = TensorOperator([3], [[zero, zero, zero],
                             [-q / two, zero, zero],
                             [zero, q * q, zero]]).scale(w)
    return B, Hm, C


def adjoint_hbar(w):
    """The relation constant carried by the adjoint operators."""
    return w * (qpow(4) - q * q + one) / qint(2)
