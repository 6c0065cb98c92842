"""
Equivariant modules over the quantum matrix algebras.

The basic module V carries the generator grid through the trace-dual
operator B, its contragradient V* through the braiding itself, and
every tensor product is glued by the braided coproduct, whose
transposition factor is the braiding between the endomorphism space
and the module being passed.  Symmetric submodules are cut out of
tensor powers by the q-symmetrizer subspaces and restricted; the
trace part of the generator grid acts by a scalar on each of these
modules, which is what the reduction to the traceless quotient and
the categorical dimension both feed on.

Conventions: a generator with the flat index i*n + j is the (i, j)
entry of the generator grid (i the lower index); module operators act
on column vectors.
"""

from __future__ import annotations

from .braiding import permutation_R
from .errors import NonScalarTrace, OmegaZero, TracelessUnitError
from .linalg import (
    FormalMat,
    Subspace,
    TensorOperator,
    embed,
    embed_legs,
    flatten_index,
    kron,
    projector_along,
)
from .ncpoly import mrea_from_R, preset
from .scalars import one, q, qint, qpow, zero


class Representation:
    """A finite-dimensional equivariant module, given by generator images.

    images maps the presentation's generator index to a TensorOperator on
    the module space; factors records how the space sits in the tensor
    category ("V" or "V*" per leg).  module is None for the full space or
    a Subspace with its inclusion, categorical retraction and projector.
    """

    __slots__ = ("presentation", "symmetry", "images", "factors", "module",
                 "incl", "retract", "lift")

    def __init__(self, presentation, symmetry, images, factors,
                 module=None, incl=None, retract=None, lift=None):
        self.presentation = presentation
        self.symmetry = symmetry
        self.images = dict(images)
        self.factors = tuple(factors)
        self.module = module
        self.incl = incl
        self.retract = retract
        self.lift = lift

    @property
    def dim(self):
        return next(iter(self.images.values())).size

    def image_of(self, el):
        """Image of an algebra element; products of generators compose."""
        if isinstance(el, str):
            el = self.presentation.element(el)
        dims = next(iter(self.images.values())).dims
        acc = TensorOperator.zeros(dims)
        for word, coeff in el.terms.items():
            op = TensorOperator.identity(dims)
            for g in word:
                op = op * self.images[g]
            acc = acc + op.scale(coeff)
        return acc

    def check(self):
        """Leads of presentation rules that the images violate."""
        bad = []
        dims = next(iter(self.images.values())).dims
        for lead, tail in self.presentation.rules.items():
            op = TensorOperator.identity(dims)
            for g in lead:
                op = op * self.images[g]
            for word, coeff in tail:
                t = TensorOperator.identity(dims)
                for g in word:
                    t = t * self.images[g]
                op = op - t.scale(coeff)
            if not op.is_zero():
                bad.append(lead)
        return bad

    def quantum_trace(self, X):
        """Normalized categorical trace of an endomorphism of the module."""
        if self.module is not None:
            amb = _mat_chain(self.incl, X.rows, self.retract)
            X = TensorOperator([len(amb)], amb)
        ops = [self.symmetry.C if f == "V" else self.symmetry.B
               for f in self.factors]
        Cs = kron(*ops)
        flat = TensorOperator([Cs.size], [list(r) for r in X.rows])
        Cs = TensorOperator([Cs.size], [list(r) for r in Cs.rows])
        e = self.symmetry.eigenvalue
        return (e ** (2 * len(self.factors))) * (Cs * flat).trace()

    def qdim(self):
        d = self.dim
        return self.quantum_trace(TensorOperator.identity([d]))

    def __repr__(self):
        return (f"Representation(dim={self.dim}, "
                f"factors={'(x)'.join(self.factors)})")


def check_rep(rep):
    return rep.check()


def _mat_chain(*mats):
    """Product of rectangular matrices given as nested sequences."""
    out = [list(r) for r in mats[0]]
    for m in mats[1:]:
        rows = len(out)
        inner = len(out[0])
        cols = len(m[0])
        nxt = [[zero] * cols for _ in range(rows)]
        for i in range(rows):
            for k in range(inner):
                a = out[i][k]
                if not a:
                    continue
                row = m[k]
                for j in range(cols):
                    if row[j]:
                        nxt[i][j] = nxt[i][j] + a * row[j]
        out = nxt
    return out


# ---------------------------------------------------------------------------
# the two basic modules


def rho_v(H, presentation=None):
    """The basic module: the grid entry (i, j) sends x_k to x_i B^j_k."""
    n = H.n
    P = presentation if presentation is not None else mrea_from_R(H, 1)
    images = {}
    for i in range(n):
        for j in range(n):
            rows = [[zero] * n for _ in range(n)]
            for k in range(n):
                rows[i][k] = H.B.rows[j][k]
            images[i * n + j] = TensorOperator([n], rows)
    return Representation(P, H, images, ("V",))


def rho_vstar(H, presentation=None):
    """The contragradient module: the grid entry (i, j) sends the dual
    vector x^k to -x^r R^{kj}_{ri}."""
    n = H.n
    P = presentation if presentation is not None else mrea_from_R(H, 1)
    images = {}
    for i in range(n):
        for j in range(n):
            rows = [[zero] * n for _ in range(n)]
            for r in range(n):
                for k in range(n):
                    v = H.R.rows[flatten_index((n, n), (k, j))][
                        flatten_index((n, n), (r, i))]
                    if v:
                        rows[r][k] = -v
            images[i * n + j] = TensorOperator([n], rows)
    return Representation(P, H, images, ("V*",))


# ---------------------------------------------------------------------------
# braidings of the endomorphism space


def end_braiding(H):
    """Braiding on two endomorphism factors in the plain grid basis.

    Row and column indices are g1*n^2 + g2 for the basis L_g1 (x) L_g2;
    built from the trace formula with the skew-inverse.
    """
    n = H.n
    dims = (n, n, n)
    lab = lambda i, j: i * n + j
    R10 = FormalMat.from_scalar(embed_legs(H.R, (2, 1), dims))
    R10i = FormalMat.from_scalar(embed_legs(H.R.inverse(), (2, 1), dims))
    Psi02 = FormalMat.from_scalar(embed_legs(H.Psi, (1, 3), dims))
    Lhat = FormalMat.generator_slot(dims, 2, lab)
    M = ((R10 * Lhat * R10i) * (Lhat * R10 * Psi02)).partial_trace({1})
    M = M * FormalMat.from_scalar(permutation_R(n))
    N2 = n * n
    rows = [[zero] * (N2 * N2) for _ in range(N2 * N2)]
    for a1 in range(n):
        for a2 in range(n):
            for c1 in range(n):
                for c2 in range(n):
                    col = (a1 * n + c1) * N2 + (a2 * n + c2)
                    for (g1, g2), v in M.entry(a1 * n + a2, c1 * n + c2).items():
                        rows[g1 * N2 + g2][col] = v
    return TensorOperator([N2, N2], rows)


def _module_braid_core(H):
    n = H.n
    dims = (n, n, n)
    lab = lambda i, j: i * n + j
    R10 = FormalMat.from_scalar(embed_legs(H.R, (2, 1), dims))
    Psi02 = FormalMat.from_scalar(embed_legs(H.Psi, (1, 3), dims))
    L0 = FormalMat.generator_slot(dims, 1, lab)
    N = (R10 * L0 * Psi02).partial_trace({1})
    return N * FormalMat.from_scalar(permutation_R(n))


def module_braiding_table(H):
    """Transposition of a grid generator past a basic-module vector.

    Returns {(g, s): [(t, h, coeff)]} meaning the braiding sends
    L_g (x) x_s to the sum of coeff * x_t (x) L_h.
    """
    n = H.n
    N = _module_braid_core(H)
    table = {(g, s): [] for g in range(n * n) for s in range(n)}
    for i in range(n):
        for j in range(n):
            for s in range(n):
                for t in range(n):
                    for (h,), v in N.entry(i * n + s, j * n + t).items():
                        table[(i * n + j, s)].append((t, h, v))
    return table


def end_module_braiding(H):
    """Matrix form of module_braiding_table; column index g*n + s for
    L_g (x) x_s in, row index t*n^2 + h for x_t (x) L_h out."""
    n = H.n
    n3 = n * n * n
    rows = [[zero] * n3 for _ in range(n3)]
    for (g, s), outs in module_braiding_table(H).items():
        for t, h, v in outs:
            rows[t * n * n + h][g * n + s] = v
    return TensorOperator([n3], rows)


def _braid_table_power(H, m):
    """Transposition of a grid generator past V^(x m), by iterating the
    one-factor table; keys (g, flat s), values [(flat t, h, coeff)]."""
    n = H.n
    base = module_braiding_table(H)
    table = {(g, 0): [(0, g, one)] for g in range(n * n)}
    size = 1
    for _ in range(m):
        nxt = {}
        for g in range(n * n):
            for s0 in range(n):
                for rest in range(size):
                    outs = []
                    for t0, h, c in base[(g, s0)]:
                        for t_rest, h2, c2 in table[(h, rest)]:
                            outs.append((t0 * size + t_rest, h2, c * c2))
                    nxt[(g, s0 * size + rest)] = outs
        table = nxt
        size *= n
    return table


# ---------------------------------------------------------------------------
# tensor products via the braided coproduct


def tensor_rep(r1, r2):
    """Module structure on the tensor product of two modules.

    The grid generator acts by its image on the first factor, plus its
    image on the second factor carried through the braiding, minus the
    eigenvalue gap times the convolution of the two; the first factor
    must be a full tensor power of the basic module, the only case the
    transposition is built for.
    """
    if r1.module is not None or any(f != "V" for f in r1.factors):
        raise ValueError("first factor must be a full power of the basic module")
    if r2.module is not None:
        raise ValueError("restrict after taking the product")
    H = r1.symmetry
    n = H.n
    lam = H.eigenvalue - H.eigenvalue.inv()
    table = _braid_table_power(H, len(r1.factors))
    N1, N2 = r1.dim, r2.dim
    dims1 = next(iter(r1.images.values())).dims
    dims2 = next(iter(r2.images.values())).dims
    dims = dims1 + dims2
    N = N1 * N2
    images = {}
    for i in range(n):
        for j in range(n):
            g = i * n + j
            rows = [[zero] * N for _ in range(N)]
            A = r1.images[g]
            for u in range(N1):
                for v in range(N1):
                    a = A.rows[u][v]
                    if a:
                        for w in range(N2):
                            rows[u * N2 + w][v * N2 + w] = (
                                rows[u * N2 + w][v * N2 + w] + a)
            for s in range(N1):
                for t, h, c in table[(g, s)]:
                    B = r2.images[h]
                    for rr in range(N2):
                        brow = B.rows[rr]
                        for cc in range(N2):
                            if brow[cc]:
                                rows[t * N2 + rr][s * N2 + cc] = (
                                    rows[t * N2 + rr][s * N2 + cc]
                                    + c * brow[cc])
            if lam:
                for k in range(n):
                    A1 = r1.images[i * n + k]
                    for s in range(N1):
                        for t, h, c in table[(k * n + j, s)]:
                            B = r2.images[h]
                            for u in range(N1):
                                a = A1.rows[u][t]
                                if not a:
                                    continue
                                f = lam * c * a
                                for rr in range(N2):
                                    brow = B.rows[rr]
                                    for cc in range(N2):
                                        if brow[cc]:
                                            rows[u * N2 + rr][s * N2 + cc] = (
                                                rows[u * N2 + rr][s * N2 + cc]
                                                - f * brow[cc])
            images[g] = TensorOperator(dims, rows)
    return Representation(r1.presentation, H, images,
                          r1.factors + r2.factors)


def adjoint_rep(H, presentation=None):
    """The grid acting on itself: the product of the basic module and
    its contragradient, with the grid basis L_g at flat index g."""
    P = presentation if presentation is not None else mrea_from_R(H, 1)
    return tensor_rep(rho_v(H, P), rho_vstar(H, P))


def adjoint_action_matrix(H):
    """Closed form of the adjoint action in the plain basis: the entry
    at (row (i, k), col (j, l)) is the image of L_k^l under L_i^j."""
    n = H.n
    dims2 = (n, n)
    dims3 = (n, n, n)
    lab = lambda i, j: i * n + j
    lam = H.eigenvalue - H.eigenvalue.inv()
    L2 = FormalMat.generator_slot(dims2, 1, lab)
    P = FormalMat.from_scalar(permutation_R(n))
    B2 = FormalMat.from_scalar(embed(H.B, 2, dims2))
    term12 = L2.scale(lam) + L2 * B2 * P
    R10 = FormalMat.from_scalar(embed_legs(H.R, (2, 1), dims3))
    Psi02 = FormalMat.from_scalar(embed_legs(H.Psi, (1, 3), dims3))
    L1 = FormalMat.generator_slot(dims3, 2, lab)
    term3 = (R10 * L1 * R10 * Psi02).partial_trace({1}) * P
    return term12 - term3


def copies_grid(H, k):
    """The k commuting copies of the generator grid on V^(x k): the
    first is the grid on the first leg, each next one is the previous
    conjugated by the braiding at that position."""
    n = H.n
    dims = (n,) * k
    lab = lambda i, j: i * n + j
    out = [FormalMat.generator_slot(dims, 1, lab)]
    for p in range(1, k):
        Rp = FormalMat.from_scalar(embed(H.R, p, dims))
        Rpi = FormalMat.from_scalar(embed(H.R.inverse(), p, dims))
        out.append(Rp * out[-1] * Rpi)
    return out


# ---------------------------------------------------------------------------
# symmetric modules


def _embedded_square(H, basis, k):
    """All embeddings of a 2-leg subspace basis into V^(x k)."""
    n = H.n
    dims = (n,) * k
    spaces = []
    for pos in range(k - 1):
        pre, post = pos, k - 2 - pos
        vecs = []
        for b in basis:
            for u in range(n ** pre):
                for w in range(n ** post):
                    vec = [zero] * (n ** k)
                    for idx, val in enumerate(b):
                        if val:
                            vec[(u * n ** 2 + idx) * n ** post + w] = val
                    vecs.append(tuple(vec))
        spaces.append(Subspace(dims, vecs))
    return spaces


def symmetric_module(H, k, presentation=None):
    """The k-th symmetric module: the symmetrizer subspace of V^(x k)
    with the restricted iterated tensor action; the complement spanned
    by the embedded antisymmetric squares supplies the categorical
    projector used for restriction and traces."""
    base = rho_v(H, presentation)
    if k == 1:
        return base
    rep = base
    for _ in range(k - 1):
        rep = tensor_rep(base, rep)
    U = H.sym_power(k)
    W = None
    for sp in _embedded_square(H, H.wedge2_image().basis, k):
        W = sp if W is None else W.sum(sp)
    lift = projector_along(U, W)
    pivots = []
    for b in U.basis:
        pivots.append(next(i for i, v in enumerate(b) if v))
    incl = [[U.basis[c][r] for c in range(U.dim)] for r in range(U.ambient_dim)]
    retract = [list(lift.rows[p]) for p in pivots]
    images = {}
    for g, X in rep.images.items():
        for b in U.basis:
            if not U.contains(X.apply(b)):
                raise ValueError("symmetrizer subspace is not invariant")
        images[g] = TensorOperator([U.dim],
                                   _mat_chain(retract, X.rows, incl))
    return Representation(rep.presentation, H, images, rep.factors,
                          module=U, incl=incl, retract=retract, lift=lift)


# ---------------------------------------------------------------------------
# reduction to the traceless quotient


def _weighted_trace_image(rep):
    H = rep.symmetry
    n = H.n
    dims = next(iter(rep.images.values())).dims
    acc = TensorOperator.zeros(dims)
    for i in range(n):
        for j in range(n):
            c = H.C.rows[i][j]
            if c:
                acc = acc + rep.images[j * n + i].scale(c)
    return acc


def sl_reduce_images(rep):
    """Images of the traceless part of the grid: subtract the scalar of
    the weighted trace and divide by the unit normalization.

    Returns ({(i, j): operator}, omega, chi1); the weighted trace must
    act as a scalar chi1 and omega = 1 - gap * chi1 / tr C must be a unit.
    """
    H = rep.symmetry
    n = H.n
    X = _weighted_trace_image(rep)
    dims = X.dims
    chi1 = X.rows[0][0]
    if X != TensorOperator.identity(dims).scale(chi1):
        raise NonScalarTrace("weighted trace image is not scalar")
    trc = H.C.trace()
    if not trc:
        raise TracelessUnitError("trace of the dual operator vanishes")
    lam = H.eigenvalue - H.eigenvalue.inv()
    omega = one - lam * chi1 / trc
    if not omega:
        raise OmegaZero("unit normalization vanishes")
    shift = chi1 / trc
    w = omega.inv()
    grid = {}
    for i in range(n):
        for j in range(n):
            op = rep.images[i * n + j]
            if i == j:
                op = op - TensorOperator.identity(dims).scale(shift)
            grid[(i, j)] = op.scale(w)
    return grid, omega, chi1


def sl_reduce_rep(rep):
    """The module seen by the traceless quotient algebra; standard n = 2
    only, where that quotient has the three-generator presentation."""
    H = rep.symmetry
    if H.n != 2 or H.eigenvalue != q:
        raise ValueError("named traceless quotient needs the standard n=2 symmetry")
    grid, _, _ = sl_reduce_images(rep)
    hbar = rep.presentation.meta.get("hbar", one)
    P = preset("sl_n2", hbar=hbar)
    two = qint(2)
    h_img = grid[(0, 0)].scale(two / q)
    assert h_img == grid[(1, 1)].scale(-(two * q)), "grid trace part survived"
    images = {P.index["b"]: grid[(0, 1)],
              P.index["h"]: h_img,
              P.index["c"]: grid[(1, 0)]}
    return Representation(P, H, images, rep.factors, module=rep.module,
                          incl=rep.incl, retract=rep.retract, lift=rep.lift)


# ---------------------------------------------------------------------------
# scalar data


def casimir_value(k):
    """Scalar of the quadratic central element on the k-th symmetric
    module of the standard n = 2 symmetry."""
    kq, k2q = qint(k), qint(k + 2)
    d = k2q - kq
    return qpow(-2) * (kq * k2q / qint(k + 1)) * (k2q + kq) / (d * d)


def uqsl2_module(k):
    """The k+1 dimensional module of the standard quantized enveloping
    algebra, with the grid generators it induces.

    Returns E, F, qH (the half-weight exponential) together with the
    induced l, h, b, c; k must be even so the half weights stay in the
    ground field.  The trace generator l is normalized so that the grid
    satisfies the unmodified reflection relations; it acts by the
    scalar q^(k+1) + q^(-k-1).
    """
    if k % 2:
        raise ValueError("odd symmetric degree needs half-integer powers")
    d = k + 1
    E = [[zero] * d for _ in range(d)]
    F = [[zero] * d for _ in range(d)]
    qH = [[zero] * d for _ in range(d)]
    qHi = [[zero] * d for _ in range(d)]
    for m in range(d):
        qH[m][m] = qpow((k - 2 * m) // 2)
        qHi[m][m] = qpow(-(k - 2 * m) // 2)
        if m > 0:
            E[m - 1][m] = qint(m)
        if m < k:
            F[m + 1][m] = qint(k - m)
    E = TensorOperator([d], E)
    F = TensorOperator([d], F)
    qH = TensorOperator([d], qH)
    qHi = TensorOperator([d], qHi)
    lam = q - qpow(-1)
    h = (E * F * q - F * E * qpow(-1)).scale(-lam * qpow(-1))
    b = (qHi * E).scale(lam)
    c = (qHi * F).scale(lam * qpow(-2))
    ell = TensorOperator(
        [d],
        [[qpow(k - 2 * m + 1) + qpow(2 * m - k - 1) if m == r else zero
          for m in range(d)] for r in range(d)],
    ) + (F * E).scale(lam * lam)
    return {"E": E, "F": F, "qH": qH, "h": h, "b": b, "c": c, "l": ell}
