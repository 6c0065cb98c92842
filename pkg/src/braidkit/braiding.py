"""
Hecke symmetries: construction, validation, skew-inverse, R-traces.

A Hecke symmetry is an invertible R on V (x) V satisfying the braid
relation R12 R23 R12 = R23 R12 R23 and the quadratic Hecke condition
(R - e)(R + 1/e) = 0, where the eigenvalue e is q for the standard
deformations and 1 for involutive symmetries (flip, super-flip).

Skew-invertibility means the partial-trace system
    Tr_(2) R12 Psi23 = P13 = Tr_(2) Psi12 R23
has a solution Psi; then B = Tr_(1) Psi and C = Tr_(2) Psi, and the
R-trace of X on V is Tr(C X).  Index convention: entries are columns of
images, R[(k,j)][(r,i)] is the coefficient of x_k (x) x_j in the image
of x_r (x) x_i.
"""

from __future__ import annotations

from .errors import Inconsistent, NotSkewInvertible, Undetermined
from .linalg import Subspace, TensorOperator, embed, flatten_index, kron, partial_trace
from .scalars import one, parse_scalar, q, qpow, render_scalar, zero


def permutation_R(n, sign=None):
    """The flip x (x) y -> y (x) x, with optional parity signs."""
    rows = [[zero] * (n * n) for _ in range(n * n)]
    for i in range(n):
        for j in range(n):
            s = one if sign is None else sign(i, j)
            rows[j * n + i][i * n + j] = s
    return TensorOperator([n, n], rows)


def skew_inverse(R):
    """Solve Tr_(2) R12 Psi23 = P13 for Psi; NotSkewInvertible on failure.

    Componentwise the system reads, for all a, c, i, k:
        sum_{j,n} R[(a,j)][(i,n)] Psi[(n,c)][(j,k)] = delta(a,k) delta(c,i)
    and decouples over (c, k) into one n^2 x n^2 matrix M, so
    Psi[(n,c)][(j,k)] = (M^-1)[(n,j)][(k,c)].
    """
    n = R.dims[0]
    f = lambda a, b: flatten_index((n, n), (a, b))
    M = TensorOperator(
        [n, n],
        [
            [
                R.rows[f(a, j)][f(i, m)]
                for m in range(n)
                for j in range(n)
            ]
            for a in range(n)
            for i in range(n)
        ],
    )
    try:
        Minv = M.inverse()
    except Inconsistent:
        raise NotSkewInvertible("trace-inverse system is singular") from None
    rows = [[zero] * (n * n) for _ in range(n * n)]
    for m in range(n):
        for c in range(n):
            for j in range(n):
                for k in range(n):
                    rows[f(m, c)][f(j, k)] = Minv.rows[f(m, j)][f(k, c)]
    return TensorOperator([n, n], rows)


class HeckeSymmetry:
    """A validated Hecke symmetry with its skew-inverse and B, C operators."""

    def __init__(self, n, R, eigenvalue=q, birank=None, name="custom"):
        self.n = n
        self.R = R
        self.eigenvalue = eigenvalue
        self.birank = birank
        self.name = name
        self._validate_braid()
        self.Psi = skew_inverse(R)
        self._validate_skew()
        self.B = partial_trace(self.Psi, {1})
        self.C = partial_trace(self.Psi, {2})
        self._validate_traces()

    # -- validation, one invariant per method

    def _validate_braid(self):
        dims = (self.n,) * 3
        R12 = embed(self.R, 1, dims)
        R23 = embed(self.R, 2, dims)
        if R12 * R23 * R12 != R23 * R12 * R23:
            raise ValueError("R does not satisfy the braid relation")
        e = self.eigenvalue
        Id = TensorOperator.identity(self.R.dims)
        if (self.R - Id.scale(e)) * (self.R + Id.scale(e.inv())) != TensorOperator.zeros(self.R.dims):
            raise ValueError("R does not satisfy the Hecke condition")

    def _validate_skew(self):
        P = permutation_R(self.n)
        dims = (self.n,) * 3
        lhs = partial_trace(embed(self.Psi, 1, dims) * embed(self.R, 2, dims), {2})
        if lhs != partial_trace(embed(self.R, 1, dims) * embed(self.Psi, 2, dims), {2}):
            raise NotSkewInvertible("the two trace identities disagree")
        if lhs != P:
            raise NotSkewInvertible("trace identity does not give P13")

    def _validate_traces(self):
        Id = TensorOperator.identity([self.n])
        if partial_trace(kron(self.B, Id) * self.R, {1}) != Id:
            raise ValueError("Tr_(1) B1 R12 != Id")
        if partial_trace(kron(Id, self.C) * self.R, {2}) != Id:
            raise ValueError("Tr_(2) C2 R12 != Id")
        if self.birank is not None:
            m, k = self.birank
            expected = Id.scale(self.eigenvalue ** (2 * (k - m)))
            if self.B * self.C != expected:
                raise ValueError(f"B C != e^(2({k}-{m})) Id for declared bi-rank")

    # -- derived data

    def r_trace(self, X):
        """Tr_R(X) = sum C_i^j X_j^i = Tr(C X) for X on V."""
        return (self.C * X).trace()

    def r_partial_trace(self, Y, leg):
        """R-trace over one leg of an operator on a tensor power of V."""
        C_leg = embed(self.C, leg, Y.dims)
        return partial_trace(C_leg * Y, {leg})

    def sym2_image(self):
        """Im(R + 1/e), the q-symmetric square."""
        return _image(self.R + TensorOperator.identity(self.R.dims).scale(self.eigenvalue.inv()))

    def wedge2_image(self):
        """Im(R - e), the q-antisymmetric square."""
        return _image(self.R - TensorOperator.identity(self.R.dims).scale(self.eigenvalue))

    def sym_power(self, k):
        """Sym_q^(k)(V) inside V^(x k) as an intersection of embeddings."""
        return self._power(self.sym2_image(), k)

    def wedge_power(self, k):
        return self._power(self.wedge2_image(), k)

    def _power(self, square, k):
        dims = (self.n,) * k
        if k == 0:
            return Subspace(dims, [()])
        if k == 1:
            return Subspace(dims, [tuple(one if i == j else zero for i in range(self.n)) for j in range(self.n)])
        out = None
        for pos in range(k - 1):
            vecs = []
            pre, post = pos, k - 2 - pos
            for b in square.basis:
                for u in range(self.n**pre):
                    for w in range(self.n**post):
                        vec = [zero] * (self.n**k)
                        for idx, val in enumerate(b):
                            if val:
                                vec[(u * self.n**2 + idx) * self.n**post + w] = val
                        vecs.append(tuple(vec))
            space = Subspace(dims, vecs)
            out = space if out is None else out.intersect(space)
        return out

    def __repr__(self):
        return f"HeckeSymmetry({self.name}, n={self.n})"


def _image(A):
    return Subspace(A.dims, [tuple(A.rows[i][j] for i in range(A.size)) for j in range(A.size)])


def standard_R(n):
    """The Drinfeld-Jimbo Hecke symmetry of GL_q(n) type, bi-rank (n|0).

    R(x_k (x) x_l) is q x_k (x) x_k for k = l, x_l (x) x_k for k > l, and
    x_l (x) x_k + (q - 1/q) x_k (x) x_l for k < l.
    """
    assert n >= 2
    lam = q - qpow(-1)
    entries = {}
    for k in range(n):
        for l in range(n):
            col = flatten_index((n, n), (k, l))
            if k == l:
                entries[(col, col)] = q
            else:
                entries[(flatten_index((n, n), (l, k)), col)] = one
                if k < l:
                    entries[(col, col)] = lam
    R = TensorOperator.from_entries([n, n], entries)
    return HeckeSymmetry(n, R, eigenvalue=q, birank=(n, 0), name=f"uqsl{n}")


def flip(n):
    """The classical flip; involutive, bi-rank (n|0)."""
    return HeckeSymmetry(n, permutation_R(n), eigenvalue=one, birank=(n, 0), name=f"flip{n}")


def superflip(m, k):
    """The super-flip on V_(m|k); involutive, bi-rank (m|k).

    Basis vectors 0..m-1 are even, m..m+k-1 odd; R(x (x) y) picks up the
    sign (-1)^(|x||y|).
    """
    n = m + k
    parity = lambda i: 0 if i < m else 1
    sign = lambda i, j: -one if parity(i) and parity(j) else one
    return HeckeSymmetry(n, permutation_R(n, sign), eigenvalue=one, birank=(m, k), name=f"superflip{m}|{k}")


def birank_detect(H, bound=None):
    """Best-effort bi-rank: terminate the antisymmetric powers, or fall
    back to the declared value (cross-checked against B C) for symmetries
    whose Poincare series does not terminate."""
    bound = bound if bound is not None else H.n + 2
    m = 0
    for k in range(2, bound + 1):
        if H.wedge_power(k).dim == 0:
            m = k - 1
            break
    else:
        if H.birank is not None:
            mk, nk = H.birank
            if H.B * H.C == TensorOperator.identity([H.n]).scale(H.eigenvalue ** (2 * (nk - mk))):
                return H.birank
        raise Undetermined(f"antisymmetric powers alive beyond degree {bound}")
    scalar = H.eigenvalue ** (2 * (0 - m))
    if H.B * H.C != TensorOperator.identity([H.n]).scale(scalar):
        raise Undetermined("B C scalar disagrees with detected even bi-rank")
    return (m, 0)


def hecke_from_json(doc):
    """Build a HeckeSymmetry from {'n':, 'matrix': [[...]], 'eigenvalue':?, 'birank':?}.

    Matrix entries are strings in the scalar grammar.
    """
    n = doc["n"]
    rows = [[parse_scalar(str(e)) for e in row] for row in doc["matrix"]]
    R = TensorOperator([n, n], rows)
    e = parse_scalar(doc["eigenvalue"]) if "eigenvalue" in doc else q
    birank = tuple(doc["birank"]) if "birank" in doc else None
    return HeckeSymmetry(n, R, eigenvalue=e, birank=birank, name=doc.get("name", "custom"))


def matrix_to_json(A):
    return {"dims": list(A.dims), "matrix": [[render_scalar(v) for v in row] for row in A.rows]}
