"""
Exact dense linear algebra over Q(q) on tensor-product spaces.

TensorOperator is a square matrix acting on V_1 (x) ... (x) V_k with the
factor dimensions kept as metadata; leg embedding, Kronecker products
and partial traces all respect the ordering V_1 (x) ... (x) V_k with the
first factor slowest in the flat index.  Vectors are column vectors:
(A v)_i = sum_j A[i][j] v[j].

Subspace keeps a reduced-row-echelon basis, so two subspaces are equal
iff their representations are equal.  Elimination is exact Gaussian
over the field Q(q); rows are renormalized as they are produced, which
keeps entries canonical and bounds swell in practice.
"""

from __future__ import annotations

from .errors import Inconsistent, NotComplementary
from .scalars import QScalar, one, zero


def flatten_index(dims, multi):
    flat = 0
    for d, i in zip(dims, multi):
        flat = flat * d + i
    return flat


def unflatten_index(dims, flat):
    out = []
    for d in reversed(dims):
        out.append(flat % d)
        flat //= d
    return tuple(reversed(out))


def _prod(dims):
    n = 1
    for d in dims:
        n *= d
    return n


class TensorOperator:
    """Square matrix over QScalar on a tensor product of factors."""

    __slots__ = ("dims", "size", "rows")

    def __init__(self, dims, rows):
        self.dims = tuple(dims)
        self.size = _prod(self.dims)
        assert len(rows) == self.size and all(len(r) == self.size for r in rows)
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def identity(cls, dims):
        n = _prod(dims)
        return cls(dims, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, dims):
        n = _prod(dims)
        z = [zero] * n
        return cls(dims, [list(z) for _ in range(n)])

    @classmethod
    def from_entries(cls, dims, entries):
        """Build from a dict {(row, col): QScalar}."""
        n = _prod(dims)
        rows = [[zero] * n for _ in range(n)]
        for (i, j), v in entries.items():
            rows[i][j] = v
        return cls(dims, rows)

    def entry(self, i, j):
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, TensorOperator):
            return NotImplemented
        return self.dims == other.dims and self.rows == other.rows

    def __hash__(self):
        return hash((self.dims, self.rows))

    def is_zero(self):
        return all(not v for r in self.rows for v in r)

    def __add__(self, other):
        assert self.dims == other.dims
        return TensorOperator(
            self.dims,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
        )

    def __sub__(self, other):
        assert self.dims == other.dims
        return TensorOperator(
            self.dims,
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
        )

    def __neg__(self):
        return TensorOperator(self.dims, [[-a for a in r] for r in self.rows])

    def scale(self, s):
        return TensorOperator(self.dims, [[s * a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, (QScalar, int)):
            return self.scale(other)
        assert self.dims == other.dims, "composition needs identical factor dims"
        n = self.size
        out = [[zero] * n for _ in range(n)]
        brows = other.rows
        for i in range(n):
            arow = self.rows[i]
            orow = out[i]
            for k in range(n):
                aik = arow[k]
                if not aik:
                    continue
                brow = brows[k]
                for j in range(n):
                    bkj = brow[j]
                    if bkj:
                        orow[j] = orow[j] + aik * bkj
        return TensorOperator(self.dims, out)

    def __rmul__(self, other):
        if isinstance(other, (QScalar, int)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k):
        assert k >= 0
        out = TensorOperator.identity(self.dims)
        for _ in range(k):
            out = out * self
        return out

    def apply(self, vec):
        assert len(vec) == self.size
        out = []
        for row in self.rows:
            acc = zero
            for a, v in zip(row, vec):
                if a and v:
                    acc = acc + a * v
            out.append(acc)
        return tuple(out)

    def transpose(self):
        n = self.size
        return TensorOperator(self.dims, [[self.rows[j][i] for j in range(n)] for i in range(n)])

    def trace(self):
        acc = zero
        for i in range(self.size):
            acc = acc + self.rows[i][i]
        return acc

    def inverse(self):
        n = self.size
        aug = [
            {c: v for c, v in enumerate(self.rows[i]) if v} | {n + i: one}
            for i in range(n)
        ]
        red, pivots = _rref(aug)
        if sorted(pivots) != list(range(n)):
            raise Inconsistent("matrix is singular")
        rows = [[zero] * n for _ in range(n)]
        for r, p in zip(red, pivots):
            for c, v in r.items():
                if c >= n:
                    rows[p][c - n] = v
        return TensorOperator(self.dims, rows)

    def __repr__(self):
        return f"TensorOperator(dims={list(self.dims)}, size={self.size})"


def kron(*ops):
    """Tensor product of operators; dims concatenate."""
    assert ops
    out = ops[0]
    for b in ops[1:]:
        na, nb = out.size, b.size
        rows = [[zero] * (na * nb) for _ in range(na * nb)]
        for i in range(na):
            arow = out.rows[i]
            for k in range(na):
                aik = arow[k]
                if not aik:
                    continue
                for j in range(nb):
                    brow = b.rows[j]
                    target = rows[i * nb + j]
                    for l in range(nb):
                        if brow[l]:
                            target[k * nb + l] = aik * brow[l]
        out = TensorOperator(out.dims + b.dims, rows)
    return out


def embed(A, pos, dims):
    """Place A on consecutive factors starting at 1-based position pos."""
    dims = tuple(dims)
    k = len(A.dims)
    assert 1 <= pos and pos + k - 1 <= len(dims)
    assert dims[pos - 1 : pos - 1 + k] == A.dims, "factor dimensions do not match"
    parts = []
    if pos > 1:
        parts.append(TensorOperator.identity(dims[: pos - 1]))
    parts.append(A)
    if pos - 1 + k < len(dims):
        parts.append(TensorOperator.identity(dims[pos - 1 + k :]))
    return kron(*parts)


def embed_legs(A, positions, dims):
    """Place A with its legs on the listed 1-based positions, identity
    elsewhere.  Positions need not be adjacent or increasing, so this
    also realizes leg-order reversals like acting with the first leg on
    a later factor."""
    dims = tuple(dims)
    positions = tuple(positions)
    assert len(positions) == len(A.dims)
    assert len(set(positions)) == len(positions)
    assert all(dims[p - 1] == d for p, d in zip(positions, A.dims))
    rest = [p for p in range(1, len(dims) + 1) if p not in positions]
    rest_dims = tuple(dims[p - 1] for p in rest)
    n = _prod(dims)
    rows = [[zero] * n for _ in range(n)]
    for i in range(A.size):
        mi = unflatten_index(A.dims, i)
        for j in range(A.size):
            v = A.rows[i][j]
            if not v:
                continue
            mj = unflatten_index(A.dims, j)
            for spect in range(_prod(rest_dims)):
                ms = unflatten_index(rest_dims, spect)
                out = [0] * len(dims)
                col = [0] * len(dims)
                for p, a, b in zip(positions, mi, mj):
                    out[p - 1] = a
                    col[p - 1] = b
                for p, s in zip(rest, ms):
                    out[p - 1] = s
                    col[p - 1] = s
                rows[flatten_index(dims, out)][flatten_index(dims, col)] = v
    return TensorOperator(dims, rows)


def partial_trace(A, legs):
    """Trace over the listed 1-based factor positions.

    Returns a TensorOperator on the remaining factors, or a QScalar when
    every factor is traced out.
    """
    legs = sorted(set(legs))
    assert all(1 <= p <= len(A.dims) for p in legs)
    keep = [p for p in range(1, len(A.dims) + 1) if p not in legs]
    new_dims = tuple(A.dims[p - 1] for p in keep)
    n_new = _prod(new_dims)
    acc = [[zero] * n_new for _ in range(n_new)]
    for i in range(A.size):
        mi = unflatten_index(A.dims, i)
        row = A.rows[i]
        for j in range(A.size):
            v = row[j]
            if not v:
                continue
            mj = unflatten_index(A.dims, j)
            if any(mi[p - 1] != mj[p - 1] for p in legs):
                continue
            ri = flatten_index(new_dims, tuple(mi[p - 1] for p in keep))
            rj = flatten_index(new_dims, tuple(mj[p - 1] for p in keep))
            acc[ri][rj] = acc[ri][rj] + v
    if not new_dims:
        return acc[0][0]
    return TensorOperator(new_dims, acc)


# ---------------------------------------------------------------------------
# elimination on dict-rows {column: QScalar}


def _reduce_row(row, pivots, red):
    # red rows are fully inter-reduced, so one pass eliminates every pivot
    row = dict(row)
    for idx, p in enumerate(pivots):
        c = row.get(p)
        if c is not None and c:
            for cc, vv in red[idx].items():
                nv = row.get(cc, zero) - c * vv
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
    return {c: v for c, v in row.items() if v}


def _rref(rows):
    """Reduced row echelon form of dict-rows; returns (rows, pivot columns)."""
    red = []
    pivots = []
    for raw in rows:
        row = {c: v for c, v in raw.items() if v}
        row = _reduce_row(row, pivots, red)
        if not row:
            continue
        p = min(row)
        inv = row[p].inv()
        row = {c: inv * v for c, v in row.items()}
        # back-substitute into earlier rows
        for idx in range(len(red)):
            c = red[idx].get(p)
            if c is not None:
                for cc, vv in row.items():
                    nv = red[idx].get(cc, zero) - c * vv
                    if nv:
                        red[idx][cc] = nv
                    else:
                        red[idx].pop(cc, None)
        red.append(row)
        pivots.append(p)
    order = sorted(range(len(red)), key=lambda i: pivots[i])
    return [red[i] for i in order], [pivots[i] for i in order]


def _row_to_vec(row, n):
    return tuple(row.get(c, zero) for c in range(n))


def solve(A, rhs):
    """One exact solution of A x = rhs, or Inconsistent.

    The kernel of A parametrizes the remaining freedom; use kernel(A)
    for it.  rhs is a vector.
    """
    n = A.size
    aug = []
    for i in range(n):
        row = {c: v for c, v in enumerate(A.rows[i]) if v}
        if rhs[i]:
            row[n] = rhs[i]
        aug.append(row)
    red, pivots = _rref(aug)
    x = [zero] * n
    for r, p in zip(red, pivots):
        if p == n:
            raise Inconsistent("no solution")
        x[p] = r.get(n, zero)
    return tuple(x)


def kernel(A):
    """Canonical basis of the null space of A."""
    n = A.size
    red, pivots = _rref(
        [{c: v for c, v in enumerate(row) if v} for row in A.rows]
    )
    pivot_set = set(pivots)
    basis = []
    for f in range(n):
        if f in pivot_set:
            continue
        vec = [zero] * n
        vec[f] = one
        for r, p in zip(red, pivots):
            c = r.get(f)
            if c is not None:
                vec[p] = -c
        basis.append(tuple(vec))
    return basis


def rank(A):
    _, pivots = _rref([{c: v for c, v in enumerate(row) if v} for row in A.rows])
    return len(pivots)


class Subspace:
    """A subspace of a tensor-product space with a canonical RREF basis."""

    __slots__ = ("dims", "basis")

    def __init__(self, dims, basis, _canonical=False):
        self.dims = tuple(dims)
        if _canonical:
            self.basis = basis
            return
        n = _prod(self.dims)
        rows = [{c: v for c, v in enumerate(vec) if v} for vec in basis]
        red, pivots = _rref(rows)
        self.basis = tuple(_row_to_vec(r, n) for r in red)

    @classmethod
    def span(cls, dims, vectors):
        return cls(dims, vectors)

    @property
    def dim(self):
        return len(self.basis)

    @property
    def ambient_dim(self):
        return _prod(self.dims)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.dims == other.dims and self.basis == other.basis

    def __hash__(self):
        return hash((self.dims, self.basis))

    def contains(self, vec):
        rows = [{c: v for c, v in enumerate(b) if v} for b in self.basis]
        _, pivots = _rref(rows + [{c: v for c, v in enumerate(vec) if v}])
        return len(pivots) == self.dim

    def sum(self, other):
        assert self.dims == other.dims
        return Subspace(self.dims, self.basis + other.basis)

    def intersect(self, other):
        assert self.dims == other.dims
        # kernel of [U^T  W^T] gives coefficient pairs with U a = W b
        n = self.ambient_dim
        du, dw = self.dim, other.dim
        if du == 0 or dw == 0:
            return Subspace(self.dims, ())
        rows = []
        for r in range(n):
            row = {}
            for c in range(du):
                if self.basis[c][r]:
                    row[c] = self.basis[c][r]
            for c in range(dw):
                if other.basis[c][r]:
                    row[du + c] = -other.basis[c][r]
            rows.append(row)
        red, pivots = _rref(rows)
        pivot_set = set(pivots)
        vecs = []
        for f in range(du + dw):
            if f in pivot_set:
                continue
            coeff = {f: one}
            for r, p in zip(red, pivots):
                c = r.get(f)
                if c is not None:
                    coeff[p] = -c
            vec = [zero] * n
            for idx, a in coeff.items():
                if idx < du:
                    src = self.basis[idx]
                    for i in range(n):
                        if src[i]:
                            vec[i] = vec[i] + a * src[i]
            vecs.append(tuple(vec))
        return Subspace(self.dims, vecs)

    def __add__(self, other):
        return self.sum(other)

    def __and__(self, other):
        return self.intersect(other)

    def __repr__(self):
        return f"Subspace(dims={list(self.dims)}, dim={self.dim})"


class FormalMat:
    """Square matrix whose entries are linear combinations of formal
    tensor words.

    Entries are dicts {word: QScalar} where a word is a tuple of opaque
    labels; the empty word is the scalar part.  Matrix products multiply
    coefficients and concatenate words, which is exactly the product of
    operator-valued matrices with tensorized entries, so expressions
    like R10 L1 R10^-1 can be evaluated literally.
    """

    __slots__ = ("dims", "size", "rows")

    def __init__(self, dims, rows):
        self.dims = tuple(dims)
        self.size = _prod(self.dims)
        assert len(rows) == self.size and all(len(r) == self.size for r in rows)
        self.rows = tuple(tuple(dict(e) for e in r) for r in rows)

    @classmethod
    def from_scalar(cls, A):
        return cls(A.dims, [[{(): v} if v else {} for v in row] for row in A.rows])

    @classmethod
    def generator_slot(cls, dims, slot, label_of):
        """The matrix that is the formal generator grid on one 1-based
        slot and identity elsewhere; entry labels come from
        label_of(row_index, col_index) on that slot."""
        dims = tuple(dims)
        n = _prod(dims)
        rows = [[{} for _ in range(n)] for _ in range(n)]
        for i in range(n):
            mi = unflatten_index(dims, i)
            for j in range(n):
                mj = unflatten_index(dims, j)
                if any(a != b for p, (a, b) in enumerate(zip(mi, mj))
                       if p != slot - 1):
                    continue
                rows[i][j] = {(label_of(mi[slot - 1], mj[slot - 1]),): one}
        return cls(dims, rows)

    def entry(self, i, j):
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, FormalMat):
            return NotImplemented
        return self.dims == other.dims and self.rows == other.rows

    __hash__ = None

    def __add__(self, other):
        assert self.dims == other.dims
        rows = []
        for ra, rb in zip(self.rows, other.rows):
            rows.append([_word_add(a, b) for a, b in zip(ra, rb)])
        return FormalMat(self.dims, rows)

    def __sub__(self, other):
        return self + other.scale(-one)

    def __neg__(self):
        return self.scale(-one)

    def scale(self, s):
        return FormalMat(
            self.dims,
            [[{w: s * c for w, c in e.items() if s * c} for e in row]
             for row in self.rows],
        )

    def __mul__(self, other):
        if isinstance(other, (QScalar, int)):
            return self.scale(other)
        assert self.dims == other.dims
        n = self.size
        out = [[{} for _ in range(n)] for _ in range(n)]
        for i in range(n):
            arow = self.rows[i]
            orow = out[i]
            for k in range(n):
                e = arow[k]
                if not e:
                    continue
                brow = other.rows[k]
                for j in range(n):
                    f = brow[j]
                    if not f:
                        continue
                    acc = orow[j]
                    for w1, c1 in e.items():
                        for w2, c2 in f.items():
                            w = w1 + w2
                            v = c1 * c2
                            prev = acc.get(w)
                            tot = v if prev is None else prev + v
                            if tot:
                                acc[w] = tot
                            elif prev is not None:
                                del acc[w]
        return FormalMat(self.dims, out)

    def partial_trace(self, legs):
        legs = sorted(set(legs))
        keep = [p for p in range(1, len(self.dims) + 1) if p not in legs]
        new_dims = tuple(self.dims[p - 1] for p in keep)
        n_new = _prod(new_dims)
        acc = [[{} for _ in range(n_new)] for _ in range(n_new)]
        for i in range(self.size):
            mi = unflatten_index(self.dims, i)
            for j in range(self.size):
                e = self.rows[i][j]
                if not e:
                    continue
                mj = unflatten_index(self.dims, j)
                if any(mi[p - 1] != mj[p - 1] for p in legs):
                    continue
                ri = flatten_index(new_dims, tuple(mi[p - 1] for p in keep))
                rj = flatten_index(new_dims, tuple(mj[p - 1] for p in keep))
                acc[ri][rj] = _word_add(acc[ri][rj], e)
        return FormalMat(new_dims, acc)

    def __repr__(self):
        return f"FormalMat(dims={list(self.dims)}, size={self.size})"


def _word_add(a, b):
    out = dict(a)
    for w, c in b.items():
        tot = out.get(w, zero) + c
        if tot:
            out[w] = tot
        else:
            out.pop(w, None)
    return out


def projector_along(U, W):
    """The projector onto U along W; requires U (+) W = ambient."""
    assert U.dims == W.dims
    n = U.ambient_dim
    if U.dim + W.dim != n:
        raise NotComplementary(f"dims {U.dim} + {W.dim} != {n}")
    cols = list(U.basis) + list(W.basis)
    M = TensorOperator(U.dims, [[cols[c][r] for c in range(n)] for r in range(n)])
    try:
        Minv = M.inverse()
    except Inconsistent:
        raise NotComplementary("subspaces overlap") from None
    # P = M . diag(Id_dimU, 0) . M^{-1}
    rows = []
    for r in range(n):
        row = []
        for c in range(n):
            acc = zero
            for k in range(U.dim):
                if cols[k][r] and Minv.rows[k][c]:
                    acc = acc + cols[k][r] * Minv.rows[k][c]
            row.append(acc)
        rows.append(row)
    return TensorOperator(U.dims, rows)
