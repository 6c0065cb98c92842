"""Matrices with algebra-element entries.

The reflection-equation branch only needs plain matrix products: powers of
the generator matrix, R-traces against the trace-companion matrix C of a
Hecke symmetry, the traceless shift, and the quadratic Cayley-Hamilton
identity for n = 2.
"""

from __future__ import annotations

from .errors import TracelessUnitError
from .ncpoly import AlgebraElement, Presentation, _LAM, _rule_relation, _scalarize
from .scalars import q, qint, qpow


class AlgMatrix:
    """Rectangular matrix over one presentation, entries in normal form."""

    __slots__ = ("presentation", "nrows", "ncols", "entries")

    def __init__(self, presentation, rows):
        self.presentation = presentation
        ents = []
        for row in rows:
            out = []
            for e in row:
                if isinstance(e, str):
                    e = presentation.element(e)
                elif not isinstance(e, AlgebraElement):
                    e = presentation.scalar(e)
                out.append(e)
            ents.append(tuple(out))
        self.entries = tuple(ents)
        self.nrows = len(self.entries)
        self.ncols = len(self.entries[0]) if self.entries else 0
        for row in self.entries:
            if len(row) != self.ncols:
                raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, presentation, n):
        one_el = presentation.scalar(1)
        zero_el = presentation.zero_element()
        return cls(presentation,
                   [[one_el if i == j else zero_el for j in range(n)]
                    for i in range(n)])

    def entry(self, i, j):
        return self.entries[i][j]

    def is_zero(self):
        return all(e.is_zero() for row in self.entries for e in row)

    def map_entries(self, fn):
        return AlgMatrix(self.presentation,
                         [[fn(e) for e in row] for row in self.entries])

    def __eq__(self, other):
        if not isinstance(other, AlgMatrix):
            return NotImplemented
        return self.entries == other.entries

    __hash__ = None

    def __add__(self, other):
        return AlgMatrix(self.presentation,
                         [[a + b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return AlgMatrix(self.presentation,
                         [[a - b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self):
        return self.map_entries(lambda e: -e)

    def __mul__(self, other):
        if not isinstance(other, AlgMatrix):
            return self.map_entries(lambda e: e * other)
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        rows = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = self.presentation.zero_element()
                for k in range(self.ncols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            rows.append(row)
        return AlgMatrix(self.presentation, rows)

    def __rmul__(self, other):
        # scalar or central element on the left
        return self.map_entries(lambda e: other * e)

    def __truediv__(self, other):
        return self.map_entries(lambda e: e / other)

    def __pow__(self, k):
        return mat_pow(self, k)

    def trace(self):
        acc = self.presentation.zero_element()
        for i in range(min(self.nrows, self.ncols)):
            acc = acc + self.entries[i][i]
        return acc

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in row)
                         for row in self.entries)
        return f"AlgMatrix[{body}]"


def mat_mul(a, b):
    return a * b


def mat_pow(m, k):
    if m.nrows != m.ncols:
        raise ValueError("power of a nonsquare matrix")
    if k < 0:
        raise ValueError("negative matrix power")
    out = AlgMatrix.identity(m.presentation, m.nrows)
    for _ in range(k):
        out = out * m
    return out


# ---------------------------------------------------------------------------
# R-traces


def r_trace_mat(H, m):
    """Weighted trace sum_ij C_i^j m_j^i against the symmetry's C matrix."""
    if m.nrows != H.n or m.ncols != H.n:
        raise ValueError("matrix size does not match the symmetry")
    acc = m.presentation.zero_element()
    for i in range(H.n):
        for j in range(H.n):
            w = H.C.entry(i, j)
            if w:
                acc = acc + w * m.entries[j][i]
    return acc


def power_sum(H, L, k):
    """p_k = R-trace of L^k; p_0 is the quantum dimension scalar."""
    return r_trace_mat(H, mat_pow(L, k))


def sl_shift(H, L):
    """Split off the R-traceless part: F = L - (tr/tr Id) Id.

    Returns (F, tr) with tr the R-trace of L; the R-trace of F vanishes
    identically.  Fails when the symmetry has R-trace of the identity
    zero, as for balanced bi-rank.
    """
    t0 = H.C.trace()
    if not t0:
        raise TracelessUnitError(
            "identity has zero R-trace; no traceless shift exists")
    tr = r_trace_mat(H, L)
    shift = tr / t0
    rows = [[L.entries[i][j] - shift if i == j else L.entries[i][j]
             for j in range(L.ncols)] for i in range(L.nrows)]
    return AlgMatrix(L.presentation, rows), tr


# ---------------------------------------------------------------------------
# canonical matrices over the presets


def l_matrix(P):
    """Generator matrix of a presentation with a matrix-generator grid."""
    n = P.meta.get("n")
    if n is None:
        raise ValueError("presentation has no matrix-generator grid")
    gens = P.gens()
    return AlgMatrix(P, [[gens[i * n + j] for j in range(n)]
                         for i in range(n)])


def f_matrix(P):
    """Traceless 2 x 2 matrix [[qh, b], [c, -h/q]] / (q + q^-1) over a
    preset with generators b, h, c."""
    two = qint(2)
    b, h, c = P.gen("b"), P.gen("h"), P.gen("c")
    return AlgMatrix(P, [[q / two * h, b], [c, -(qpow(-1) / two) * h]])


def casimir_sl(P):
    """Quadratic Casimir q^-1 bc + h^2/2_q + q cb of the traceless part."""
    b, h, c = P.gen("b"), P.gen("h"), P.gen("c")
    return qpow(-1) * b * c + h * h / qint(2) + q * c * b


def casimir_full(P):
    """Casimir with the trace part: l^2/2_q + q^-1 bc + h^2/2_q + q cb."""
    el = P.gen("l")
    return el * el / qint(2) + casimir_sl(P)


def ch_residual(P, hbar=None):
    """Left side of the quadratic Cayley-Hamilton identity for f_matrix.

    Zero exactly when F^2 = q^-1 hbar F + (Cas/2_q) Id holds in P.
    """
    if hbar is None:
        hbar = P.meta["hbar"]
    F = f_matrix(P)
    cas = casimir_sl(P)
    two = qint(2)
    correction = AlgMatrix.identity(P, 2) * (cas / two)
    return F * F - F * (qpow(-1) * _scalarize(hbar)) - correction


def ch_check(P, hbar=None):
    return ch_residual(P, hbar).is_zero()


# ---------------------------------------------------------------------------
# the hbar shift


def hbar_shift(P, hbar):
    """Shift diagonal matrix generators by -hbar/(q - q^-1).

    Sends the reflection-equation family at parameter h0 to the family at
    h0 + hbar: the Hecke identity R^2 = (q - q^-1) R + Id turns the
    substitution L -> L - (hbar/(q-q^-1)) Id into exactly the hbar term
    of the deformed relations.
    """
    n = P.meta.get("n")
    if n is None:
        raise ValueError("presentation has no matrix-generator grid")
    h = _scalarize(hbar)
    if not h:
        return P
    shift = -(h / _LAM)
    diag = {i * n + i for i in range(n)}

    relations = []
    for lead, tail in P.rules.items():
        rel = _rule_relation(lead, tail)
        new = {}
        for word, coef in rel.items():
            parts = {(): coef}
            for g in word:
                grown = {}
                for w, c in parts.items():
                    _acc(grown, w + (g,), c)
                    if g in diag:
                        _acc(grown, w, c * shift)
                parts = grown
            for w, c in parts.items():
                _acc(new, w, c)
        relations.append(new)

    meta = dict(P.meta)
    meta["hbar"] = meta.get("hbar", 0) + h
    return Presentation.from_relations(P.generators, relations,
                                       name=P.name, meta=meta)


def _acc(d, w, c):
    prev = d.get(w)
    tot = c if prev is None else prev + c
    if tot:
        d[w] = tot
    elif prev is not None:
        del d[w]
