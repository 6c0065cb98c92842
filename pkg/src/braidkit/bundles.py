"""
Idempotents over the quantum hyperboloid and the quantum group
coordinate algebra, and the braided index pairing them against finite
dimensional modules.

Each idempotent here is a column-times-row factorization whose middle
contraction collapses to a scalar by a defining relation of the
quotient: the Cayley-Hamilton identity for the traceless generator
matrix, a quantum determinant, or the Casimir relation.  The weighted
trace of a Cayley-Hamilton idempotent is a plain scalar, so pairing it
with a module reduces to that scalar times a categorical dimension, and
the result is a genuine q-integer.
"""

from __future__ import annotations

from .errors import (
    CasimirMismatch,
    NonScalarTrace,
    NonSquareDiscriminant,
    RepeatedRoots,
)
from .linalg import TensorOperator
from .ncpoly import _scalarize, preset
from .qmatrix import AlgMatrix, casimir_sl, f_matrix, r_trace_mat
from .scalars import q, qint, qpow


class Idempotent:
    """A matrix idempotent over a quotient presentation.

    The constructor re-verifies e*e = e in the quotient's normal form,
    so holding an Idempotent is holding a checked fact.
    """

    __slots__ = ("matrix", "kind")

    def __init__(self, matrix, kind, check=True):
        if check and not (matrix * matrix - matrix).is_zero():
            raise ValueError("matrix is not idempotent in its quotient")
        self.matrix = matrix
        self.kind = kind

    @property
    def presentation(self):
        return self.matrix.presentation

    def __repr__(self):
        return (f"Idempotent({self.kind}, "
                f"{self.matrix.nrows}x{self.matrix.ncols})")


def _ch_roots(hbar, C):
    # roots of mu^2 - q^-1 hbar mu - C/2_q; the gap must stay in Q(q)
    disc = qpow(-2) * hbar * hbar + 4 * C / qint(2)
    if disc.is_zero():
        raise RepeatedRoots("the Cayley-Hamilton roots coincide")
    try:
        gap = disc.sqrt()
    except ValueError:
        raise NonSquareDiscriminant(
            "the root gap lives in a quadratic extension of Q(q)") from None
    mu0 = (qpow(-1) * hbar - gap) / 2
    mu1 = (qpow(-1) * hbar + gap) / 2
    return mu0, mu1


def ch_idempotents(hbar, C):
    """Split the Cayley-Hamilton identity of the traceless generator
    matrix into two complementary idempotents over hyperboloid(hbar, C).

    Returns (e0, e1, mu0, mu1) with e_i = (F - mu_j Id)/(mu_i - mu_j);
    mu1 carries the positive-leading square-root branch, which for the
    symmetric-module Casimir values pairs e0 with the larger index.
    e0 + e1 = Id and all cross products vanish.
    """
    hbar = _scalarize(hbar)
    C = _scalarize(C)
    mu0, mu1 = _ch_roots(hbar, C)
    P = preset("hyperboloid", hbar=hbar, casimir=C)
    F = f_matrix(P)
    ident = AlgMatrix.identity(P, 2)
    e0 = Idempotent((F - mu1 * ident) / (mu0 - mu1), "ch-root")
    e1 = Idempotent((F - mu0 * ident) / (mu1 - mu0), "ch-root")
    return e0, e1, mu0, mu1


def _casimir_scalar(rep):
    # scalar of the quadratic Casimir on the module; Schur makes it a
    # scalar whenever the module is simple
    try:
        cas = casimir_sl(rep.presentation)
    except KeyError:
        raise CasimirMismatch(
            "the module algebra has no traceless generator triple") from None
    X = rep.image_of(cas)
    s = X.rows[0][0]
    if not (X - TensorOperator.identity(X.dims).scale(s)).is_zero():
        raise NonScalarTrace("the Casimir does not act by a scalar")
    return s


def _image_by_name(rep, source, el):
    # transport an element of a different presentation through the
    # representation by matching generator names
    dims = next(iter(rep.images.values())).dims
    acc = TensorOperator.zeros(dims)
    for word, coeff in el.terms.items():
        op = TensorOperator.identity(dims)
        for g in word:
            op = op * rep.images[rep.presentation.index[source.generators[g]]]
        acc = acc + op.scale(coeff)
    return acc


def q_index(rep, e):
    """Braided index of a module against an idempotent: the weighted
    trace of e, pushed through the module map, closed up by the
    categorical trace.

    Both traces carry the eigenvalue-square normalization, so the
    verified pairings come out as q-integers symmetric under q -> 1/q.
    The module must live over the same Casimir value as the idempotent.
    """
    C = e.presentation.meta.get("casimir")
    if C is None:
        raise CasimirMismatch("the idempotent's quotient fixes no Casimir value")
    s = _casimir_scalar(rep)
    if s != C:
        raise CasimirMismatch(
            f"module Casimir {s} differs from the idempotent's {C}")
    H = rep.symmetry
    t = r_trace_mat(H, e.matrix)
    X = _image_by_name(rep, e.presentation, t)
    return rep.quantum_trace(X.scale(H.eigenvalue ** 2))


def rtt_idempotents():
    """The two rank-one projectors over the quantum group coordinate
    algebra, as (e_minus, e_plus).

    Each is a column times a row whose middle contraction is a quantum
    determinant relation, so idempotency is a one-step rewriting fact.
    """
    P = preset("rtt_n2")
    b, c, a, d = P.gens()
    em = AlgMatrix(P, [[a * d, -qpow(-1) * (a * b)],
                       [c * d, -qpow(-1) * (c * b)]])
    ep = AlgMatrix(P, [[d * a, -q * (d * c)],
                       [b * a, -q * (b * c)]])
    return Idempotent(em, "rtt"), Idempotent(ep, "rtt")


def cotangent_idempotents(C):
    """Conormal projectors on the rank-three module of one-forms over
    the undeformed-parameter hyperboloid, as (right, left).

    The middle contraction of either factorization is the Casimir
    relation itself; the two matrices present the same projector for
    the two one-sided module structures, and at q = 1 they agree up to
    transposing and reversing the component order.
    """
    P = preset("hyperboloid", hbar=0, casimir=C)
    C = P.meta["casimir"]
    b, h, c = P.gens()
    two = qint(2)
    col = (qpow(-1) * c, h / two, q * b)
    row = (b, h, c)
    right = AlgMatrix(P, [[x * y / C for y in row] for x in col])
    col = (c, h, b)
    row = (qpow(-1) * b, h / two, q * c)
    left = AlgMatrix(P, [[x * y / C for y in row] for x in col])
    return Idempotent(right, "cotangent"), Idempotent(left, "cotangent")
