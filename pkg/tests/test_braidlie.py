import pytest

from braidkit.braidlie import (
    adjoint_hbar, adjoint_matrices, bracket, build_Q, build_Qprime, build_Sq,
    glie_axiom_check, sl_bracket_table, sl_naive_witness, sl_split,
)
from braidkit.braiding import flip, standard_R, superflip
from braidkit.errors import NotInvolutive, TracelessUnitError
from braidkit.linalg import FormalMat, Subspace, TensorOperator, embed
from braidkit.ncpoly import mrea_from_R, preset
from braidkit.reptheory import Representation, adjoint_rep, check_rep, end_braiding
from braidkit.scalars import limit_coefficient, one, q, qint, qpow, zero

H2 = standard_R(2)
FL = flip(2)


def mm(a, b):
    rows, inner, cols = len(a), len(b), len(b[0])
    out = [[zero] * cols for _ in range(rows)]
    for i in range(rows):
        for k in range(inner):
            v = a[i][k]
            if not v:
                continue
            for j in range(cols):
                if b[k][j]:
                    out[i][j] = out[i][j] + v * b[k][j]
    return out


# ---------------------------------------------------------------------------
# the exchange operators


def test_exchange_matches_endomorphism_braiding_iff_involutive():
    assert build_Q(FL) == end_braiding(FL)
    assert build_Q(H2) != end_braiding(H2)


def test_exchange_minimal_polynomial():
    Q = build_Q(H2)
    Id = TensorOperator.identity(Q.dims)
    z = Id.scale(zero)
    assert (Q + Id.scale(q * q)) * (Q + Id.scale(qpow(-2))) * (Q - Id) == z
    c = q * q + qpow(-2) - one
    assert Q.inverse() == Q * Q + Q.scale(c) - Id.scale(c)


def test_partner_exchange():
    Q = build_Q(H2)
    Qp = build_Qprime(H2)
    Id = TensorOperator.identity(Q.dims)
    z = Id.scale(zero)
    assert Q * Qp == Qp * Q
    assert (Id - Q) * (Id + Qp) == z
    assert (Qp - Id.scale(q * q)) * (Qp - Id.scale(qpow(-2))) * (Qp + Id) == z


def test_exchanges_satisfy_braid_relation():
    d3 = (4, 4, 4)
    for X in (build_Q(H2), build_Qprime(H2)):
        a = embed(X, 1, d3)
        b = embed(X, 2, d3)
        assert a * b * a == b * a * b


def test_symmetrizer_is_spectral_projector():
    S = build_Sq(H2)
    Q = build_Q(H2)
    Id = TensorOperator.identity(Q.dims)
    assert S * S == S
    assert S * (Id - Q) == Id.scale(zero)


def test_symmetrizer_involutive_case_is_half_sum():
    S = build_Sq(FL)
    P = build_Q(FL)
    Id = TensorOperator.identity(P.dims)
    assert S == (Id + P).scale(one / (one + one))


def test_antisymmetric_image_is_quadratic_relation_span():
    Q = build_Q(H2)
    Id = TensorOperator.identity(Q.dims)
    D = Id - Q
    cols = [[D.rows[i][j] for i in range(16)] for j in range(16)]
    P0 = mrea_from_R(H2, 0)
    vecs = []
    for lead, tail in P0.rules.items():
        v = [zero] * 16
        v[lead[0] * 4 + lead[1]] = one
        for w, c in tail:
            v[w[0] * 4 + w[1]] = v[w[0] * 4 + w[1]] - c
        vecs.append(v)
    assert Subspace.span((4, 4), cols) == Subspace.span((4, 4), vecs)


# ---------------------------------------------------------------------------
# the bracket


def test_flip_bracket_is_matrix_commutator():
    br = bracket(FL)
    want = [[zero] * 16 for _ in range(4)]
    for g1 in range(4):
        i1, j1 = divmod(g1, 2)
        for g2 in range(4):
            i2, j2 = divmod(g2, 2)
            if j1 == i2:
                want[i1 * 2 + j2][g1 * 4 + g2] = want[i1 * 2 + j2][g1 * 4 + g2] + one
            if j2 == i1:
                want[i2 * 2 + j1][g1 * 4 + g2] = want[i2 * 2 + j1][g1 * 4 + g2] - one
    assert [list(r) for r in br.rows] == want


def test_bracket_skew_against_symmetrizer():
    br = bracket(H2)
    S = [list(r) for r in build_Sq(H2).rows]
    assert not any(v for row in mm([list(r) for r in br.rows], S) for v in row)


def test_bracket_adjoint_equals_coproduct_action():
    br = bracket(H2)
    ad = adjoint_rep(H2)
    images = br.adjoint_images()
    assert all(images[g] == ad.images[g] for g in range(4))


def test_bracket_on_paired_copies():
    # entrywise value on the copies: the one-letter matrix combination
    br = bracket(H2)
    lab = lambda i, j: i * 2 + j
    L1 = FormalMat.generator_slot((2, 2), 1, lab)
    Rf = FormalMat.from_scalar(H2.R)
    Rfi = FormalMat.from_scalar(H2.R.inverse())
    CB = L1 * (Rf * L1 * Rfi)
    rhs = L1 * Rf - Rf * L1
    for a in range(4):
        for d in range(4):
            out = [zero] * 4
            for (g1, g2), c in CB.entry(a, d).items():
                for h in range(4):
                    v = br.rows[h][g1 * 4 + g2]
                    if v:
                        out[h] = out[h] + c * v
            want = [zero] * 4
            for (g,), c in rhs.entry(a, d).items():
                want[g] = want[g] + c
            assert out == want


def test_bracket_output_has_no_plain_trace():
    br = bracket(H2)
    for col in range(16):
        assert not (br.rows[0][col] + br.rows[3][col])


def test_generalized_axioms_for_involutive_symmetries():
    for h in (FL, superflip(1, 1)):
        report = glie_axiom_check(h)
        assert report == {
            "skew": True, "jacobi": True, "jacobi_a": True,
            "jacobi_b": True, "jacobi_c": True, "equivariance": True,
        }


def test_generalized_axioms_reject_hecke_input():
    with pytest.raises(NotInvolutive):
        glie_axiom_check(H2)


# ---------------------------------------------------------------------------
# the traceless restriction


def test_restricted_table():
    br = bracket(H2)
    table, w = sl_bracket_table(br)
    trc = H2.C.rows[0][0] + H2.C.rows[1][1]
    assert w == trc
    two = qint(2)
    assert table == {
        ("b", "b"): {},
        ("b", "h"): {"b": -w},
        ("b", "c"): {"h": w * q / two},
        ("h", "b"): {"b": w * q * q},
        ("h", "h"): {"h": w * (q * q - one)},
        ("h", "c"): {"c": -w},
        ("c", "b"): {"h": -(w * q / two)},
        ("c", "h"): {"c": w * q * q},
        ("c", "c"): {},
    }


def test_adjoint_matrices_match_restricted_bracket():
    br = bracket(H2)
    table, w = sl_bracket_table(br)
    B, Hm, C = adjoint_matrices(w)
    names = ["b", "h", "c"]
    for X, x in ((B, "b"), (Hm, "h"), (C, "c")):
        for j, y in enumerate(names):
            out = table[(x, y)]
            for i, z in enumerate(names):
                assert X.rows[i][j] == out.get(z, zero)


def test_adjoint_matrices_satisfy_traceless_relations():
    _, w = sl_bracket_table(bracket(H2))
    B, Hm, C = adjoint_matrices(w)
    hb = adjoint_hbar(w)
    P = preset("sl_n2", hbar=hb)
    rep = Representation(P, H2, {P.index["b"]: B, P.index["h"]: Hm,
                                 P.index["c"]: C}, ("V",))
    assert check_rep(rep) == []
    assert hb == q * q - one + qpow(-2)


def test_adjoint_matrices_classical_limit():
    # w = 2 at q = 1 degenerates to the classical adjoint triple
    B, Hm, C = adjoint_matrices(one + one)
    lim = lambda X: [[limit_coefficient(v, 0) for v in row] for row in X.rows]
    assert lim(B) == [[0, -2, 0], [0, 0, 1], [0, 0, 0]]
    assert lim(Hm) == [[2, 0, 0], [0, 0, 0], [0, 0, -2]]
    assert lim(C) == [[0, 0, 0], [-1, 0, 0], [0, 2, 0]]


def test_adjoint_matrices_reject_zero_scale():
    with pytest.raises(ValueError):
        adjoint_matrices(zero)


def test_trace_line_action():
    br = bracket(H2)
    ell, F = sl_split(H2)
    lam = q - qpow(-1)
    trc = H2.C.rows[0][0] + H2.C.rows[1][1]
    zv = [zero] * 4
    assert br.apply(ell, ell) == zv
    for v in F.values():
        assert br.apply(ell, list(v)) == [-(lam * trc) * x for x in v]
        assert br.apply(list(v), ell) == zv


def test_traceless_adjoint_needs_conjugation_term():
    # the three-term matrix identity holds; dropping the last term
    # leaves a prescription with no linear realization
    br = bracket(H2)
    ell, F = sl_split(H2)
    from braidkit.braidlie import _grid_slot1

    F1 = _grid_slot1(F, 2)
    Rf = FormalMat.from_scalar(H2.R)
    Rfi = FormalMat.from_scalar(H2.R.inverse())
    prod = F1 * (Rf * F1 * Rfi)
    lam = q - qpow(-1)
    rhs = F1 * Rf - Rf * F1 + (Rf * F1 * Rfi).scale(lam)
    for a in range(4):
        for d in range(4):
            out = [zero] * 4
            for (g1, g2), c in prod.entry(a, d).items():
                for h in range(4):
                    v = br.rows[h][g1 * 4 + g2]
                    if v:
                        out[h] = out[h] + c * v
            want = [zero] * 4
            for (g,), c in rhs.entry(a, d).items():
                want[g] = want[g] + c
            assert out == want
    wit = sl_naive_witness(H2)
    assert wit is not None
    _, value = wit
    assert any(value)
    # the obstruction is a quantum effect: it vanishes at q = 1
    assert all(limit_coefficient(v, 0) == 0 for v in value)


def test_split_needs_nonzero_trace():
    with pytest.raises(TracelessUnitError):
        sl_split(superflip(1, 1))
