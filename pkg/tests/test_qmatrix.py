"""Matrix layer: R-traces, power sums, traceless shift, Cayley-Hamilton."""

import pytest

from braidkit.braiding import flip, standard_R, superflip
from braidkit.errors import TracelessUnitError
from braidkit.ncpoly import Presentation, is_central, mrea_from_R, preset
from braidkit.qmatrix import (
    AlgMatrix,
    casimir_full,
    casimir_sl,
    ch_check,
    ch_residual,
    f_matrix,
    hbar_shift,
    l_matrix,
    mat_mul,
    mat_pow,
    power_sum,
    r_trace_mat,
    sl_shift,
)
from braidkit.scalars import ParamScalar, q, qint, qpow


H2 = standard_R(2)


def test_mat_pow_and_associativity():
    P = preset("mrea_n2", hbar=1)
    L = l_matrix(P)
    assert mat_pow(L, 0) == AlgMatrix.identity(P, 2)
    assert mat_mul(mat_mul(L, L), L) == mat_mul(L, mat_mul(L, L))
    assert mat_pow(L, 3) == L * L * L
    with pytest.raises(ValueError):
        mat_pow(AlgMatrix(P, [["a", "b"]]), 2)


def test_quantum_trace_of_l():
    P = preset("mrea_n2", hbar=1)
    L = l_matrix(P)
    ell = q ** 2 * r_trace_mat(H2, L)
    assert ell == P.element("q^-1*a + q*d")
    assert is_central(ell)


def test_power_sums():
    P = preset("mrea_n2", hbar=1)
    L = l_matrix(P)
    assert power_sum(H2, L, 0) == P.scalar(qpow(-1) + qpow(-3))
    for k in (1, 2, 3):
        assert is_central(power_sum(H2, L, k)), k
    cas = q ** 2 * power_sum(H2, L, 2)
    assert is_central(cas)


def test_power_sums_centrality_n3():
    H3 = standard_R(3)
    P3 = mrea_from_R(H3, hbar=1)
    L3 = l_matrix(P3)
    for k in (1, 2):
        assert is_central(power_sum(H3, L3, k)), k


def test_flip_power_sum_is_plain_trace():
    Hf = flip(2)
    P = mrea_from_R(Hf, hbar=1)
    L = l_matrix(P)
    for k in (1, 2, 3):
        assert power_sum(Hf, L, k) == mat_pow(L, k).trace()


def test_sl_shift_matches_explicit_f():
    P = preset("mrea_n2", hbar=1)
    F, tr = sl_shift(H2, l_matrix(P))
    assert tr == q ** -2 * P.element("q^-1*a + q*d")
    two = qint(2)
    h = P.element("a - d")
    assert F.entry(0, 0) == q / two * h
    assert F.entry(0, 1) == P.gen("b")
    assert F.entry(1, 0) == P.gen("c")
    assert F.entry(1, 1) == -(qpow(-1) / two) * h
    assert r_trace_mat(H2, F).is_zero()


def test_sl_shift_flip_is_classical():
    Hf = flip(2)
    P = mrea_from_R(Hf, hbar=1)
    L = l_matrix(P)
    F, tr = sl_shift(Hf, L)
    assert tr == L.trace()
    assert F == L - AlgMatrix.identity(P, 2) * (tr / 2)


def test_sl_shift_balanced_birank_fails():
    P = preset("mrea_n2", hbar=1)
    with pytest.raises(TracelessUnitError):
        sl_shift(superflip(1, 1), AlgMatrix.identity(P, 2))


@pytest.mark.parametrize("hbar", [0, 1, q])
def test_cayley_hamilton_sl(hbar):
    P = preset("sl_n2", hbar=hbar)
    assert ch_check(P)


def test_cayley_hamilton_formal_hbar():
    P = preset("sl_n2", hbar=ParamScalar.var("hbar"))
    assert ch_check(P)


def test_cayley_hamilton_quotient():
    assert ch_check(preset("hyperboloid", hbar=1))


def test_cayley_hamilton_fails_off_family():
    # wrong hbar coefficient must not satisfy the identity
    P = preset("sl_n2", hbar=1)
    assert not ch_residual(P, hbar=q).is_zero()


def test_cayley_hamilton_via_sl_shift():
    # inside the full algebra the quadratic identity for F picks up an l F
    # correction which dies in the trace-free quotient
    P = preset("mrea_n2", hbar=1)
    L = l_matrix(P)
    F, _ = sl_shift(H2, L)
    ell = q ** 2 * r_trace_mat(H2, L)
    two = qint(2)
    lam = q - qpow(-1)
    cas_sl = q ** 2 * power_sum(H2, L, 2) - ell * ell / two
    lhs = (F * F - F * qpow(-1) - AlgMatrix.identity(P, 2) * (cas_sl / two)
           + F * (ell * (lam / (q * two))))
    assert lhs.is_zero()


def test_basis_dictionary_mrea_to_lhbc():
    # l = q^-1 a + q d, h = a - d, b, c satisfy the (l,h,b,c) relations
    P = preset("mrea_n2", hbar=1)
    el = P.element("q^-1*a + q*d")
    h = P.element("a - d")
    b, c = P.gen("b"), P.gen("c")
    two = qint(2)
    lam = q - qpow(-1)
    assert (el * b - b * el).is_zero()
    assert (el * h - h * el).is_zero()
    assert (q ** 2 * h * b - b * h + lam * el * b - two * b).is_zero()
    assert (q ** 2 * c * h - h * c + lam * el * c - two * c).is_zero()
    assert (two * q * (b * c - c * b) + (q * q - 1) * h * h
            + lam * el * h - two * h).is_zero()
    # and back: a, d recovered from l, h
    assert P.gen("a") == (el + q * h) / two
    assert P.gen("d") == (el - qpow(-1) * h) / two


def test_sl_quotient_of_lhbc():
    # killing l in mrea_lhbc(h) leaves exactly the sl_n2(h) relations
    from braidkit.scalars import one, zero
    Pl = preset("mrea_lhbc", hbar=1)
    Ps = preset("sl_n2", hbar=1)
    rels = []
    for lead, tail in Pl.rules.items():
        rel = {lead: one}
        for w, c in tail:
            rel[w] = rel.get(w, zero) - c
        rels.append(rel)
    li = Pl.index["l"]
    rels.append({(li,): one})
    Q = Presentation.from_relations(Pl.generators, rels, name="lhbc/l")
    assert Q.rules[(li,)] == ()
    remap = {Pl.index[g]: Ps.index[g] for g in ("b", "h", "c")}
    for u in ("b", "h", "c"):
        for v in ("b", "h", "c"):
            got = Q.reduce_terms({(Pl.index[u], Pl.index[v]): one})
            want = (Ps.gen(u) * Ps.gen(v)).terms
            assert {tuple(remap[i] for i in w): c
                    for w, c in got.items()} == want, (u, v)


def test_casimir_full_central_in_lhbc():
    P = preset("mrea_lhbc", hbar=1)
    assert is_central(casimir_full(P))
    assert is_central(casimir_sl(P) + P.gen("l") * P.gen("l") / qint(2))


def test_hbar_shift_round_trip():
    rea = mrea_from_R(H2, hbar=0)
    assert hbar_shift(rea, 1) == preset("mrea_n2", hbar=1)
    assert hbar_shift(rea, q) == preset("mrea_n2", hbar=q)
    assert hbar_shift(hbar_shift(rea, q), -q) == rea
    assert hbar_shift(rea, 0) is rea
    assert hbar_shift(preset("mrea_n2", hbar=1), 1) == preset("mrea_n2", hbar=2)
    with pytest.raises(ValueError):
        hbar_shift(preset("mrea_lhbc", hbar=1), 1)
