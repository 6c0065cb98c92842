"""Finitely presented associative algebras over Q(q).

Words are tuples of generator indices.  A presentation is an interreduced
set of oriented rewriting rules lead -> tail where every tail word is
strictly smaller than the lead in degree-lex order, so rewriting terminates
unconditionally.  Confluence is never assumed: pbw_check verifies it
degree by degree together with the expected monomial counts.

Relation systems enter as plain word->coefficient dicts; from_relations
row-reduces their span (pivot = largest word of each row) and orients the
result.  Coefficients are QScalar or ParamScalar, so one code path serves
both numeric and formal-parameter deformations.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import product
from math import comb

from .errors import Inconsistent, NonOrientable, ParseError
from .linalg import _rref
from .scalars import (
    ParamScalar,
    QScalar,
    _NUM_ATOM,
    limit_coefficient,
    one,
    q,
    qint,
    qpow,
    parse_scalar,
    render_scalar,
    zero,
)


def _deglex(word):
    return (len(word), word)


def _scalarize(v):
    if isinstance(v, (QScalar, ParamScalar)):
        return v
    if isinstance(v, int):
        return QScalar.from_int(v)
    if isinstance(v, Fraction):
        return QScalar.from_fraction(v)
    raise TypeError(f"cannot use {type(v).__name__} as a coefficient")


# ---------------------------------------------------------------------------
# presentations


class Presentation:
    """Generators plus an oriented, interreduced rewriting system.

    The tuple order of ``generators`` is the precedence used by degree-lex;
    it is part of the presentation, not a display choice.
    """

    __slots__ = ("generators", "index", "rules", "name", "meta",
                 "_lead_lengths", "_graded", "_words")

    def __init__(self, generators, rules, name="", graded_counts=None, meta=None):
        self.generators = tuple(generators)
        self.index = {g: i for i, g in enumerate(self.generators)}
        clean = {}
        for lead, tail in rules.items():
            tail = tuple((w, c) for w, c in tail if c)
            for w, _ in tail:
                if _deglex(w) >= _deglex(lead):
                    raise NonOrientable(
                        f"tail word {w} not below lead {lead}")
            clean[lead] = tail
        self.rules = clean
        self.name = name
        self.meta = dict(meta or {})
        self._lead_lengths = tuple(sorted({len(l) for l in clean}))
        self._graded = graded_counts
        self._words = {}

    def __eq__(self, other):
        if not isinstance(other, Presentation):
            return NotImplemented
        return self.generators == other.generators and self.rules == other.rules

    __hash__ = None

    def __repr__(self):
        return f"Presentation({self.name or self.generators}, {len(self.rules)} rules)"

    # -- rewriting

    def _match(self, word, i):
        for L in self._lead_lengths:
            cand = word[i:i + L]
            if len(cand) == L and cand in self.rules:
                return cand
        return None

    def _irreducible(self, word):
        return all(self._match(word, i) is None for i in range(len(word)))

    def reduce_terms(self, terms, rightmost=False):
        """Normal form of a word->coefficient dict.

        rightmost switches the scan direction; any strategy reaches the
        same result exactly when the system is confluent, which the tests
        exploit as a cross-check.
        """
        out = {}
        stack = [(w, c) for w, c in terms.items() if c]
        while stack:
            word, coef = stack.pop()
            hit = None
            rng = range(len(word) - 1, -1, -1) if rightmost else range(len(word))
            for i in rng:
                lead = self._match(word, i)
                if lead is not None:
                    hit = (i, lead)
                    break
            if hit is None:
                prev = out.get(word)
                tot = coef if prev is None else prev + coef
                if tot:
                    out[word] = tot
                elif prev is not None:
                    del out[word]
                continue
            i, lead = hit
            # tails sit strictly below the lead, so this terminates
            for tw, tc in self.rules[lead]:
                stack.append((word[:i] + tw + word[i + len(lead):], coef * tc))
        return out

    # -- elements

    def gen(self, name):
        if name not in self.index:
            raise KeyError(f"no generator {name!r} in {self.generators}")
        return AlgebraElement(self, {(self.index[name],): one}, _normal=True)

    def gens(self):
        """Generator elements in precedence order."""
        return tuple(self.gen(g) for g in self.generators)

    def scalar(self, v):
        v = _scalarize(v)
        return AlgebraElement(self, {(): v} if v else {}, _normal=True)

    def zero_element(self):
        return AlgebraElement(self, {}, _normal=True)

    def element(self, text):
        return parse_element(text, self)

    def normal_form(self, el):
        if isinstance(el, AlgebraElement):
            return el
        return AlgebraElement(self, el)

    # -- monomial combinatorics

    def monomials(self, d):
        """Irreducible words of length d, ascending deg-lex."""
        try:
            return self._words[d]
        except KeyError:
            g = len(self.generators)
            out = tuple(w for w in product(range(g), repeat=d)
                        if self._irreducible(w))
            self._words[d] = out
            return out

    def expected_dimension(self, d):
        if self._graded is not None:
            return self._graded(d)
        return comb(len(self.generators) + d - 1, d)

    # -- construction from relations

    @classmethod
    def from_relations(cls, generators, relations, name="",
                       graded_counts=None, meta=None):
        """Orient a list of relations (word->coeff dicts, each = 0).

        The relation span is row-reduced with the largest deg-lex word of
        each row as pivot; rules are then tail-reduced against each other,
        re-orienting from scratch whenever a lead itself became reducible.
        """
        gens = tuple(generators)
        rels = [dict(r) for r in relations]
        for _ in range(50):
            rules = _orient(rels)
            done, rels = _tail_reduce(gens, rules)
            if done is not None:
                return cls(gens, done, name=name,
                           graded_counts=graded_counts, meta=meta)
        raise NonOrientable("interreduction does not stabilize")


def _orient(relations):
    words = sorted({w for rel in relations for w in rel},
                   key=_deglex, reverse=True)
    col = {w: i for i, w in enumerate(words)}
    rows = [{col[w]: c for w, c in rel.items() if c} for rel in relations]
    try:
        red, pivots = _rref(rows)
    except (ValueError, ZeroDivisionError) as exc:
        raise NonOrientable(
            f"cannot normalize a leading coefficient: {exc}") from None
    rules = {}
    for row, p in zip(red, pivots):
        lead = words[p]
        if not lead:
            raise NonOrientable("relations force 1 = 0")
        rules[lead] = tuple(sorted(((words[c], -v) for c, v in row.items()
                                    if c != p),
                                   key=lambda t: _deglex(t[0]), reverse=True))
    return rules


def _rule_relation(lead, tail):
    rel = {lead: one}
    for w, c in tail:
        rel[w] = rel.get(w, zero) - c
    return rel


def _tail_reduce(generators, rules):
    # Returns (rules, None) once interreduced.  When a lead becomes reducible
    # by the other rules, the whole relation is reduced against them: if it
    # dies the rule was implied and is dropped, otherwise (None, relations) is
    # returned so the caller re-orients with a strictly smaller relation.
    for _ in range(100):
        changed = False
        for lead in sorted(rules, key=_deglex, reverse=True):
            tail = rules.pop(lead)
            trial = Presentation(generators, rules)
            if not trial._irreducible(lead):
                red = trial.reduce_terms(_rule_relation(lead, tail))
                if not red:
                    changed = True
                    continue
                rels = [_rule_relation(l, t) for l, t in rules.items()]
                rels.append(red)
                return None, rels
            red = trial.reduce_terms(dict(tail))
            new_tail = tuple(sorted(red.items(),
                                    key=lambda t: _deglex(t[0]), reverse=True))
            if new_tail != tail:
                changed = True
            rules[lead] = new_tail
        if not changed:
            return rules, None
    raise NonOrientable("tail reduction does not stabilize")


# ---------------------------------------------------------------------------
# elements


class AlgebraElement:
    """Element of a finitely presented algebra, kept in normal form."""

    __slots__ = ("presentation", "terms")

    def __init__(self, presentation, terms, _normal=False):
        if not _normal:
            terms = presentation.reduce_terms(terms)
        else:
            terms = {w: c for w, c in terms.items() if c}
        self.presentation = presentation
        self.terms = terms

    # -- predicates and parts

    def is_zero(self):
        return not self.terms

    def is_scalar(self):
        return all(not w for w in self.terms)

    def scalar_part(self):
        return self.terms.get((), zero)

    def coefficient(self, names):
        """Coefficient of the exact word given by generator names."""
        P = self.presentation
        word = tuple(P.index[n] for n in names)
        return self.terms.get(word, zero)

    def degree(self):
        return max((len(w) for w in self.terms), default=0)

    def homogeneous_part(self, d):
        return AlgebraElement(self.presentation,
                              {w: c for w, c in self.terms.items()
                               if len(w) == d},
                              _normal=True)

    def map_coefficients(self, fn):
        out = {}
        for w, c in self.terms.items():
            v = fn(c)
            if v:
                out[w] = v
        return AlgebraElement(self.presentation, out, _normal=True)

    # -- arithmetic

    def _assert_same(self, other):
        if self.presentation is not other.presentation \
                and self.presentation != other.presentation:
            raise ValueError("elements live over different presentations")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            other = self.presentation.scalar(other)
        self._assert_same(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            prev = out.get(w)
            tot = c if prev is None else prev + c
            if tot:
                out[w] = tot
            elif prev is not None:
                del out[w]
        return AlgebraElement(self.presentation, out, _normal=True)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.presentation,
                              {w: -c for w, c in self.terms.items()},
                              _normal=True)

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            other = self.presentation.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            v = _scalarize(other)
            return AlgebraElement(self.presentation,
                                  {w: c * v for w, c in self.terms.items()},
                                  _normal=True) if v else \
                self.presentation.zero_element()
        self._assert_same(other)
        raw = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                v = c1 * c2
                prev = raw.get(w)
                tot = v if prev is None else prev + v
                if tot:
                    raw[w] = tot
                elif prev is not None:
                    del raw[w]
        return AlgebraElement(self.presentation, raw)

    def __rmul__(self, other):
        v = _scalarize(other)
        return AlgebraElement(self.presentation,
                              {w: v * c for w, c in self.terms.items()},
                              _normal=True) if v else \
            self.presentation.zero_element()

    def __truediv__(self, other):
        return self * _scalarize(other).inv()

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power of an algebra element")
        out = self.presentation.scalar(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            if other == 0:
                return self.is_zero()
            return NotImplemented
        self._assert_same(other)
        return self.terms == other.terms

    __hash__ = None

    def __str__(self):
        return render_element(self)

    def __repr__(self):
        return f"<{render_element(self)}>"


def normal_form(p, P):
    """Canonical element from a raw word->coefficient dict or element."""
    if isinstance(p, AlgebraElement):
        return AlgebraElement(P, p.terms)
    return AlgebraElement(P, p)


def commutator(u, v):
    return u * v - v * u


def is_central(u):
    P = u.presentation
    return all(commutator(u, P.gen(g)).is_zero() for g in P.generators)


# ---------------------------------------------------------------------------
# presets

_LAM = q - qpow(-1)


def preset(name, **params):
    """Named presentation.

    mrea_n2(hbar)        quantum-matrix generators a,b,c,d, deformed
                         reflection relations
    mrea_lhbc(hbar)      same algebra in the trace/traceless basis b,h,c,l
    sl_n2(hbar)          traceless part b,h,c
    kq_r3                sl_n2 at hbar=0 (quantum R^3 coordinate ring)
    kq_r4                kq_r3 with a central generator l adjoined
                         (quantum R^4 coordinate ring)
    hyperboloid(hbar, casimir)
                         sl_n2 modulo the quadratic Casimir = casimir
    rtt_n2               quantum SL(2) function algebra, precedence
                         b < c < a < d so that both ad and da rewrite
                         into bc
    """
    try:
        builder = _PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; "
                         f"choose from {sorted(_PRESETS)}") from None
    return builder(**params)


def _sl_relations(h, shift=0):
    # indices b, h, c = shift, shift+1, shift+2; a central generator, if
    # any, must sit below them in precedence or the l-tails cannot be
    # oriented under deg-lex
    two = qint(2)
    q2 = q * q
    b, hh, c = shift, shift + 1, shift + 2
    r1 = {(hh, b): q2, (b, hh): -one, (b,): -(two * h)}
    r2 = {(c, hh): q2, (hh, c): -one, (c,): -(two * h)}
    r3 = {(b, c): two * q, (c, b): -(two * q), (hh, hh): q2 - one,
          (hh,): -(two * h)}
    if shift:
        li = 0
        r1[(li, b)] = _LAM
        r2[(li, c)] = _LAM
        r3[(li, hh)] = _LAM
    return [r1, r2, r3]


def _preset_mrea_n2(hbar=1):
    h = _scalarize(hbar)
    A, B, C, D = 0, 1, 2, 3
    rels = [
        {(A, B): q, (B, A): -qpow(-1), (B,): -h},
        {(C, A): q, (A, C): -qpow(-1), (C,): -h},
        {(A, D): one, (D, A): -one},
        {(B, C): q, (C, B): -q, (A, D): -_LAM, (A, A): _LAM,
         (A,): -h, (D,): h},
        {(C, D): q, (D, C): -q, (C, A): -_LAM, (C,): h},
        {(D, B): q, (B, D): -q, (A, B): -_LAM, (B,): h},
    ]
    return Presentation.from_relations(
        ("a", "b", "c", "d"), rels, name="mrea_n2",
        meta={"preset": "mrea_n2", "hbar": h, "n": 2})


def _preset_mrea_lhbc(hbar=1):
    h = _scalarize(hbar)
    rels = _sl_relations(h, shift=1)
    rels += [{(i, 0): one, (0, i): -one} for i in range(1, 4)]
    return Presentation.from_relations(
        ("l", "b", "h", "c"), rels, name="mrea_lhbc",
        meta={"preset": "mrea_lhbc", "hbar": h})


def _preset_sl_n2(hbar=1):
    h = _scalarize(hbar)
    return Presentation.from_relations(
        ("b", "h", "c"), _sl_relations(h), name="sl_n2",
        meta={"preset": "sl_n2", "hbar": h})


def _preset_kq_r3():
    P = _preset_sl_n2(0)
    return Presentation(P.generators, P.rules, name="kq_r3",
                        meta={"preset": "kq_r3", "hbar": zero})


def _preset_kq_r4():
    # not mrea_lhbc at hbar=0: the l-coupling terms are dropped, so the
    # algebra splits as kq_r3 with a central generator adjoined
    rels = _sl_relations(zero)
    rels += [{(3, i): one, (i, 3): -one} for i in range(3)]
    return Presentation.from_relations(
        ("b", "h", "c", "l"), rels, name="kq_r4",
        meta={"preset": "kq_r4", "hbar": zero})


def _preset_hyperboloid(hbar=1, casimir=None):
    h = _scalarize(hbar)
    if casimir is None:
        casimir = qpow(-2) * qint(2) * qint(2)
    C = _scalarize(casimir)
    if not C:
        raise ValueError("hyperboloid requires a nonzero casimir")
    two = qint(2)
    rels = _sl_relations(h)
    rels.append({(0, 2): qpow(-1), (1, 1): two.inv(), (2, 0): q, (): -C})
    return Presentation.from_relations(
        ("b", "h", "c"), rels, name="hyperboloid",
        graded_counts=lambda d: 1 if d == 0 else 2 * d + 1,
        meta={"preset": "hyperboloid", "hbar": h, "casimir": C})


def _preset_rtt_n2():
    # precedence b < c < a < d: indices b=0, c=1, a=2, d=3
    B, C, A, D = 0, 1, 2, 3
    rels = [
        {(A, B): one, (B, A): -q},
        {(A, C): one, (C, A): -q},
        {(B, D): one, (D, B): -q},
        {(C, D): one, (D, C): -q},
        {(B, C): one, (C, B): -one},
        {(A, D): one, (D, A): -one, (B, C): -_LAM},
        {(A, D): one, (B, C): -q, (): -one},
        {(D, A): one, (B, C): -qpow(-1), (): -one},
    ]
    return Presentation.from_relations(
        ("b", "c", "a", "d"), rels, name="rtt_n2",
        graded_counts=lambda d: comb(d + 3, 3) - comb(d + 1, 3),
        meta={"preset": "rtt_n2"})


_PRESETS = {
    "mrea_n2": _preset_mrea_n2,
    "mrea_lhbc": _preset_mrea_lhbc,
    "sl_n2": _preset_sl_n2,
    "kq_r3": _preset_kq_r3,
    "kq_r4": _preset_kq_r4,
    "hyperboloid": _preset_hyperboloid,
    "rtt_n2": _preset_rtt_n2,
}


# ---------------------------------------------------------------------------
# reflection-equation presentations from a braiding


def _free_mat_mul(Am, Bm):
    size = len(Am)
    out = [[{} for _ in range(size)] for _ in range(size)]
    for i in range(size):
        for k in range(size):
            e = Am[i][k]
            if not e:
                continue
            row = out[i]
            for j in range(size):
                f = Bm[k][j]
                if not f:
                    continue
                acc = row[j]
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
    return out


def mrea_from_R(H, hbar=1, name=None):
    """Modified reflection algebra of a skew-invertible Hecke symmetry.

    Generators are the entries of an n x n matrix L (row = lower index);
    the relations are the entries of

        R L1 R L1 - L1 R L1 R = hbar (R L1 - L1 R)

    on the square of the basic space.  For n = 2 the generators are named
    a, b, c, d row by row, matching mrea_n2; hbar = 0 gives the
    undeformed reflection algebra.
    """
    h = _scalarize(hbar)
    n = H.n
    size = n * n
    if name is None:
        name = f"mrea_{H.name}"
    if n == 2:
        gens = ("a", "b", "c", "d")
    else:
        gens = tuple(f"L{i + 1}{j + 1}" for i in range(n) for j in range(n))

    L1 = [[{} for _ in range(size)] for _ in range(size)]
    for k in range(n):
        for l in range(n):
            for m in range(n):
                L1[k * n + l][m * n + l][(k * n + m,)] = one
    Rm = [[({(): v} if v else {}) for v in row] for row in H.R.rows]

    RL = _free_mat_mul(Rm, L1)
    LR = _free_mat_mul(L1, Rm)
    lhs = _free_mat_mul(RL, RL)
    rhs = _free_mat_mul(LR, LR)

    relations = []
    for i in range(size):
        for j in range(size):
            rel = dict(lhs[i][j])
            for src, coef in ((rhs[i][j], -one), (RL[i][j], -h),
                              (LR[i][j], h)):
                for w, c in src.items():
                    v = coef * c
                    prev = rel.get(w)
                    tot = v if prev is None else prev + v
                    if tot:
                        rel[w] = tot
                    elif prev is not None:
                        del rel[w]
            if rel:
                relations.append(rel)
    return Presentation.from_relations(
        gens, relations, name=name,
        meta={"preset": "mrea_from_R", "hbar": h, "n": n,
              "symmetry": H.name})


# ---------------------------------------------------------------------------
# diamond checks


def overlap_mismatches(P):
    """Overlap ambiguities whose two resolutions differ.

    Returns [(word, left_nf, right_nf)] where left resolves the prefix
    rule first and right the suffix rule.  Empty exactly when every
    ambiguity up to lead-length overlaps is confluent.
    """
    out = []
    leads = sorted(P.rules, key=_deglex)
    for l1 in leads:
        for l2 in leads:
            for k in range(1, min(len(l1), len(l2))):
                if l1[len(l1) - k:] != l2[:k]:
                    continue
                word = l1 + l2[k:]
                left = P.reduce_terms(_apply_rule(P, word, 0, l1))
                right = P.reduce_terms(
                    _apply_rule(P, word, len(l1) - k, l2))
                if left != right:
                    out.append((word, left, right))
    return out


def _apply_rule(P, word, i, lead):
    out = {}
    for tw, tc in P.rules[lead]:
        w = word[:i] + tw + word[i + len(lead):]
        prev = out.get(w)
        tot = tc if prev is None else prev + tc
        if tot:
            out[w] = tot
        elif prev is not None:
            del out[w]
    return out


def pbw_check(P, dmax):
    """Per-degree monomial counts plus confluence of all overlaps.

    Counts alone only see the rule leads; the overlap check is what ties
    the irreducible words to an actual basis of the quotient.  Returns
    (ok, report) where report rows carry degree, expected, actual and a
    witness for the first bad overlap of that degree.
    """
    mismatches = overlap_mismatches(P)
    by_degree = {}
    for word, left, right in mismatches:
        by_degree.setdefault(len(word), (word, left, right))
    report = []
    ok = True
    for d in range(1, dmax + 1):
        expected = P.expected_dimension(d)
        actual = len(P.monomials(d))
        row = {"degree": d, "expected": expected, "actual": actual,
               "ok": expected == actual and d not in by_degree}
        if d in by_degree:
            word, left, right = by_degree[d]
            row["witness"] = {
                "overlap": _word_str(P, word) or "1",
                "left": render_element(
                    AlgebraElement(P, left, _normal=True)),
                "right": render_element(
                    AlgebraElement(P, right, _normal=True)),
            }
        ok = ok and row["ok"]
        report.append(row)
    return ok, report


# ---------------------------------------------------------------------------
# semiclassical expansion


def semiclassical_bracket(u, v, family):
    """First-order parts of a commutator in an hbar family of presets.

    family is a preset name accepting hbar (or such a presentation built
    with a formal hbar); u, v are element texts or elements over it.  In
    the double expansion

        [u, v] = hbar {u,v}_h + (q - 1) {u,v}_q + higher order

    both brackets are returned as dicts sorted-word-of-names -> Fraction.
    The order-zero part of the commutator must vanish; anything else means
    the family fails to be commutative at q = 1, hbar = 0.
    """
    if isinstance(family, Presentation):
        P = family
    else:
        P = preset(family, hbar=ParamScalar.var("hbar"))
    if isinstance(u, str):
        u = P.element(u)
    if isinstance(v, str):
        v = P.element(v)
    c = commutator(u, v)
    hpart, qpart = {}, {}
    for word, coef in c.terms.items():
        if isinstance(coef, QScalar):
            coef = ParamScalar.lift("hbar", coef)
        key = tuple(P.generators[i] for i in sorted(word))
        c0 = coef.coefficient(0)
        if limit_coefficient(c0, 0) != 0:
            raise Inconsistent(
                f"commutator does not vanish at q = 1, hbar = 0 on {key}")
        f_h = limit_coefficient(coef.coefficient(1), 0)
        f_q = limit_coefficient(c0, 1)
        if f_h:
            hpart[key] = hpart.get(key, Fraction(0)) + f_h
        if f_q:
            qpart[key] = qpart.get(key, Fraction(0)) + f_q
    return ({k: v for k, v in hpart.items() if v},
            {k: v for k, v in qpart.items() if v})


# ---------------------------------------------------------------------------
# parsing and rendering


_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z0-9_]*|\^|[()+\-*/])")


def _tokenize(text):
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError("unexpected character", pos=pos)
            break
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    return out


class _ElemParser:
    def __init__(self, text, P):
        self.toks = _tokenize(text)
        self.pos = 0
        self.P = P

    def peek(self):
        if self.pos < len(self.toks):
            return self.toks[self.pos][0]
        return None

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, want):
        if self.peek() != want:
            at = self.toks[self.pos][1] if self.pos < len(self.toks) else None
            raise ParseError(f"expected {want!r}", pos=at)
        self.take()

    def parse(self):
        el = self.sum()
        if self.pos != len(self.toks):
            raise ParseError("trailing input", pos=self.toks[self.pos][1])
        return el

    def sum(self):
        el = self.product()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.product()
            el = el + rhs if op == "+" else el - rhs
        return el

    def product(self):
        el = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()[0]
            rhs = self.unary()
            if op == "*":
                el = el * rhs
            else:
                if not rhs.is_scalar():
                    raise ParseError("division only by scalars")
                el = el * rhs.scalar_part().inv()
        return el

    def unary(self):
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take()[0] == "-":
                sign = -sign
        el = self.power()
        return el if sign > 0 else -el

    def power(self):
        el = self.atom()
        while self.peek() == "^":
            self.take()
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            tok, at = self.take() if self.pos < len(self.toks) else (None, None)
            if tok is None or not tok.isdigit():
                raise ParseError("expected an integer exponent", pos=at)
            k = int(tok)
            if neg:
                if not el.is_scalar():
                    raise ParseError("negative power of a nonscalar")
                el = self.P.scalar(el.scalar_part().inv() ** k)
            else:
                el = el ** k
        return el

    def atom(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        if tok == "(":
            self.take()
            el = self.sum()
            self.expect(")")
            return el
        tok, at = self.take()
        if tok.isdigit():
            return self.P.scalar(int(tok))
        if tok == "q":
            return self.P.scalar(q)
        if tok in self.P.index:
            return self.P.gen(tok)
        raise ParseError(f"unknown name {tok!r}", pos=at)


def parse_element(text, P):
    """Parse an expression with explicit * into an element of P."""
    return _ElemParser(text, P).parse()


def _word_str(P, word):
    if not word:
        return None
    bits = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        g = P.generators[word[i]]
        bits.append(g if j - i == 1 else f"{g}^{j - i}")
        i = j
    return "*".join(bits)


def _signed_coeff(c, wrap=True):
    if isinstance(c, ParamScalar):
        return False, f"({c})" if wrap else str(c)
    neg = bool(c.n) and c.n[-1] < 0
    s = render_scalar(-c if neg else c)
    if wrap and not _NUM_ATOM.fullmatch(s):
        s = f"({s})"
    return neg, s


def render_element(el):
    """Inverse of parse_element on normal forms, largest word first."""
    if not el.terms:
        return "0"
    P = el.presentation
    bits = []
    for word in sorted(el.terms, key=_deglex, reverse=True):
        body = _word_str(P, word)
        neg, cs = _signed_coeff(el.terms[word], wrap=body is not None)
        if body is None:
            text = cs
        elif cs == "1":
            text = body
        else:
            text = f"{cs}*{body}"
        bits.append((neg, text))
    out = ("-" if bits[0][0] else "") + bits[0][1]
    for neg, text in bits[1:]:
        out += (" - " if neg else " + ") + text
    return out


# ---------------------------------------------------------------------------
# JSON round trip


def presentation_to_json(P):
    """Serializable form; refuses formal-parameter coefficients."""
    rels = []
    for lead in sorted(P.rules, key=_deglex):
        tail = []
        for w, c in P.rules[lead]:
            if isinstance(c, ParamScalar):
                raise ValueError(
                    "parametric presentations are not serializable")
            tail.append({"word": [P.generators[i] for i in w],
                         "coeff": render_scalar(c)})
        rels.append({"lead": [P.generators[i] for i in lead], "tail": tail})
    return {"name": P.name, "generators": list(P.generators),
            "relations": rels}


def presentation_from_json(doc):
    gens = tuple(doc["generators"])
    index = {g: i for i, g in enumerate(gens)}
    relations = []
    for rel in doc["relations"]:
        terms = {tuple(index[g] for g in rel["lead"]): one}
        for t in rel["tail"]:
            w = tuple(index[g] for g in t["word"])
            c = parse_scalar(t["coeff"])
            terms[w] = terms.get(w, zero) - c
        relations.append(terms)
    return Presentation.from_relations(gens, relations,
                                       name=doc.get("name", ""))
