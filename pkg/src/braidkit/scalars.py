"""
Exact arithmetic in Q(q), the field of rational functions in one
indeterminate q with rational coefficients.

A QScalar is stored as q^shift * num(q)/den(q) with integer-coefficient
polynomials num, den (tuples of coefficients, ascending).  The
representation is canonical: num and den share no polynomial factor and
no integer content, den's leading coefficient is positive, and the shift
is minimal (neither num nor den is divisible by q).  Equal values
therefore have equal representations, and == is structural.

The module also provides q-integers k_q = (q^k - q^-k)/(q - q^-1),
evaluation and q->1 limit utilities, a parser/printer pair for the
scalar grammar, and a small Laurent-polynomial layer over QScalar for
carrying one extra symbolic parameter (w, epsilon, hbar) through
computations that stay division-free in that parameter.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, isqrt

from .errors import DivisionByZero, ParseError, PoleError

# ---------------------------------------------------------------------------
# integer-coefficient polynomial helpers (tuples, ascending powers)


def _strip(p):
    n = len(p)
    while n and p[n - 1] == 0:
        n -= 1
    return tuple(p[:n])


def _p_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _strip(out)


def _p_neg(a):
    return tuple(-c for c in a)


def _p_mul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _strip(out)


def _p_scale(a, k):
    if k == 0:
        return ()
    return tuple(c * k for c in a)


def _content(a):
    g = 0
    for c in a:
        g = gcd(g, c)
    return g


def _primitive(a):
    g = _content(a)
    if g <= 1:
        return _strip(a)
    return tuple(c // g for c in a)


def _p_prem(a, b):
    # pseudo-remainder of a by b, deg a >= deg b >= 0
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and _strip(a):
        da = len(a) - 1
        la = a[-1]
        a = [lb * c for c in a]
        for i, c in enumerate(b):
            a[da - db + i] -= la * c
        while a and a[-1] == 0:
            a.pop()
    return _strip(a)


def _p_gcd(a, b):
    a, b = _primitive(a), _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        a, b = b, _primitive(_p_prem(a, b))
    if a and a[-1] < 0:
        a = _p_neg(a)
    return a


def _p_div_exact(a, b):
    # exact quotient a/b; a known divisible by b
    if not a:
        return ()
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    rem = [Fraction(c) for c in a]
    lb = Fraction(b[-1])
    for k in range(len(a) - len(b), -1, -1):
        coef = rem[k + len(b) - 1] / lb
        q[k] = coef
        for i, c in enumerate(b):
            rem[k + i] -= coef * c
    assert all(r == 0 for r in rem) and all(f.denominator == 1 for f in q)
    return _strip(tuple(int(f) for f in q))


def _p_eval(a, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _p_deriv(a):
    return _strip(tuple(i * c for i, c in enumerate(a)))[1:] if len(a) > 1 else ()


# ---------------------------------------------------------------------------


class QScalar:
    """An element of Q(q) in canonical form."""

    __slots__ = ("s", "n", "d")

    def __init__(self, s, n, d, _canonical=False):
        if _canonical:
            self.s, self.n, self.d = s, n, d
            return
        n, d = _strip(n), _strip(d)
        if not d:
            raise DivisionByZero("zero denominator")
        if not n:
            self.s, self.n, self.d = 0, (), (1,)
            return
        i = 0
        while n[i] == 0:
            i += 1
        s, n = s + i, n[i:]
        j = 0
        while d[j] == 0:
            j += 1
        s, d = s - j, d[j:]
        g = gcd(_content(n), _content(d))
        if g > 1:
            n = tuple(c // g for c in n)
            d = tuple(c // g for c in d)
        h = _p_gcd(n, d)
        if h != (1,):
            n = _p_div_exact(n, h)
            d = _p_div_exact(d, h)
        if d[-1] < 0:
            n, d = _p_neg(n), _p_neg(d)
        self.s, self.n, self.d = s, n, d

    # -- constructors

    @classmethod
    def from_int(cls, k):
        return cls(0, (k,), (1,))

    @classmethod
    def from_fraction(cls, fr):
        fr = Fraction(fr)
        return cls(0, (fr.numerator,), (fr.denominator,))

    # -- predicates

    def is_zero(self):
        return not self.n

    def is_one(self):
        return self.s == 0 and self.n == (1,) and self.d == (1,)

    def __bool__(self):
        return bool(self.n)

    # -- ring/field structure

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.s == other.s and self.n == other.n and self.d == other.d

    def __hash__(self):
        return hash((self.s, self.n, self.d))

    def __neg__(self):
        return QScalar(self.s, _p_neg(self.n), self.d, _canonical=True)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.n:
            return other
        if not other.n:
            return self
        s = min(self.s, other.s)
        a = _p_mul(_shift_poly(self.n, self.s - s), other.d)
        b = _p_mul(_shift_poly(other.n, other.s - s), self.d)
        return QScalar(s, _p_add(a, b), _p_mul(self.d, other.d))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QScalar(self.s + other.s, _p_mul(self.n, other.n), _p_mul(self.d, other.d))

    __rmul__ = __mul__

    def inv(self):
        if not self.n:
            raise DivisionByZero("inverse of zero")
        return QScalar(-self.s, self.d, self.n)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, k):
        if k == 0:
            return one
        base = self if k > 0 else self.inv()
        out = base
        for _ in range(abs(k) - 1):
            out = out * base
        return out

    # -- evaluation and limits

    def eval_at(self, x):
        x = Fraction(x)
        if x == 0:
            raise PoleError("q = 0 is a forbidden specialization")
        dv = _p_eval(self.d, x)
        if dv == 0:
            raise PoleError(f"pole at q = {x}")
        return x**self.s * _p_eval(self.n, x) / dv

    def derivative(self):
        # d/dq of q^s n/d, exact in Q(q)
        num = _p_add(
            _p_scale(_p_mul(self.n, self.d), self.s),
            _shift_poly(
                _p_add(_p_mul(_p_deriv(self.n), self.d), _p_neg(_p_mul(self.n, _p_deriv(self.d)))),
                1,
            ),
        )
        return QScalar(self.s - 1, num, _p_mul(self.d, self.d))

    def sqrt(self):
        """Exact square root, or ValueError if self is not a square in Q(q)."""
        if not self.n:
            return zero
        if self.s % 2:
            raise ValueError("not a perfect square in Q(q)")
        rn = _poly_sqrt(self.n)
        rd = _poly_sqrt(self.d)
        root = QScalar(self.s // 2, rn, rd)
        assert root * root == self
        return root

    # -- rendering

    def __str__(self):
        return render_scalar(self)

    def __repr__(self):
        return f"QScalar({render_scalar(self)})"


def _shift_poly(p, k):
    # multiply by q^k, k >= 0
    return ((0,) * k) + p if k else p


def _coerce(x):
    if isinstance(x, QScalar):
        return x
    if isinstance(x, int):
        return QScalar(0, (x,), (1,), _canonical=True) if x else zero
    if isinstance(x, Fraction):
        return QScalar.from_fraction(x)
    return NotImplemented


def _poly_sqrt(p):
    # ascending square root of an integer polynomial with p[0] != 0
    if len(p) % 2 == 0:
        raise ValueError("not a perfect square in Q(q)")
    if p[0] < 0 or p[-1] < 0:
        raise ValueError("not a perfect square in Q(q)")
    r0 = isqrt(p[0])
    if r0 * r0 != p[0]:
        raise ValueError("not a perfect square in Q(q)")
    m = (len(p) - 1) // 2
    r = [r0] + [0] * m
    for k in range(1, m + 1):
        acc = p[k] - sum(r[i] * r[k - i] for i in range(1, k))
        num = acc
        if num % (2 * r0):
            raise ValueError("not a perfect square in Q(q)")
        r[k] = num // (2 * r0)
    r = _strip(r)
    if _p_mul(r, r) != _strip(p):
        raise ValueError("not a perfect square in Q(q)")
    return r


zero = QScalar(0, (), (1,), _canonical=True)
one = QScalar(0, (1,), (1,), _canonical=True)
q = QScalar(1, (1,), (1,), _canonical=True)


def qpow(k):
    """q^k as a QScalar."""
    return QScalar(k, (1,), (1,), _canonical=True)


def qint(k):
    """The q-integer k_q = (q^k - q^-k)/(q - q^-1)."""
    if k == 0:
        return zero
    if k < 0:
        return -qint(-k)
    coeffs = [0] * (2 * k - 1)
    for i in range(0, 2 * k - 1, 2):
        coeffs[i] = 1
    return QScalar(1 - k, tuple(coeffs), (1,))


def eval_at(s, x):
    """Exact rational value of s at q = x; PoleError on poles and at q = 0."""
    return _coerce(s).eval_at(x)


def limit_coefficient(s, order):
    """Taylor coefficient of (q-1)^order of s at q = 1, times order!.

    order 0 is the plain limit, order 1 the first derivative at q = 1.
    Canonical form has no removable singularities, so a vanishing
    denominator at q = 1 is a genuine pole.
    """
    s = _coerce(s)
    if order == 0:
        return s.eval_at(1)
    if order == 1:
        return s.derivative().eval_at(1)
    raise ValueError("order must be 0 or 1")


# ---------------------------------------------------------------------------
# parser / printer for the scalar grammar


def _term_str(coef, e):
    body = "q" if e == 1 else (f"q^{e}" if e else None)
    c = abs(coef)
    if body is None:
        return str(c)
    if c == 1:
        return body
    return f"{c}*{body}"


def _laurent_str(s, p):
    if not p:
        return "0"
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if not c:
            continue
        t = _term_str(c, s + i)
        if not parts:
            parts.append(t if c > 0 else "-" + t)
        else:
            parts.append((" + " if c > 0 else " - ") + t)
    return "".join(parts)


# a*b/c parses left to right, so the denominator may only be a bare
# atom (integer or q-power); the numerator may also be coef*q^k
_DEN_ATOM = re.compile(r"(\d+|q(\^-?\d+)?)\Z")
_NUM_ATOM = re.compile(r"(\d+\*)?(\d+|q(\^-?\d+)?)\Z")


def render_scalar(s):
    """Canonical text form; parse_scalar(render_scalar(s)) == s."""
    s = _coerce(s)
    if s.d == (1,):
        return _laurent_str(s.s, s.n)
    # pull an overall minus when the leading numerator coefficient is
    # negative, so the fraction body never needs parenthesized signs
    neg = s.n and s.n[-1] < 0
    num = _laurent_str(s.s, _p_neg(s.n) if neg else s.n)
    den = _laurent_str(0, s.d)
    if not _DEN_ATOM.match(den):
        den = f"({den})"
    if not _NUM_ATOM.match(num):
        num = f"({num})"
    return f"-{num}/{den}" if neg else f"{num}/{den}"


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def take_int(self):
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected integer", start)
        return int(self.text[start : self.pos])

    def expect(self, ch):
        if self.peek() != ch:
            raise ParseError(f"expected '{ch}'", self.pos)
        self.pos += 1


def parse_scalar(text):
    """Parse the scalar grammar: q, integers, + - * / ^ and parentheses."""
    toks = _Tokens(text)
    val = _parse_sum(toks)
    if toks.peek() is not None:
        raise ParseError("trailing input", toks.pos)
    return val


def _parse_sum(toks):
    val = _parse_product(toks)
    while toks.peek() in ("+", "-"):
        op = toks.peek()
        toks.pos += 1
        rhs = _parse_product(toks)
        val = val + rhs if op == "+" else val - rhs
    return val


def _parse_product(toks):
    val = _parse_unary(toks)
    while toks.peek() in ("*", "/"):
        op = toks.peek()
        toks.pos += 1
        rhs = _parse_unary(toks)
        if op == "/":
            if rhs.is_zero():
                raise DivisionByZero("division by zero in expression")
            val = val / rhs
        else:
            val = val * rhs
    return val


def _parse_unary(toks):
    sign = 1
    while toks.peek() in ("+", "-"):
        if toks.peek() == "-":
            sign = -sign
        toks.pos += 1
    val = _parse_power(toks)
    return val if sign > 0 else -val


def _parse_power(toks):
    base = _parse_atom(toks)
    if toks.peek() == "^":
        toks.pos += 1
        esign = 1
        if toks.peek() == "-":
            esign = -1
            toks.pos += 1
        e = toks.take_int()
        if base.is_zero() and esign * e <= 0:
            raise DivisionByZero("0 to a nonpositive power")
        base = base ** (esign * e)
    return base


def _parse_atom(toks):
    ch = toks.peek()
    if ch is None:
        raise ParseError("unexpected end of input", toks.pos)
    if ch == "(":
        toks.pos += 1
        val = _parse_sum(toks)
        toks.expect(")")
        return val
    if ch == "q":
        toks.pos += 1
        return q
    if ch.isdigit():
        return QScalar.from_int(toks.take_int())
    raise ParseError(f"unexpected character {ch!r}", toks.pos)


# ---------------------------------------------------------------------------
# one symbolic parameter over QScalar


class ParamScalar:
    """Laurent polynomial in one named parameter with QScalar coefficients.

    Just enough ring structure to keep w, epsilon or hbar symbolic through
    linear algebra and rewriting: +, -, *, division by a QScalar or by a
    monomial.  Mixed arithmetic with QScalar/int lifts the scalar to
    degree 0.
    """

    __slots__ = ("name", "terms")

    def __init__(self, name, terms):
        self.name = name
        self.terms = {e: c for e, c in terms.items() if not c.is_zero()}

    @classmethod
    def var(cls, name):
        return cls(name, {1: one})

    @classmethod
    def lift(cls, name, s):
        return cls(name, {0: _coerce(s)})

    def _check(self, other):
        if isinstance(other, ParamScalar):
            if other.name != self.name:
                raise ValueError(f"mixed parameters {self.name!r} and {other.name!r}")
            return other
        c = _coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return ParamScalar(self.name, {0: c})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.name, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    def __neg__(self):
        return ParamScalar(self.name, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, zero) + c
        return ParamScalar(self.name, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                out[e] = out.get(e, zero) + c1 * c2
        return ParamScalar(self.name, out)

    __rmul__ = __mul__

    def inv(self):
        if len(self.terms) != 1:
            raise ValueError("ParamScalar inverse only for monomials")
        (e0, c0), = self.terms.items()
        return ParamScalar(self.name, {-e0: c0.inv()})

    def __truediv__(self, other):
        if isinstance(other, ParamScalar):
            return self * other.inv()
        c = _coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return ParamScalar(self.name, {e: v / c for e, v in self.terms.items()})

    def coefficient(self, e):
        """QScalar coefficient of parameter^e."""
        return self.terms.get(e, zero)

    def substitute(self, value):
        """Evaluate at parameter = value (a QScalar)."""
        value = _coerce(value)
        out = zero
        for e, c in self.terms.items():
            out = out + c * value**e
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, reverse=True):
            c = render_scalar(self.terms[e])
            head = self.name if e == 1 else (f"{self.name}^{e}" if e else "")
            bits.append(f"({c})*{head}" if head else f"({c})")
        return " + ".join(bits)

    __repr__ = __str__
