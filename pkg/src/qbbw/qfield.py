"""
Exact arithmetic in the rational function field Q(q).

Elements are quotients of integer Laurent polynomials in a formal
parameter q.  Everything is immutable; the representation of a
QScalar is canonical, so ``==`` and ``hash`` are field equality.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd

__all__ = [
    "LaurentPoly",
    "QScalar",
    "q",
    "qpow",
    "q_int",
    "q_factorial",
    "normalize",
    "eval_at",
    "parse_qscalar",
    "PoleError",
]


class PoleError(ZeroDivisionError):
    """Raised when a QScalar is evaluated at a pole."""


# ---------------------------------------------------------------------------
# dense integer polynomial helpers (lists of ints, lowest degree first)
# ---------------------------------------------------------------------------

def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _content(c):
    g = 0
    for x in c:
        g = gcd(g, x)
        if g == 1:
            break
    return g


def _pmul(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = [0] * (len(a) + len(b) - 1)
    for j, y in enumerate(b):
        if y:
            for i, x in enumerate(a):
                out[i + j] += x * y
    return out


def _divexact(a, b):
    """Exact division a / b in Z[x]; raises ValueError if not exact."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    quo = [0] * (len(a) - db)
    for k in range(len(a) - db - 1, -1, -1):
        top = a[k + db]
        if top % lb:
            raise ValueError("inexact polynomial division")
        t = top // lb
        quo[k] = t
        if t:
            for i, y in enumerate(b):
                a[k + i] -= t * y
    if any(a[:db]):
        raise ValueError("inexact polynomial division")
    return quo


def _prem(a, b):
    """Pseudo-remainder of a by b."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and a:
        top = a[-1]
        shift = len(a) - 1 - db
        a = [x * lb for x in a]
        for i, y in enumerate(b):
            a[shift + i] -= top * y
        _trim(a)
    return a


def _pgcd(a, b):
    """gcd in Z[x] with positive leading coefficient."""
    ca, cb = _content(a), _content(b)
    g = gcd(ca, cb)
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    if len(a) < len(b):
        a, b = b, a
    while len(b) > 1:
        r = _prem(a, b)
        if not r:
            a = b
            break
        cr = _content(r)
        a, b = b, [x // cr for x in r]
    else:
        if b:
            # b is a nonzero constant: primitive gcd is 1
            a = [1]
    if a[-1] < 0:
        a = [-x for x in a]
    return [g * x for x in a]


# ---------------------------------------------------------------------------
# LaurentPoly
# ---------------------------------------------------------------------------

class LaurentPoly:
    """
    Integer Laurent polynomial  sum_k c_k q^k.

    Stored densely as (low, coeffs) with coeffs[0] and coeffs[-1] nonzero.
    """

    __slots__ = ("low", "coeffs", "_hash")

    def __init__(self, low=0, coeffs=()):
        c = list(coeffs)
        _trim(c)
        k = 0
        while k < len(c) and c[k] == 0:
            k += 1
        if k == len(c):
            self.low, self.coeffs = 0, ()
        else:
            self.low, self.coeffs = low + k, tuple(c[k:])
        self._hash = None

    @classmethod
    def _raw(cls, low, coeffs):
        p = cls.__new__(cls)
        p.low, p.coeffs, p._hash = low, coeffs, None
        return p

    @classmethod
    def from_dict(cls, d):
        d = {e: c for e, c in d.items() if c}
        if not d:
            return cls()
        lo, hi = min(d), max(d)
        return cls(lo, [d.get(e, 0) for e in range(lo, hi + 1)])

    @classmethod
    def monomial(cls, c, e):
        return cls._raw(e, (c,)) if c else cls()

    @property
    def coefficients(self):
        """exponent -> coefficient map (no zeros)."""
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c}

    @property
    def high(self):
        return self.low + len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_unit(self):
        return len(self.coeffs) == 1 and self.coeffs[0] in (1, -1)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.low == other.low and self.coeffs == other.coeffs
        if isinstance(other, int):
            if other == 0:
                return not self.coeffs
            return self.low == 0 and self.coeffs == (other,)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.low, self.coeffs))
        return self._hash

    def __neg__(self):
        return LaurentPoly._raw(self.low, tuple(-x for x in self.coeffs))

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.monomial(other, 0)
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        lo = min(self.low, other.low)
        hi = max(self.high, other.high)
        out = [0] * (hi - lo + 1)
        for i, x in enumerate(self.coeffs):
            out[self.low - lo + i] += x
        for i, x in enumerate(other.coeffs):
            out[other.low - lo + i] += x
        return LaurentPoly(lo, out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.monomial(other, 0)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly()
            return LaurentPoly._raw(self.low, tuple(x * other for x in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return LaurentPoly()
        if len(other.coeffs) == 1:
            y = other.coeffs[0]
            return LaurentPoly._raw(self.low + other.low, tuple(x * y for x in self.coeffs))
        if len(self.coeffs) == 1:
            x = self.coeffs[0]
            return LaurentPoly._raw(self.low + other.low, tuple(x * y for y in other.coeffs))
        return LaurentPoly._raw(self.low + other.low, tuple(_pmul(self.coeffs, other.coeffs)))

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by q**k."""
        return LaurentPoly._raw(self.low + k, self.coeffs) if self.coeffs else self

    def __call__(self, q0):
        q0 = Fraction(q0)
        if q0 == 0 and self.low < 0:
            raise PoleError("negative power of q at q = 0")
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * q0 + c
        return acc * q0 ** self.low

    def to_str(self):
        if not self.coeffs:
            return "0"
        return "+".join(
            "%d*q^%d" % (c, self.low + i) for i, c in enumerate(self.coeffs) if c)

    def __repr__(self):
        return "LaurentPoly(%s)" % self.to_str()


_ZERO = LaurentPoly()
_ONE = LaurentPoly._raw(0, (1,))


# ---------------------------------------------------------------------------
# QScalar
# ---------------------------------------------------------------------------

class QScalar:
    """
    Element num/den of Q(q) in canonical form.

    Canonical form: gcd(num, den) is a unit of Z[q, 1/q]; den has lowest
    exponent 0 and a positive constant term.  Zero is 0/1.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None):
        if isinstance(num, QScalar) and den is None:
            self.num, self.den, self._hash = num.num, num.den, None
            return
        num = _coerce_poly(num)
        if den is None:
            self.num, self.den, self._hash = num, _ONE, None
            return
        den = _coerce_poly(den)
        n, d = _canon(num, den)
        self.num, self.den, self._hash = n, d, None

    @classmethod
    def _raw(cls, num, den):
        s = cls.__new__(cls)
        s.num, s.den, s._hash = num, den, None
        return s

    @classmethod
    def from_fraction(cls, f):
        f = Fraction(f)
        return cls(LaurentPoly.monomial(f.numerator, 0), LaurentPoly.monomial(f.denominator, 0))

    # -- predicates --------------------------------------------------------

    def is_zero(self):
        return not self.num.coeffs

    def __bool__(self):
        return bool(self.num.coeffs)

    def is_laurent(self):
        return self.den is _ONE or self.den == _ONE

    def __eq__(self, other):
        if isinstance(other, QScalar):
            return self.num == other.num and self.den == other.den
        if isinstance(other, int):
            return self.den == _ONE and self.num == other
        if isinstance(other, (Fraction, LaurentPoly)):
            return self == QScalar(other) if not isinstance(other, Fraction) \
                else self == QScalar.from_fraction(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.den == _ONE and len(self.num.coeffs) <= 1 and self.num.low == 0:
                # agree with int hashing for integer constants
                self._hash = hash(self.num.coeffs[0] if self.num.coeffs else 0)
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    # -- arithmetic --------------------------------------------------------

    def __neg__(self):
        return QScalar._raw(-self.num, self.den)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.num.coeffs:
            return self
        if not self.num.coeffs:
            return other
        if self.den == other.den:
            if self.den == _ONE:
                return QScalar._raw(self.num + other.num, _ONE)
            return QScalar(self.num + other.num, self.den)
        if other.den == _ONE:
            return QScalar._raw(self.num + other.num * self.den, self.den)
        if self.den == _ONE:
            return QScalar._raw(self.num * other.den + other.num, other.den)
        return QScalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.num.coeffs or not other.num.coeffs:
            return QScalar._raw(_ZERO, _ONE)
        if self.den == _ONE and other.den == _ONE:
            return QScalar._raw(self.num * other.num, _ONE)
        # cross-cancel before multiplying
        n1, d2 = _cancel(self.num, other.den)
        n2, d1 = _cancel(other.num, self.den)
        num, den = n1 * n2, d1 * d2
        return QScalar._raw(*_fix_unit(num, den))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num.coeffs:
            raise ZeroDivisionError("QScalar division by zero")
        return QScalar._raw(*_fix_unit(self.den, self.num))

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = QScalar._raw(_ONE, _ONE)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- misc --------------------------------------------------------------

    def size(self):
        """Rough complexity measure, used for pivot selection."""
        n = len(self.num.coeffs) + len(self.den.coeffs)
        if n == 2 and abs(self.num.coeffs[0]) == 1 and self.den.coeffs[0] == 1:
            return 1
        return n + sum(abs(c).bit_length() for c in self.num.coeffs) \
            + sum(abs(c).bit_length() for c in self.den.coeffs)

    def __call__(self, q0):
        return eval_at(self, q0)

    def to_str(self):
        if self.den == _ONE:
            return self.num.to_str()
        return "(%s)/(%s)" % (self.num.to_str(), self.den.to_str())

    __str__ = to_str

    def __repr__(self):
        return "QScalar(%s)" % self.to_str()


def _coerce_poly(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.monomial(x, 0)
    raise TypeError("cannot build a LaurentPoly from %r" % (x,))


def _coerce(x):
    if isinstance(x, QScalar):
        return x
    if isinstance(x, int):
        return QScalar._raw(LaurentPoly.monomial(x, 0), _ONE)
    if isinstance(x, LaurentPoly):
        return QScalar._raw(x, _ONE)
    if isinstance(x, Fraction):
        return QScalar.from_fraction(x)
    return NotImplemented


def _split(p):
    """p = q^low * P(q) with P(0) != 0; returns (low, list P)."""
    return p.low, list(p.coeffs)


def _fix_unit(num, den):
    """Move q-powers and sign of den into num (num, den already coprime)."""
    if not num.coeffs:
        return _ZERO, _ONE
    if den.low:
        num = num.shift(-den.low)
        den = LaurentPoly._raw(0, den.coeffs)
    if den.coeffs[0] < 0:
        num, den = -num, -den
    if den.coeffs == (1,):
        den = _ONE
    return num, den


def _cancel(a, b):
    """Divide a and b by their gcd (a nonzero)."""
    if b == _ONE or not a.coeffs:
        return a, b
    if len(b.coeffs) == 1 and len(a.coeffs) == 1:
        g = gcd(a.coeffs[0], b.coeffs[0])
        return (LaurentPoly._raw(a.low, (a.coeffs[0] // g,)),
                LaurentPoly._raw(b.low, (b.coeffs[0] // g,)))
    la, pa = _split(a)
    lb, pb = _split(b)
    g = _pgcd(pa, pb)
    if len(g) == 1 and g[0] == 1:
        return a, b
    return (LaurentPoly._raw(la, tuple(_divexact(pa, g))),
            LaurentPoly._raw(lb, tuple(_divexact(pb, g))))


def _canon(num, den):
    if not den.coeffs:
        raise ZeroDivisionError("zero denominator")
    if not num.coeffs:
        return _ZERO, _ONE
    num, den = _cancel(num, den)
    return _fix_unit(num, den)


# ---------------------------------------------------------------------------
# public helpers
# ---------------------------------------------------------------------------

def qpow(k: int) -> QScalar:
    """q**k as a QScalar."""
    return QScalar._raw(LaurentPoly._raw(k, (1,)), _ONE)


q = qpow(1)


@lru_cache(maxsize=None)
def q_int(k: int) -> QScalar:
    """The q-integer [k] = (q^k - q^-k)/(q - q^-1)."""
    if k == 0:
        return QScalar(0)
    if k < 0:
        return -q_int(-k)
    # [k] = q^(k-1) + q^(k-3) + ... + q^(1-k)
    c = [0] * (2 * k - 1)
    for j in range(0, 2 * k - 1, 2):
        c[j] = 1
    return QScalar._raw(LaurentPoly(1 - k, c), _ONE)


@lru_cache(maxsize=None)
def q_factorial(k: int) -> QScalar:
    """[k]! = [1][2]...[k]."""
    if k < 0:
        raise ValueError("q_factorial of a negative integer")
    out = QScalar(1)
    for j in range(1, k + 1):
        out = out * q_int(j)
    return out


def normalize(s) -> QScalar:
    """Canonical reduced form; a no-op on already-built QScalars."""
    if isinstance(s, tuple):
        num, den = s
        return QScalar(_coerce_poly(num) if not isinstance(num, LaurentPoly) else num,
                       _coerce_poly(den) if not isinstance(den, LaurentPoly) else den)
    return QScalar(s) if not isinstance(s, QScalar) else QScalar(s.num, s.den)


def eval_at(s, q0) -> Fraction:
    """Exact value of s at a rational point q0 != 0."""
    q0 = Fraction(q0)
    if q0 == 0:
        raise PoleError("q = 0 is not allowed (q^-1 undefined)")
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    s = _coerce(s)
    d = s.den(q0)
    if d == 0:
        raise PoleError("pole of %s at q = %s" % (s.to_str(), q0))
    return s.num(q0) / d


_TERM = re.compile(r"^\s*(-?\d+)\*q\^(-?\d+)\s*$")


def _parse_poly(text):
    text = text.strip()
    if text == "0":
        return LaurentPoly()
    d = {}
    for part in text.split("+"):
        m = _TERM.match(part)
        if not m:
            raise ValueError("bad Laurent term %r" % part)
        c, e = int(m.group(1)), int(m.group(2))
        d[e] = d.get(e, 0) + c
    return LaurentPoly.from_dict(d)


def parse_qscalar(text: str) -> QScalar:
    """Inverse of QScalar.to_str (accepts only the canonical text form)."""
    text = text.strip()
    if text.startswith("("):
        m = re.match(r"^\((.*)\)/\((.*)\)$", text)
        if not m:
            raise ValueError("bad QScalar text %r" % text)
        return QScalar(_parse_poly(m.group(1)), _parse_poly(m.group(2)))
    return QScalar(_parse_poly(text))
