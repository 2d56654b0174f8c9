"""
The quantum supergroup U_q(gl(m|n)).

Generators K_a^{+-1}, E_{a,a+1}, E_{a+1,a}; words are tuples of letters

    ("E", a) = E_{a,a+1},   ("F", a) = E_{a+1,a},   ("K", a, s) = K_a^s.

Normal form.  A word is first straightened into a sum of
(F-word) K^k (E-word) using only the K-conjugation and [E_a, F_b}
relations.  The F- and E-words are then mapped into a quantum shuffle
algebra, where the Serre-type relations become linear dependencies, and
expanded in a basis of ordered monomials of root vectors (PBW basis).
The output is unique, so equality in U_q is decided by comparing normal
forms.  An independent rewrite system on root-vector letters (pair rules
plus a step cap) is provided for cross-checking.

Modules: ``QWeightModule`` stores the matrices of E_{a,a+1}, E_{a+1,a};
K_a acts on weight mu by q_a^{mu_a}.  Irreducible modules are built by the
lowering closure (direct route) or as quotients of quantum Kac modules.
"""

from __future__ import annotations

import os
from functools import lru_cache
from itertools import combinations

from .glmn import AlgebraSpec, WeightModule, check_dominant, _num
from .highest_weight import RadicalQuotient, lowering_closure
from .linalg import Echelon
from .qfield import QScalar, qpow, q_int
from .superalg import SuperOperator, tensor

ONE = QScalar(1)
ZERO = QScalar(0)


class PBWError(ArithmeticError):
    """Ordered root-vector monomials failed to span or were dependent."""


class RewriteLimitError(RuntimeError):
    """The rewrite system exceeded its step cap."""


def _q(x):
    return x if isinstance(x, QScalar) else QScalar(x)


def qsign(spec, a):
    """q_a = q^{qsign(a)}."""
    return -1 if spec.parity(a) else 1


def q_a(spec, a, e=1):
    return qpow(qsign(spec, a) * e)


# ---------------------------------------------------------------------------
# letters and free-algebra elements
# ---------------------------------------------------------------------------

def letter_parity(spec, x):
    return 1 if x[0] != "K" and x[1] == spec.m else 0


def word_parity(spec, w):
    return sum(letter_parity(spec, x) for x in w) & 1


def letter_weight(spec, x):
    w = [0] * spec.size
    if x[0] == "E":
        w[x[1] - 1] += 1
        w[x[1]] -= 1
    elif x[0] == "F":
        w[x[1] - 1] -= 1
        w[x[1]] += 1
    return w


def word_weight(spec, w):
    out = [0] * spec.size
    for x in w:
        if x[0] == "E":
            out[x[1] - 1] += 1
            out[x[1]] -= 1
        elif x[0] == "F":
            out[x[1] - 1] -= 1
            out[x[1]] += 1
    return tuple(out)


def k_pairing(spec, kexp, wt):
    """Exponent p with K^kexp X K^-kexp = q^p X for X of weight wt."""
    return sum(kexp[a] * qsign(spec, a + 1) * wt[a] for a in range(spec.size))


class Element:
    """Linear combination of words over Q(q) (no relations applied)."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec, terms=None):
        self.spec = spec
        self.terms = {}
        if terms:
            for w, c in terms.items():
                if c:
                    self.terms[tuple(w)] = _q(c)

    @classmethod
    def word(cls, spec, *letters, coeff=1):
        return cls(spec, {tuple(letters): coeff})

    @classmethod
    def one(cls, spec):
        return cls(spec, {(): 1})

    @classmethod
    def zero(cls, spec):
        return cls(spec)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, Element):
            other = Element(self.spec, {(): other}) if other else Element(self.spec)
        out = dict(self.terms)
        for w, c in other.terms.items():
            y = out.get(w)
            y = c if y is None else y + c
            if y:
                out[w] = y
            else:
                out.pop(w, None)
        e = Element(self.spec)
        e.terms = out
        return e

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, Element):
            other = Element(self.spec, {(): other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = _q(c)
        e = Element(self.spec)
        if c:
            e.terms = {w: x * c for w, x in self.terms.items()}
        return e

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                y = out.get(w)
                y = c1 * c2 if y is None else y + c1 * c2
                if y:
                    out[w] = y
                else:
                    out.pop(w, None)
        e = Element(self.spec)
        e.terms = out
        return e

    def __rmul__(self, c):
        return self.scale(c)

    def __pow__(self, k):
        out = Element.one(self.spec)
        for _ in range(k):
            out = out * self
        return out

    def parity(self):
        ps = {word_parity(self.spec, w) for w in self.terms}
        if len(ps) > 1:
            raise ValueError("inhomogeneous element")
        return ps.pop() if ps else 0

    def weight(self):
        ws = {word_weight(self.spec, w) for w in self.terms}
        if len(ws) > 1:
            raise ValueError("element is not a weight vector")
        return ws.pop() if ws else None

    def __eq__(self, other):
        return isinstance(other, Element) and self.terms == other.terms

    def __repr__(self):
        return "Element(%d terms)" % len(self.terms)


def gen_e(spec, a):
    return Element.word(spec, ("E", a))


def gen_f(spec, a):
    return Element.word(spec, ("F", a))


def gen_k(spec, a, s=1):
    return Element.word(spec, ("K", a, s))


def k_monomial(spec, kexp):
    """K_1^{k_1} ... K_N^{k_N} as an element."""
    w = []
    for a, e in enumerate(kexp, start=1):
        s = 1 if e > 0 else -1
        w.extend([("K", a, s)] * abs(e))
    return Element.word(spec, *w)


def graded_commutator(x: Element, y: Element) -> Element:
    s = -1 if (x.parity() and y.parity()) else 1
    return x * y - (y * x).scale(s)


@lru_cache(maxsize=None)
def _root_vector(m, n, a, b, hat, c):
    spec = AlgebraSpec(m, n)
    if abs(a - b) == 1:
        return gen_e(spec, a) if a < b else gen_f(spec, b)
    lo, hi = min(a, b), max(a, b)
    c = lo + 1 if c is None else c
    if not lo < c < hi:
        raise ValueError("intermediate index must lie strictly between")
    x = _root_vector(m, n, a, c, hat, None)
    y = _root_vector(m, n, c, b, hat, None)
    if a < b:
        coef = q_a(spec, c, 1 if hat else -1)
    else:
        coef = q_a(spec, c, -1 if hat else 1)
    return x * y - (y * x).scale(coef)


def root_vector(spec, a, b, hat=False, c=None) -> Element:
    """
    E_{ab} (a != b) by the recursion through an intermediate index c
    (default: the smaller index + 1):
        E_ab = E_ac E_cb - q_c^{-1} E_cb E_ac   (a < b)
        E_ba = E_bc E_ca - q_c   E_ca E_bc      (a < b)
    ``hat`` swaps q_c and q_c^{-1}.
    """
    if a == b:
        raise ValueError("root vectors need a != b")
    return _root_vector(spec.m, spec.n, a, b, bool(hat), c)


# ---------------------------------------------------------------------------
# tensor square and Hopf structure
# ---------------------------------------------------------------------------

class Tensor2:
    """Element of U (x) U: {(word1, word2): coeff}; product with Koszul signs."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec, terms=None):
        self.spec = spec
        self.terms = {}
        if terms:
            for k, c in terms.items():
                if c:
                    self.terms[k] = _q(c)

    @classmethod
    def pure(cls, x: Element, y: Element):
        out = {}
        for w1, c1 in x.terms.items():
            for w2, c2 in y.terms.items():
                out[(w1, w2)] = c1 * c2
        return cls(x.spec, out)

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            y = out.get(k)
            y = c if y is None else y + c
            if y:
                out[k] = y
            else:
                out.pop(k, None)
        t = Tensor2(self.spec)
        t.terms = out
        return t

    def scale(self, c):
        c = _q(c)
        t = Tensor2(self.spec)
        if c:
            t.terms = {k: x * c for k, x in self.terms.items()}
        return t

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Tensor2):
            return self.scale(other)
        spec = self.spec
        out = {}
        for (a1, a2), c in self.terms.items():
            p2 = word_parity(spec, a2)
            for (b1, b2), d in other.terms.items():
                s = -1 if (p2 and word_parity(spec, b1)) else 1
                k = (a1 + b1, a2 + b2)
                y = c * d if s > 0 else -(c * d)
                z = out.get(k)
                z = y if z is None else z + y
                if z:
                    out[k] = z
                else:
                    out.pop(k, None)
        t = Tensor2(spec)
        t.terms = out
        return t

    def flip(self):
        """Graded flip a (x) b -> (-1)^{[a][b]} b (x) a."""
        spec = self.spec
        out = {}
        for (a, b), c in self.terms.items():
            s = -1 if (word_parity(spec, a) and word_parity(spec, b)) else 1
            out[(b, a)] = c if s > 0 else -c
        return Tensor2(spec, out)

    def is_zero(self):
        return not self.terms


def _coproduct_letter(spec, x):
    one = Element.one(spec)
    if x[0] == "K":
        k = Element.word(spec, x)
        return Tensor2.pure(k, k)
    a = x[1]
    g = Element.word(spec, x)
    if x[0] == "E":
        kk = Element.word(spec, ("K", a, 1), ("K", a + 1, -1))
        return Tensor2.pure(g, kk) + Tensor2.pure(one, g)
    kk = Element.word(spec, ("K", a, -1), ("K", a + 1, 1))
    return Tensor2.pure(g, one) + Tensor2.pure(kk, g)


def coproduct(x: Element) -> Tensor2:
    """Delta, extended multiplicatively from the generators."""
    spec = x.spec
    total = Tensor2(spec)
    for w, c in x.terms.items():
        t = Tensor2(spec, {((), ()): c})
        for letter in w:
            t = t * _coproduct_letter(spec, letter)
        total = total + t
    return total


def opposite_coproduct(x: Element) -> Tensor2:
    return coproduct(x).flip()


def counit(x: Element) -> QScalar:
    total = ZERO
    for w, c in x.terms.items():
        if all(l[0] == "K" for l in w):
            total = total + c
    return total


def _antipode_letter(spec, x, inverse=False):
    if x[0] == "K":
        return Element.word(spec, ("K", x[1], -x[2]))
    a = x[1]
    g = Element.word(spec, x)
    if x[0] == "E":
        kk = Element.word(spec, ("K", a, -1), ("K", a + 1, 1))
        return -(kk * g) if inverse else -(g * kk)
    kk = Element.word(spec, ("K", a, 1), ("K", a + 1, -1))
    return -(g * kk) if inverse else -(kk * g)


def antipode(x: Element, inverse=False) -> Element:
    """S (or S^{-1}): anti-multiplicative with S(xy) = (-1)^{[x][y]} S(y) S(x)."""
    spec = x.spec
    total = Element(spec)
    for w, c in x.terms.items():
        ps = [letter_parity(spec, l) for l in w]
        sign = 0
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                sign ^= ps[i] & ps[j]
        t = Element(spec, {(): -c if sign else c})
        for letter in reversed(w):
            t = t * _antipode_letter(spec, letter, inverse)
        total = total + t
    return total


def adjoint(x: Element, y: Element) -> Element:
    """Ad_x(y) = sum (-1)^{[x_(2)][y]} x_(1) y S(x_(2))."""
    spec = x.spec
    py = y.parity()
    out = Element(spec)
    for (w1, w2), c in coproduct(x).terms.items():
        s = -1 if (py and word_parity(spec, w2)) else 1
        x1 = Element(spec, {w1: c if s > 0 else -c})
        out = out + x1 * y * antipode(Element(spec, {w2: 1}))
    return out


def tensor_X(spec, a) -> Element:
    """X_a = -hat E_{a,N} K_a^{-1} K_N."""
    N = spec.size
    return -(root_vector(spec, a, N, hat=True) * Element.word(spec, ("K", a, -1), ("K", N, 1)))


def tensor_Y(spec, a) -> Element:
    """Y_a = E_{N,a}."""
    return root_vector(spec, spec.size, a)


def invariant_C(spec, sign="odd-index") -> Tensor2:
    """
    C = sum_a s_a Y_a (x) S^{-1}(X_a).  ``sign`` selects s_a:
    "odd-index": (-1)^{[a]+1};  "constant": -1.
    """
    out = Tensor2(spec)
    for a in range(1, spec.size):
        if sign == "odd-index":
            s = 1 if spec.parity(a) else -1
        elif sign == "constant":
            s = -1
        else:
            raise ValueError("unknown sign rule %r" % sign)
        out = out + Tensor2.pure(tensor_Y(spec, a), antipode(tensor_X(spec, a), inverse=True)).scale(s)
    return out


def central_element(spec) -> Element:
    """prod_a K_a^{(-1)^{[a]}}."""
    return Element.word(spec, *[("K", a, qsign(spec, a)) for a in spec.indices])


# ---------------------------------------------------------------------------
# PBW orders and the shuffle embedding
# ---------------------------------------------------------------------------

def lowering_order(spec):
    """Lowering roots (b, a), b > a: odd ones first by (-a, b), then even ones by (a, b)."""
    m, N = spec.m, spec.size
    odd = sorted(((mu, i) for mu in range(m + 1, N + 1) for i in range(1, m + 1)),
                 key=lambda r: (-r[1], r[0]))
    even = sorted(((b, a) for a in range(1, N + 1) for b in range(a + 1, N + 1)
                   if spec.parity(a) == spec.parity(b)), key=lambda r: (r[1], r[0]))
    return odd + even


def raising_order(spec):
    """Raising roots (a, b), a < b: even ones first by (a, b), then odd by (a, -b)."""
    m, N = spec.m, spec.size
    even = sorted(((a, b) for a in range(1, N + 1) for b in range(a + 1, N + 1)
                   if spec.parity(a) == spec.parity(b)))
    odd = sorted(((i, mu) for i in range(1, m + 1) for mu in range(m + 1, N + 1)),
                 key=lambda r: (r[0], -r[1]))
    return even + odd


def simple_form(spec, i, j):
    """(alpha_i, alpha_j) for the invariant form (eps_a, eps_b) = (-1)^{[a]} delta_ab."""
    def f(a, b):
        return qsign(spec, a) if a == b else 0
    return f(i, j) - f(i, j + 1) - f(i + 1, j) + f(i + 1, j + 1)


class Shuffle:
    """Quantum shuffle algebra on letters 1..N-1 with braiding chi(i, j)."""

    def __init__(self, chi):
        self.chi = chi
        self._phi = {(): {(): ONE}}
        self._sh = {}

    def insert(self, vec, b):
        """vec * b in the shuffle algebra (b a single letter)."""
        out = {}
        chi = self.chi
        for u, c in vec.items():
            coef = c
            k = len(u)
            # b at position t: coefficient prod_{s >= t} chi(u_s, b)
            for t in range(k, -1, -1):
                w = u[:t] + (b,) + u[t:]
                y = out.get(w)
                y = coef if y is None else y + coef
                if y:
                    out[w] = y
                else:
                    out.pop(w, None)
                if t:
                    coef = coef * chi(u[t - 1], b)
        return out

    def phi(self, word):
        """Image of a word of generators."""
        word = tuple(word)
        v = self._phi.get(word)
        if v is None:
            v = self.insert(self.phi(word[:-1]), word[-1])
            self._phi[word] = v
        return v

    def phi_element(self, terms):
        out = {}
        for w, c in terms.items():
            for u, x in self.phi(w).items():
                y = out.get(u)
                y = c * x if y is None else y + c * x
                if y:
                    out[u] = y
                else:
                    out.pop(u, None)
        return out

    def sh_words(self, u, v):
        key = (u, v)
        r = self._sh.get(key)
        if r is not None:
            return r
        if not u:
            r = {v: ONE}
        elif not v:
            r = {u: ONE}
        else:
            a, b = u[-1], v[-1]
            f = ONE
            for y in v:
                f = f * self.chi(a, y)
            r = {}
            for w, c in self.sh_words(u[:-1], v).items():
                r[w + (a,)] = c * f
            for w, c in self.sh_words(u, v[:-1]).items():
                k = w + (b,)
                y = r.get(k)
                y = c if y is None else y + c
                if y:
                    r[k] = y
                else:
                    r.pop(k, None)
        self._sh[key] = r
        return r

    def product(self, U, V):
        out = {}
        for u, c in U.items():
            for v, d in V.items():
                for w, x in self.sh_words(u, v).items():
                    y = out.get(w)
                    y = c * d * x if y is None else y + c * d * x
                    if y:
                        out[w] = y
                    else:
                        out.pop(w, None)
        return out


def braiding(spec, side):
    """chi(i, j) = (-1)^{p_i p_j} q^{-+(alpha_i, alpha_j)} for the raising / lowering side."""
    sgn = -1 if side == "upper" else 1

    def chi(i, j):
        s = -1 if (spec.root_parity(i) and spec.root_parity(j)) else 1
        v = qpow(sgn * simple_form(spec, i, j))
        return v if s > 0 else -v
    return chi


class PBWSide:
    """Ordered root-vector monomials for U^+ or U^- with shuffle coordinates."""

    def __init__(self, spec, side):
        self.spec = spec
        self.side = side
        self.roots = raising_order(spec) if side == "upper" else lowering_order(spec)
        self.pos = {r: t for t, r in enumerate(self.roots)}
        self.sh = Shuffle(braiding(spec, side))
        self.odd = [spec.parity(a) != spec.parity(b) for a, b in self.roots]
        self.counts = []
        self.phi_root = []
        self.expansion = []
        for a, b in self.roots:
            lo, hi = min(a, b), max(a, b)
            cnt = [0] * (spec.size - 1)
            for i in range(lo, hi):
                cnt[i - 1] = 1
            self.counts.append(tuple(cnt))
            el = root_vector(spec, a, b)
            exp = {tuple(l[1] for l in w): c for w, c in el.terms.items()}
            self.expansion.append(exp)
            self.phi_root.append(self.sh.phi_element(exp))
        self._bases = {}
        self._coords = {}

    def monomials(self, counts):
        counts = tuple(counts)
        out = []
        R = len(self.roots)

        def rec(t, left, acc):
            if t == R:
                if not any(left):
                    out.append(tuple(acc))
                return
            c = self.counts[t]
            cap = min((left[i] // c[i] for i in range(len(c)) if c[i]), default=0)
            if self.odd[t]:
                cap = min(cap, 1)
            for e in range(cap, -1, -1):
                nl = tuple(left[i] - e * c[i] for i in range(len(c)))
                rec(t + 1, nl, acc + [e])
        rec(0, counts, [])
        return out

    def phi_monomial(self, mono):
        vec = {(): ONE}
        for t, e in enumerate(mono):
            for _ in range(e):
                vec = self.sh.product(vec, self.phi_root[t])
        return vec

    def basis(self, counts):
        counts = tuple(counts)
        b = self._bases.get(counts)
        if b is None:
            monos = self.monomials(counts)
            ech = Echelon()
            for mo in monos:
                if ech.add(self.phi_monomial(mo)) is None:
                    raise PBWError("ordered monomials dependent at weight %s" % (counts,))
            b = (monos, ech)
            self._bases[counts] = b
        return b

    def coords_word(self, word):
        """PBW coordinates {monomial: coeff} of a word of simple generators."""
        word = tuple(word)
        r = self._coords.get(word)
        if r is not None:
            return r
        if not word:
            r = {(0,) * len(self.roots): ONE}
        else:
            cnt = [0] * (self.spec.size - 1)
            for i in word:
                cnt[i - 1] += 1
            monos, ech = self.basis(cnt)
            vec = self.sh.phi(word)
            c = ech.coords(vec) if vec else {}
            if c is None:
                raise PBWError("word %s outside the span of the PBW monomials" % (word,))
            r = {monos[k]: x for k, x in c.items()}
        self._coords[word] = r
        return r

    def monomial_element(self, mono):
        spec = self.spec
        letter = "E" if self.side == "upper" else "F"
        out = Element.one(spec)
        for t, e in enumerate(mono):
            if e:
                rv = Element(spec, {tuple((letter, i) for i in w): c for w, c in self.expansion[t].items()})
                out = out * rv ** e
        return out


# ---------------------------------------------------------------------------
# normal form
# ---------------------------------------------------------------------------

class NormalForm:
    """sum c * (lowering monomial) K^k (raising monomial), keyed by (low, k, up)."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec, terms=None):
        self.spec = spec
        self.terms = {k: _q(c) for k, c in (terms or {}).items() if c}

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, NormalForm) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            y = out.get(k)
            y = c if y is None else y + c
            if y:
                out[k] = y
            else:
                out.pop(k, None)
        r = NormalForm(self.spec)
        r.terms = out
        return r

    def scale(self, c):
        c = _q(c)
        return NormalForm(self.spec, {k: x * c for k, x in self.terms.items()} if c else {})

    def __sub__(self, other):
        return self + other.scale(-1)

    def to_text(self):
        if not self.terms:
            return "0"
        eng = engine(self.spec)
        lines = []
        for (low, k, up), c in sorted(self.terms.items()):
            parts = []
            lo = " ".join("F[%d,%d]^%d" % (eng.lower.roots[t] + (e,)) for t, e in enumerate(low) if e)
            ks = " ".join("K%d^%d" % (a + 1, e) for a, e in enumerate(k) if e)
            hi = " ".join("E[%d,%d]^%d" % (eng.upper.roots[t] + (e,)) for t, e in enumerate(up) if e)
            parts = [lo or "1", ks or "1", hi or "1"]
            lines.append("(%s) %s" % (c.to_str(), " · ".join(parts)))
        return "\n".join(lines)

    def to_element(self) -> Element:
        eng = engine(self.spec)
        out = Element(self.spec)
        for (low, k, up), c in self.terms.items():
            out = out + (eng.lower.monomial_element(low) * k_monomial(self.spec, k)
                         * eng.upper.monomial_element(up)).scale(c)
        return out

    def __repr__(self):
        return "NormalForm(%d terms)" % len(self.terms)


class PBWEngine:
    """Normal forms in U_q(gl(m|n)) for a fixed (m, n)."""

    def __init__(self, spec):
        self.spec = spec
        self.N = spec.size
        self.upper = PBWSide(spec, "upper")
        self.lower = PBWSide(spec, "lower")
        self._push = {}

    # -- straightening -------------------------------------------------------
    def _h_terms(self, a):
        """[E_a, F_a} = (K_a K_{a+1}^{-1} - K_a^{-1} K_{a+1}) / (q_a - q_a^{-1})."""
        spec = self.spec
        d = (q_a(spec, a) - q_a(spec, a, -1)).inverse()
        k1 = [0] * self.N
        k1[a - 1], k1[a] = 1, -1
        k2 = [0] * self.N
        k2[a - 1], k2[a] = -1, 1
        return [(d, tuple(k1)), (-d, tuple(k2))]

    def _push_f(self, eword, a):
        """
        E-word * F_a = sum c * [F_a] K^shift E-word', returned as
        (c, has_f, shift, eword') with has_f terms still owing the factor
        q^{pairing(k, wt F_a)} for the K-part they pass.
        """
        key = (eword, a)
        r = self._push.get(key)
        if r is not None:
            return r
        spec = self.spec
        if not eword:
            r = [(ONE, True, (0,) * self.N, ())]
        else:
            b = eword[-1]
            rest = eword[:-1]
            s = -1 if (a == spec.m and b == spec.m) else 1
            r = []
            for c, hf, sh, ew in self._push_f(rest, a):
                r.append((c if s > 0 else -c, hf, sh, ew + (b,)))
            if a == b:
                wt = word_weight(spec, tuple(("E", i) for i in rest))
                for d, kap in self._h_terms(a):
                    r.append((d * qpow(-k_pairing(spec, kap, wt)), False, kap, rest))
        self._push[key] = r
        return r

    def straighten(self, x: Element):
        """{(F-word, K exponents, E-word): coeff} (words of simple indices)."""
        spec = self.spec
        N = self.N
        out = {}
        for w, c in x.terms.items():
            terms = {((), (0,) * N, ()): c}
            for letter in w:
                new = {}

                def add(k, v):
                    y = new.get(k)
                    y = v if y is None else y + v
                    if y:
                        new[k] = y
                    else:
                        new.pop(k, None)
                if letter[0] == "E":
                    for (fw, k, ew), v in terms.items():
                        add((fw, k, ew + (letter[1],)), v)
                elif letter[0] == "K":
                    a, s = letter[1], letter[2]
                    for (fw, k, ew), v in terms.items():
                        wt = word_weight(spec, tuple(("E", i) for i in ew))
                        kk = [0] * N
                        kk[a - 1] = s
                        f = qpow(-k_pairing(spec, kk, wt))
                        k2 = list(k)
                        k2[a - 1] += s
                        add((fw, tuple(k2), ew), v * f)
                else:
                    a = letter[1]
                    wtf = letter_weight(spec, letter)
                    for (fw, k, ew), v in terms.items():
                        for c2, hf, sh, ew2 in self._push_f(ew, a):
                            k2 = tuple(k[i] + sh[i] for i in range(N))
                            if hf:
                                f = qpow(k_pairing(spec, k, wtf))
                                add((fw + (a,), k2, ew2), v * c2 * f)
                            else:
                                add((fw, k2, ew2), v * c2)
                terms = new
            for key, v in terms.items():
                y = out.get(key)
                y = v if y is None else y + v
                if y:
                    out[key] = y
                else:
                    out.pop(key, None)
        return out

    def normal_form(self, x: Element) -> NormalForm:
        out = {}
        for (fw, k, ew), c in self.straighten(x).items():
            lo = self.lower.coords_word(fw)
            if not lo:
                continue
            hi = self.upper.coords_word(ew)
            for ml, a in lo.items():
                for mu, b in hi.items():
                    key = (ml, k, mu)
                    y = out.get(key)
                    v = c * a * b
                    y = v if y is None else y + v
                    if y:
                        out[key] = y
                    else:
                        out.pop(key, None)
        r = NormalForm(self.spec)
        r.terms = out
        return r

    def normal_form_tensor(self, t: Tensor2):
        """Normal form of an element of U (x) U: {(key1, key2): coeff}."""
        out = {}
        spec = self.spec
        cache = {}

        def nf(w):
            r = cache.get(w)
            if r is None:
                r = self.normal_form(Element(spec, {w: 1})).terms
                cache[w] = r
            return r
        for (w1, w2), c in t.terms.items():
            n1 = nf(w1)
            if not n1:
                continue
            n2 = nf(w2)
            for k1, a in n1.items():
                for k2, b in n2.items():
                    key = (k1, k2)
                    v = c * a * b
                    y = out.get(key)
                    y = v if y is None else y + v
                    if y:
                        out[key] = y
                    else:
                        out.pop(key, None)
        return out


@lru_cache(maxsize=None)
def _engine(m, n):
    return PBWEngine(AlgebraSpec(m, n))


def engine(spec) -> PBWEngine:
    return _engine(spec.m, spec.n)


def normal_form(x: Element) -> NormalForm:
    return engine(x.spec).normal_form(x)


def equal_in_uq(x: Element, y: Element) -> bool:
    return normal_form(x - y).is_zero()


# ---------------------------------------------------------------------------
# rewrite system on root-vector letters
# ---------------------------------------------------------------------------

def rewrite_cap():
    return int(os.environ.get("QBBW_REWRITE_STEPS", "200000"))


class RewriteSystem:
    """
    Words over root-vector letters ("L", t), ("K", exps), ("U", t), with a
    rule for every adjacent pair that is out of PBW order.  Pair rules are
    obtained once from the normal form of the two-letter product; the
    reduction of longer words is then pure rewriting, so agreement with
    ``normal_form`` on long words is a genuine consistency check.
    """

    def __init__(self, spec, cap=None):
        self.spec = spec
        self.eng = engine(spec)
        self.cap = cap              # None: read QBBW_REWRITE_STEPS at each reduction
        self._rules = {}
        self.steps = 0
        N = spec.size
        self._zero_k = (0,) * N

    # letters
    def _letter_element(self, x):
        spec = self.spec
        if x[0] == "K":
            return k_monomial(spec, x[1])
        side = self.eng.lower if x[0] == "L" else self.eng.upper
        mono = [0] * len(side.roots)
        mono[x[1]] = 1
        return side.monomial_element(tuple(mono))

    def _odd(self, x):
        if x[0] == "K":
            return False
        side = self.eng.lower if x[0] == "L" else self.eng.upper
        return side.odd[x[1]]

    def from_chevalley(self, w):
        out = []
        lp, up = self.eng.lower.pos, self.eng.upper.pos
        N = self.spec.size
        for x in w:
            if x[0] == "E":
                out.append(("U", up[(x[1], x[1] + 1)]))
            elif x[0] == "F":
                out.append(("L", lp[(x[1] + 1, x[1])]))
            else:
                k = [0] * N
                k[x[1] - 1] = x[2]
                out.append(("K", tuple(k)))
        return tuple(out)

    def _cls(self, x):
        return {"L": 0, "K": 1, "U": 2}[x[0]]

    def _out_of_order(self, x, y):
        cx, cy = self._cls(x), self._cls(y)
        if cx != cy:
            return cx > cy
        if x[0] == "K":
            return True
        if x[1] != y[1]:
            return x[1] > y[1]
        return self._odd(x)

    def _words_of(self, nf: NormalForm):
        out = []
        for (low, k, up), c in nf.terms.items():
            w = []
            for t, e in enumerate(low):
                w.extend([("L", t)] * e)
            if any(k):
                w.append(("K", k))
            for t, e in enumerate(up):
                w.extend([("U", t)] * e)
            out.append((tuple(w), c))
        return out

    def rule(self, x, y):
        key = (x, y)
        r = self._rules.get(key)
        if r is None:
            if x[0] == "K" and y[0] == "K":
                k = tuple(a + b for a, b in zip(x[1], y[1]))
                r = [(((("K", k),) if any(k) else ()), ONE)]
            else:
                prod = self._letter_element(x) * self._letter_element(y)
                r = self._words_of(self.eng.normal_form(prod))
            self._rules[key] = r
        return r

    def reduce(self, terms, strategy="leftmost"):
        """Reduce {word: coeff} over root-vector letters to normal words."""
        todo = dict(terms)
        done = {}
        steps = 0
        cap = self.cap if self.cap is not None else rewrite_cap()
        while todo:
            w, c = todo.popitem()
            idx = None
            rng = range(len(w) - 1) if strategy == "leftmost" else range(len(w) - 2, -1, -1)
            for i in rng:
                if self._out_of_order(w[i], w[i + 1]):
                    idx = i
                    break
            if idx is None:
                y = done.get(w)
                y = c if y is None else y + c
                if y:
                    done[w] = y
                else:
                    done.pop(w, None)
                continue
            steps += 1
            if steps > cap:
                self.steps += steps
                raise RewriteLimitError("rewrite exceeded %d steps (critical pair near %s)"
                                        % (cap, (w[idx], w[idx + 1])))
            for rw, d in self.rule(w[idx], w[idx + 1]):
                nw = w[:idx] + rw + w[idx + 2:]
                y = todo.get(nw)
                y = c * d if y is None else y + c * d
                if y:
                    todo[nw] = y
                else:
                    todo.pop(nw, None)
        self.steps += steps
        return done

    def normal_form(self, x: Element, strategy="leftmost") -> NormalForm:
        terms = {}
        for w, c in x.terms.items():
            lw = self.from_chevalley(w)
            terms[lw] = terms.get(lw, ZERO) + c
        red = self.reduce({w: c for w, c in terms.items() if c}, strategy)
        out = {}
        nl, nu = len(self.eng.lower.roots), len(self.eng.upper.roots)
        for w, c in red.items():
            low = [0] * nl
            up = [0] * nu
            k = self._zero_k
            for x_ in w:
                if x_[0] == "L":
                    low[x_[1]] += 1
                elif x_[0] == "U":
                    up[x_[1]] += 1
                else:
                    k = x_[1]
            key = (tuple(low), k, tuple(up))
            y = out.get(key)
            y = c if y is None else y + c
            if y:
                out[key] = y
            else:
                out.pop(key, None)
        r = NormalForm(self.spec)
        r.terms = out
        return r


@lru_cache(maxsize=None)
def _rewriter(m, n):
    return RewriteSystem(AlgebraSpec(m, n))


def rewriter(spec) -> RewriteSystem:
    return _rewriter(spec.m, spec.n)


# ---------------------------------------------------------------------------
# defining relations and identities
# ---------------------------------------------------------------------------

def defining_relations(spec):
    """List of (name, element) that vanish in U_q(gl(m|n))."""
    N = spec.size
    m = spec.m
    rels = []
    I1 = range(1, N)
    for a in spec.indices:
        for b in I1:
            for x in (("E", b), ("F", b)):
                wt = letter_weight(spec, x)
                lhs = Element.word(spec, ("K", a, 1), x, ("K", a, -1))
                rels.append(("K%d %s%d K%d^-1" % (a, x[0], b, a),
                             lhs - Element.word(spec, x).scale(q_a(spec, a, wt[a - 1]))))
        rels.append(("K%d K%d^-1" % (a, a), Element.word(spec, ("K", a, 1), ("K", a, -1)) - 1))
    for a in I1:
        for b in I1:
            lhs = graded_commutator(gen_e(spec, a), gen_f(spec, b))
            if a == b:
                d = (q_a(spec, a) - q_a(spec, a, -1)).inverse()
                lhs = lhs - (Element.word(spec, ("K", a, 1), ("K", a + 1, -1))
                             - Element.word(spec, ("K", a, -1), ("K", a + 1, 1))).scale(d)
            rels.append(("[E%d,F%d}" % (a, b), lhs))
    rels.append(("E%d^2" % m, gen_e(spec, m) ** 2))
    rels.append(("F%d^2" % m, gen_f(spec, m) ** 2))
    for a in I1:
        for b in I1:
            if abs(a - b) >= 2 and a < b:
                rels.append(("E%dE%d-E%dE%d" % (a, b, b, a), gen_e(spec, a) * gen_e(spec, b) - gen_e(spec, b) * gen_e(spec, a)))
                rels.append(("F%dF%d-F%dF%d" % (a, b, b, a), gen_f(spec, a) * gen_f(spec, b) - gen_f(spec, b) * gen_f(spec, a)))
    two = q_int(2)
    for a in I1:
        if a == m:
            continue
        for b in (a - 1, a + 1):
            if b in I1:
                for g, tag in ((gen_e, "+"), (gen_f, "-")):
                    x, y = g(spec, a), g(spec, b)
                    rels.append(("Serre%s(%d,%d)" % (tag, a, b), x * x * y - (x * y * x).scale(two) + y * x * x))
    if m >= 2 and spec.n >= 2:
        up = root_vector(spec, m - 1, m + 2)
        lo = root_vector(spec, m + 2, m - 1)
        rels.append(("{E[%d,%d],E%d}" % (m - 1, m + 2, m), up * gen_e(spec, m) + gen_e(spec, m) * up))
        rels.append(("{F[%d,%d],F%d}" % (m + 2, m - 1, m), lo * gen_f(spec, m) + gen_f(spec, m) * lo))
    return rels


def lemma_identities(spec, convention="corrected"):
    """
    Commutation properties of the root vectors, as a list of (name, lhs,
    rhs) with indices ranging over all applicable values.

    convention="printed" keeps two misprinted lines: the K-factor K_b
    (instead of K_a) for [E_ac, E_cb} with b > a > c, and the index range
    a > b > c (instead of c strictly between a and b) for the vanishing
    [E_ca, E_cb}, [E_ac, E_bc}.
    """
    printed = convention == "printed"
    if convention not in ("corrected", "printed"):
        raise ValueError("unknown convention %r" % convention)
    N = spec.size
    I = list(spec.indices)
    out = []
    E = lambda a, b: root_vector(spec, a, b)  # noqa: E731

    def K(*pairs):
        return Element.word(spec, *[("K", a, s) for a, s in pairs])

    def br(x, y):
        return graded_commutator(x, y)

    for a in I:
        for b in I:
            if a >= b:
                continue
            for c in range(1, N):
                if a not in (c, c + 1) and b not in (c, c + 1):
                    out.append(("[E%d%d,E%d%d}=0" % (a, b, c, c + 1), br(E(a, b), E(c, c + 1)), Element(spec)))
                    out.append(("[E%d%d,E%d%d}=0" % (b, a, c + 1, c), br(E(b, a), E(c + 1, c)), Element(spec)))
                if (a, b) == (c, c + 1):
                    continue
                sgn = -1 if c == spec.m else 1
                rhs = Element(spec)
                if b == c + 1:
                    rhs = rhs + (E(a, c) * K((c, 1), (c + 1, -1))).scale(q_a(spec, c, -1)) if a != c else rhs
                if a == c:
                    rhs = rhs - (E(c + 1, b) * K((c, -1), (c + 1, 1))).scale(sgn) if b != c + 1 else rhs
                out.append(("[E%d%d,E%d%d}" % (a, b, c + 1, c), br(E(a, b), E(c + 1, c)), rhs))
                rhs = Element(spec)
                if a == c:
                    rhs = rhs + (E(b, c + 1) * K((c, 1), (c + 1, -1))).scale(q_a(spec, c + 1)) if b != c + 1 else rhs
                if b == c + 1:
                    rhs = rhs - (E(c, a) * K((c, -1), (c + 1, 1))).scale(sgn) if a != c else rhs
                out.append(("[E%d%d,E%d%d}" % (b, a, c, c + 1), br(E(b, a), E(c, c + 1)), rhs))
    # part 2
    for a in I:
        for b in I:
            if a < b:
                d = (q_a(spec, a) - q_a(spec, a, -1)).inverse()
                out.append(("[E%d%d,E%d%d}" % (a, b, b, a), br(E(a, b), E(b, a)),
                            (K((a, 1), (b, -1)) - K((a, -1), (b, 1))).scale(d)))
    for a in I:
        for b in I:
            for c in I:
                if len({a, b, c}) < 3:
                    continue
                if a > b > c:
                    rhs = (E(a, b) * K((c, 1), (b, -1))).scale(q_a(spec, b))
                elif b > a > c:
                    rhs = E(a, b) * K((c, -1), (b if printed else a, 1))
                elif b < a < c:
                    rhs = E(a, b) * K((a, -1), (c, 1))
                elif a < b < c:
                    rhs = (E(a, b) * K((b, 1), (c, -1))).scale(q_a(spec, b, -1))
                else:
                    rhs = None
                if rhs is not None:
                    out.append(("[E%d%d,E%d%d}" % (a, c, c, b), br(E(a, c), E(c, b)), rhs))
                if a < b < c or b > a > c:
                    s = -1 if ((spec.parity(a) + spec.parity(c)) * (spec.parity(b) + spec.parity(c))) % 2 else 1
                    out.append(("E%d%dE%d%d" % (c, a, c, b), E(c, a) * E(c, b),
                                (E(c, b) * E(c, a)).scale(s * q_a(spec, c))))
                    out.append(("E%d%dE%d%d" % (b, c, a, c), E(b, c) * E(a, c),
                                (E(a, c) * E(b, c)).scale(s * q_a(spec, c, -1))))
                if a < c < b or ((a > b > c) if printed else (a > c > b)):
                    out.append(("[E%d%d,E%d%d}=0" % (c, a, c, b), br(E(c, a), E(c, b)), Element(spec)))
                    out.append(("[E%d%d,E%d%d}=0" % (a, c, b, c), br(E(a, c), E(b, c)), Element(spec)))
    # part 3
    for a in I:
        for b in I:
            for c in I:
                for d in I:
                    if not (a < b and c < d) or len({a, b, c, d}) < 4:
                        continue
                    S1, S2 = set(range(a, b + 1)), set(range(c, d + 1))
                    inter = S1 & S2
                    if inter and inter != S1 and inter != S2:
                        continue
                    for x, y in (((a, b), (c, d)), ((a, b), (d, c)), ((b, a), (c, d)), ((b, a), (d, c))):
                        out.append(("[E%d%d,E%d%d}=0" % (x + y), br(E(*x), E(*y)), Element(spec)))
    return out


def adjoint_identities(spec, convention="corrected"):
    """
    Adjoint action of the Levi subalgebra on X_a, Y_b: (name, lhs, rhs).
    Indices: a, b in I', c < m+n-1.  The f_c Y_b line uses delta_{c+1,b}.
    Ad_{e_c} Y_c carries the sign (-1)^{[c]+[c+1]} (absent with
    convention="printed", which is then wrong for c = m).
    """
    if convention not in ("corrected", "printed"):
        raise ValueError("unknown convention %r" % convention)
    N = spec.size
    I1 = range(1, N)
    out = []
    X = {a: tensor_X(spec, a) for a in I1}
    Y = {a: tensor_Y(spec, a) for a in I1}
    zero = Element(spec)
    for a in I1:
        for b in I1:
            Ka = gen_k(spec, a)
            out.append(("Ad K%d X%d" % (a, b), adjoint(Ka, X[b]), X[b].scale(q_a(spec, a, 1 if a == b else 0))))
            out.append(("Ad K%d Y%d" % (a, b), adjoint(Ka, Y[b]), Y[b].scale(q_a(spec, a, -1 if a == b else 0))))
    for b in I1:
        KN = gen_k(spec, N)
        out.append(("Ad K%d X%d" % (N, b), adjoint(KN, X[b]), X[b].scale(q_a(spec, N, -1))))
        out.append(("Ad K%d Y%d" % (N, b), adjoint(KN, Y[b]), Y[b].scale(q_a(spec, N, 1))))
    for c in range(1, N - 1):
        e, f = gen_e(spec, c), gen_f(spec, c)
        for b in I1:
            out.append(("Ad e%d X%d" % (c, b), adjoint(e, X[b]), X[c] if b == c + 1 else zero))
            out.append(("Ad f%d X%d" % (c, b), adjoint(f, X[b]), X[c + 1] if b == c else zero))
            sg = -1 if (spec.root_parity(c) and convention == "corrected") else 1
            out.append(("Ad e%d Y%d" % (c, b), adjoint(e, Y[b]),
                        Y[c + 1].scale(-sg * q_a(spec, c + 1)) if b == c else zero))
            out.append(("Ad f%d Y%d" % (c, b), adjoint(f, Y[b]),
                        Y[c].scale(-q_a(spec, c + 1, -1)) if b == c + 1 else zero))
    return out


def levi_generators(spec):
    """Generators of U_q(gl(m|n-1) + gl(1)) as (name, element)."""
    N = spec.size
    gens = [("K%d" % a, gen_k(spec, a)) for a in spec.indices]
    gens += [("K%d^-1" % a, gen_k(spec, a, -1)) for a in spec.indices]
    for c in range(1, N - 1):
        gens.append(("e%d" % c, gen_e(spec, c)))
        gens.append(("f%d" % c, gen_f(spec, c)))
    return gens


def pairing_violations(spec, sign="graded"):
    """
    Check (Ad_u(Y_a), X_b) = eps (Y_a, Ad_{S(u)}(X_b)) for Levi generators u,
    with (Y_a, X_b) = delta_ab.  sign="graded": eps = (-1)^{[u][Y_a]};
    sign="printed": eps = (-1)^{[u]}.  Returns failing (u, a, b).
    """
    if sign not in ("graded", "printed"):
        raise ValueError("unknown sign rule %r" % sign)
    N = spec.size
    I1 = list(range(1, N))
    eng = engine(spec)
    ex = Echelon()
    ey = Echelon()
    for a in I1:
        ex.add(eng.normal_form(tensor_X(spec, a)).terms)
        ey.add(eng.normal_form(tensor_Y(spec, a)).terms)
    bad = []
    for name, u in levi_generators(spec):
        pu = u.parity()
        su = antipode(u)
        cx = {}
        for b in I1:
            cx[b] = ex.coords(eng.normal_form(adjoint(su, tensor_X(spec, b))).terms)
        for a in I1:
            cy = ey.coords(eng.normal_form(adjoint(u, tensor_Y(spec, a))).terms)
            py = spec.pair_parity(a, N)
            flip = pu and (py if sign == "graded" else 1)
            for b in I1:
                if cy is None or cx[b] is None:
                    bad.append((name, a, b))
                    continue
                lhs = cy.get(b - 1, ZERO)
                rhs = cx[b].get(a - 1, ZERO)
                if flip:
                    rhs = -rhs
                if lhs != rhs:
                    bad.append((name, a, b))
    return bad


# ---------------------------------------------------------------------------
# modules
# ---------------------------------------------------------------------------

def quantum_hval(spec):
    """[E_i, F_i} on weight mu: (-1)^{[i]} [(mu, alpha_i)]_q  (0-based i)."""
    def h(i, mu):
        a = i + 1
        t = qsign(spec, a) * mu[a - 1] - qsign(spec, a + 1) * mu[a]
        v = q_int(t)
        return -v if spec.parity(a) else v
    return h


def _check_integral(lam):
    for x in lam:
        x = _num(x)
        if getattr(x, "denominator", 1) != 1:
            raise ValueError("quantum modules need an integral highest weight, got %s" % (lam,))


class QWeightModule(WeightModule):
    """
    Weight module of U_q: action[(a, a+1)] = E_{a,a+1}, action[(a+1, a)] =
    E_{a+1,a}; K_a acts on weight mu by q_a^{mu_a}.
    """

    def __init__(self, *args, **kw):
        super().__init__(*args, **kw)
        self._cache = {}

    def K(self, a, s=1):
        key = ("K", a, s)
        r = self._cache.get(key)
        if r is None:
            sg = qsign(self.spec, a) * s
            r = SuperOperator.diagonal([qpow(sg * int(w[a - 1])) for w in self.weights], 0)
            self._cache[key] = r
        return r

    def letter(self, x):
        if x[0] == "K":
            return self.K(x[1], x[2])
        if x[0] == "E":
            return self.action[(x[1], x[1] + 1)]
        return self.action[(x[1] + 1, x[1])]

    def has_letter(self, x):
        if x[0] == "K":
            return True
        if x[0] == "E":
            return (x[1], x[1] + 1) in self.action
        return (x[1] + 1, x[1]) in self.action

    def op(self, a, b):
        if a == b or abs(a - b) == 1:
            return super().op(a, b)
        key = ("root", a, b)
        r = self._cache.get(key)
        if r is None:
            r = evaluate(root_vector(self.spec, a, b), self)
            self._cache[key] = r
        return r

    def to_json(self):
        d = super().to_json()
        d["k_exponents"] = [[qsign(self.spec, a + 1) * int(x) for a, x in enumerate(w)]
                            for w in self.weights]
        return d


def evaluate(x: Element, M: QWeightModule) -> SuperOperator:
    """Matrix of an element of U_q on a module (words applied right to left)."""
    n = M.dim
    total = SuperOperator.zero(n, parity=None)
    par = None
    for w, c in x.terms.items():
        op = SuperOperator.identity(n)
        for letter in w:
            op = op @ M.letter(letter)
            if op.is_zero():
                break
        if op.is_zero():
            continue
        pw = word_parity(x.spec, w)
        par = pw if par is None or par == pw else None
        total = total + op.scale(c)
    total.parity = par if par is not None else (x.parity() if x.terms else 0)
    return total


def evaluate_nf(nf: NormalForm, M: QWeightModule) -> SuperOperator:
    return evaluate(nf.to_element(), M)


def evaluate_tensor(t: Tensor2, M1: QWeightModule, M2: QWeightModule) -> SuperOperator:
    n = M1.dim * M2.dim
    total = SuperOperator.zero(n)
    for (w1, w2), c in t.terms.items():
        A = evaluate(Element(t.spec, {w1: 1}), M1)
        B = evaluate(Element(t.spec, {w2: 1}), M2)
        if A.is_zero() or B.is_zero():
            continue
        B.parity = word_parity(t.spec, w2)
        A.parity = word_parity(t.spec, w1)
        total = total + tensor(A, B, M1.parities).scale(c)
    return total


def _qmodule_from_data(spec, data, simple, kind):
    weights = data.weights
    E = {i + 1: data.E[i] for i, _ in simple}
    F = {i + 1: data.F[i] for i, _ in simple}
    action = {}
    for a in E:
        action[(a, a + 1)] = E[a]
        action[(a + 1, a)] = F[a]
    labels = ["w%d" % k for k in range(len(weights))]
    return QWeightModule(spec, data.lam, weights, data.parities, action, labels, hw=0, kind=kind)


def build_uq_highest_weight(spec, lam, simple=None, kind="q-irrep", depth_cap=200):
    """Irreducible U_q-module (or Levi-subalgebra module) by the lowering closure."""
    lam = tuple(_num(x) for x in lam)
    _check_integral(lam)
    if simple is None:
        simple = list(spec.simple)
    data = lowering_closure(lam, [(i - 1, spec.root_parity(i)) for i in simple],
                            quantum_hval(spec), depth_cap)
    return _qmodule_from_data(spec, data, [(i - 1, None) for i in simple], kind)


def build_uq_even_irrep(spec, lam):
    even = [i for i in spec.simple if i != spec.m]
    return build_uq_highest_weight(spec, lam, even, kind="q-even-irrep")


def build_uq_kac_module(spec: AlgebraSpec, lam) -> QWeightModule:
    """
    Quantum Kac module: basis (ordered product of odd lowering root
    vectors) (x) v, v in the even irreducible module; the action of a
    generator x on F_S (x) v is read off from the normal form of x F_S.
    """
    check_dominant(spec, lam)
    lam = tuple(_num(x) for x in lam)
    _check_integral(lam)
    eng = engine(spec)
    V0 = build_uq_even_irrep(spec, lam)
    lo = eng.lower
    n_odd = spec.m * spec.n
    nl = len(lo.roots)
    subsets = [S for k in range(n_odd + 1) for S in combinations(range(n_odd), k)]
    d0 = V0.dim
    index = {}
    for S in subsets:
        for k in range(d0):
            index[(S, k)] = len(index)
    FS = {}
    for S in subsets:
        mono = [0] * nl
        for t in S:
            mono[t] = 1
        FS[S] = lo.monomial_element(tuple(mono))

    # root-vector matrices on V0 for the even part
    def mono_op(side, mono):
        op = SuperOperator.identity(d0)
        for t, e in enumerate(mono):
            if e:
                a, b = side.roots[t]
                op = op @ (V0.op(a, b) ** e)
        return op

    n_tot = len(index)
    action = {}
    for a in range(1, spec.size):
        for letter, key in ((("E", a), (a, a + 1)), (("F", a), (a + 1, a))):
            cols = {}
            g = Element.word(spec, letter)
            for S in subsets:
                nf = eng.normal_form(g * FS[S])
                for k in range(d0):
                    col = {}
                    for (low, kexp, up), c in nf.terms.items():
                        if any(up[t] for t in range(len(up)) if eng.upper.odd[t]):
                            continue
                        odd_part = low[:n_odd]
                        if any(e > 1 for e in odd_part):
                            raise PBWError("odd exponent above 1 in a normal form")
                        even_low = (0,) * n_odd + low[n_odd:]
                        vec = {k: c}
                        vec = mono_op(eng.upper, up).apply(vec)
                        if not vec:
                            continue
                        kf = {}
                        for l, x in vec.items():
                            p = k_pairing(spec, kexp, V0.weights[l])
                            kf[l] = x * qpow(p)
                        vec = mono_op(lo, even_low).apply(kf)
                        S2 = tuple(t for t in range(n_odd) if odd_part[t])
                        for l, x in vec.items():
                            j = index[(S2, l)]
                            y = col.get(j)
                            y = x if y is None else y + x
                            if y:
                                col[j] = y
                            else:
                                col.pop(j, None)
                    if col:
                        cols[index[(S, k)]] = col
            action[key] = SuperOperator(n_tot, n_tot, cols, spec.root_parity(a))
    weights = [None] * n_tot
    parities = [0] * n_tot
    labels = [None] * n_tot
    for (S, k), j in index.items():
        w = list(V0.weights[k])
        for t in S:
            b, a = lo.roots[t]
            w[b - 1] += 1
            w[a - 1] -= 1
        weights[j] = tuple(w)
        parities[j] = (len(S) + V0.parities[k]) & 1
        word = " ".join("F[%d,%d]" % lo.roots[t] for t in S)
        labels[j] = (word + " " if word else "") + "⊗ w%d" % k
    M = QWeightModule(spec, lam, weights, parities, action, labels, hw=index[((), V0.hw)], kind="q-kac")
    M.V0 = V0
    return M


def quotient_module(M: QWeightModule, kind="q-irrep") -> QWeightModule:
    """Quotient by the radical of the contravariant form."""
    R = RadicalQuotient(M.lam, M.weights, M.hw, {a - 1: M.action[(a, a + 1)] for a in M.spec.simple})
    action = {k: R.induced(op) for k, op in M.action.items()}
    weights = list(R.rep_weight)
    parities = [M.parities[k] for k in R.reps]
    labels = [M.labels[k] for k in R.reps]
    Q = QWeightModule(M.spec, M.lam, weights, parities, action, labels, hw=0, kind=kind)
    Q.radical = R
    Q.parent = M
    return Q


def build_uq_irrep(spec: AlgebraSpec, lam, route="direct") -> QWeightModule:
    """
    Finite-dimensional irreducible U_q-module of highest weight lam.
    route="direct": lowering closure; route="kac": quotient of the quantum
    Kac module by the radical of its contravariant form.
    """
    check_dominant(spec, lam)
    if route == "direct":
        return build_uq_highest_weight(spec, lam)
    if route == "kac":
        return quotient_module(build_uq_kac_module(spec, lam))
    raise ValueError("unknown route %r" % route)


def vector_module(spec) -> QWeightModule:
    lam = tuple([1] + [0] * (spec.size - 1))
    return build_uq_highest_weight(spec, lam, kind="q-vector")


def relation_violations(M: QWeightModule, rels=None):
    """Names of defining relations that fail as matrix identities on M."""
    spec = M.spec
    bad = []
    for name, r in (rels or defining_relations(spec)):
        if any(not M.has_letter(x) for w in r.terms for x in w):
            continue
        if not evaluate(r, M).is_zero():
            bad.append(name)
    return bad


def central_violations(M: QWeightModule):
    C = evaluate(central_element(M.spec), M)
    bad = []
    for key, X in sorted(M.action.items()):
        if not (C @ X - X @ C).is_zero():
            bad.append(key)
    return bad


def verify_identities(spec, identities, modules=(), rewrite=True, strategies=("leftmost",)):
    """
    Check identities lhs = rhs three ways: normal form, rewrite reduction
    (each strategy), evaluation on every module.  Returns a list of dicts.
    """
    eng = engine(spec)
    rw = rewriter(spec) if rewrite else None
    report = []
    for name, lhs, rhs in identities:
        d = lhs - rhs
        entry = {"identity": name}
        entry["normal_form"] = eng.normal_form(d).is_zero()
        if rw is not None:
            entry["rewrite"] = all(rw.normal_form(d, s).is_zero() for s in strategies)
        ev = True
        for M in modules:
            if any(not M.has_letter(x) for w in d.terms for x in w):
                continue
            if not evaluate(d, M).is_zero():
                ev = False
                break
        entry["modules"] = ev
        entry["ok"] = entry["normal_form"] and entry.get("rewrite", True) and ev
        entry["agree"] = len({entry["normal_form"], entry.get("rewrite", entry["normal_form"]), ev}) == 1
        report.append(entry)
    return report


def verify_lemma_identities(spec, modules=None):
    """Report for the root-vector commutation identities."""
    if modules is None:
        modules = default_modules(spec)
    return verify_identities(spec, lemma_identities(spec), modules)


def default_modules(spec, max_dim=60):
    """A small battery of irreducible modules for evaluation checks."""
    N = spec.size
    cands = [tuple([1] + [0] * (N - 1)),
             tuple([0] * (N - 1) + [-1]),
             tuple([1] + [0] * (N - 2) + [-1]),
             tuple([2, 1] + [0] * (N - 2)),
             tuple([2] + [0] * (N - 2) + [1])]
    out = []
    for lam in cands:
        try:
            check_dominant(spec, lam)
        except ValueError:
            continue
        M = build_uq_highest_weight(spec, lam)
        if M.dim <= max_dim:
            out.append(M)
    return out


def coproduct_relation_violations(spec, rels=None):
    """Relations whose coproduct does not vanish in U (x) U."""
    eng = engine(spec)
    bad = []
    for name, r in (rels or defining_relations(spec)):
        if eng.normal_form_tensor(coproduct(r)):
            bad.append(name)
    return bad


def commutant_violations(spec, C=None, gens=None, method="normal-form", modules=None):
    """
    Levi generators u with [Delta'(u), C] != 0, checked in U (x) U by normal
    form or on M1 (x) M2 by matrices.
    """
    if C is None:
        C = invariant_C(spec)
    eng = engine(spec)
    bad = []
    for name, u in (gens or levi_generators(spec)):
        d = opposite_coproduct(u)
        comm = d * C - C * d
        if method == "normal-form":
            if eng.normal_form_tensor(comm):
                bad.append(name)
        else:
            M1, M2 = modules
            if not evaluate_tensor(comm, M1, M2).is_zero():
                bad.append(name)
    return bad
