"""
The Lie superalgebra gl(m|n): structure constants, highest-weight modules,
Kac modules, parabolically induced modules and their irreducible quotients.

Indices a, b run over 1..m+n (1-based, as in the usual matrix-unit
notation e_ab); index a is odd iff a > m.  Weights are tuples of ints or
Fractions of length m+n.  Simple root i (1-based) is eps_i - eps_{i+1}.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

from .highest_weight import (NotFiniteError, RadicalQuotient, gram_ranks, height,
                             lowering_closure)
from .linalg import Echelon
from .qfield import QScalar
from .superalg import SuperOperator, super_commutator


class NonDominantError(ValueError):
    """The highest weight does not give a finite-dimensional module."""


@dataclass(frozen=True)
class AlgebraSpec:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0 or self.m + self.n < 1:
            raise ValueError("need m, n >= 0 with m + n >= 1")

    @property
    def size(self):
        return self.m + self.n

    @property
    def indices(self):
        return range(1, self.size + 1)

    def parity(self, a):
        if not 1 <= a <= self.size:
            raise IndexError("index %d outside 1..%d" % (a, self.size))
        return 0 if a <= self.m else 1

    def pair_parity(self, a, b):
        return (self.parity(a) + self.parity(b)) & 1

    def root_parity(self, i):
        """Parity of the simple root i (1-based)."""
        return self.pair_parity(i, i + 1)

    @property
    def simple(self):
        return list(range(1, self.size))

    def form(self, a, b):
        """(eps_a, eps_b) = (-1)^[a] delta_ab."""
        return (-1) ** self.parity(a) if a == b else 0

    def __str__(self):
        return "gl(%d|%d)" % (self.m, self.n)


# ---------------------------------------------------------------------------
# structure constants
# ---------------------------------------------------------------------------

def bracket(spec: AlgebraSpec, a, b, c, d):
    """[e_ab, e_cd} as a dict {(x, y): coefficient}."""
    out = {}
    if b == c:
        out[(a, d)] = out.get((a, d), 0) + 1
    if d == a:
        s = -1 if (spec.pair_parity(a, b) * spec.pair_parity(c, d)) else 1
        out[(c, b)] = out.get((c, b), 0) - s
    return {k: v for k, v in out.items() if v}


def super_jacobi_violations(spec: AlgebraSpec):
    """
    All triples of basis elements violating
    [x,[y,z}} = [[x,y},z} + (-1)^{[x][y]} [y,[x,z}}.
    """
    basis = [(a, b) for a in spec.indices for b in spec.indices]

    def br(u, v):
        out = {}
        for x, cx in u.items():
            for y, cy in v.items():
                for k, c in bracket(spec, *x, *y).items():
                    out[k] = out.get(k, 0) + cx * cy * c
        return {k: c for k, c in out.items() if c}

    def add(u, v, s=1):
        out = dict(u)
        for k, c in v.items():
            out[k] = out.get(k, 0) + s * c
        return {k: c for k, c in out.items() if c}

    bad = []
    for x, y, z in product(basis, repeat=3):
        X, Y, Z = {x: 1}, {y: 1}, {z: 1}
        px, py = spec.pair_parity(*x), spec.pair_parity(*y)
        lhs = br(X, br(Y, Z))
        rhs = add(br(br(X, Y), Z), br(Y, br(X, Z)), -1 if px * py else 1)
        if lhs != rhs:
            bad.append((x, y, z))
    return bad


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------

def _num(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def parse_weight(text: str, m: int, n: int):
    """'3,1|2' -> (3, 1, 2).  Entries may be rationals like 1/2."""
    if "|" not in text:
        raise ValueError("weight must look like 'a1,...,am|b1,...,bn'")
    left, right = text.split("|", 1)
    parts = [p for p in left.split(",") if p.strip()] + [p for p in right.split(",") if p.strip()]
    if len([p for p in left.split(",") if p.strip()]) != m or \
            len([p for p in right.split(",") if p.strip()]) != n:
        raise ValueError("weight %r does not have arity %d|%d" % (text, m, n))
    return tuple(_num(Fraction(p.strip())) for p in parts)


def format_weight(lam, m):
    s = [str(x) for x in lam]
    return ",".join(s[:m]) + "|" + ",".join(s[m:])


def is_dominant(spec: AlgebraSpec, lam) -> bool:
    """lam_a - lam_{a+1} is a nonnegative integer for every a != m in I'."""
    if len(lam) != spec.size:
        raise ValueError("weight has arity %d, expected %d" % (len(lam), spec.size))
    for a in range(1, spec.size):
        if a == spec.m:
            continue
        d = Fraction(lam[a - 1]) - Fraction(lam[a])
        if d.denominator != 1 or d < 0:
            return False
    return True


def check_dominant(spec, lam):
    if not is_dominant(spec, lam):
        raise NonDominantError("weight %s is not dominant for %s: need lambda_a - lambda_(a+1) "
                               "in Z+ for a != m" % (format_weight(lam, spec.m), spec))


def weight_of(spec, lam, mu):
    return tuple(mu)


def classical_hval(spec: AlgebraSpec):
    """[e_i, f_i} = e_ii - (-1)^{[i]+[i+1]} e_{i+1,i+1} on weight mu (0-based i)."""
    def h(i, mu):
        a = i + 1
        s = -1 if spec.root_parity(a) else 1
        return mu[i] - s * mu[i + 1]
    return h


# ---------------------------------------------------------------------------
# modules
# ---------------------------------------------------------------------------

class WeightModule:
    """
    A based gl(m|n)-module (or a module over a subalgebra).  ``action``
    maps (a, b) to the matrix of e_ab; only the pairs the module carries
    are present.  ``hw`` is the index of the highest-weight vector.
    """

    def __init__(self, spec, lam, weights, parities, action, labels=None, hw=0,
                 truncated=False, kind="module"):
        self.spec = spec
        self.lam = tuple(lam)
        self.weights = [tuple(w) for w in weights]
        self.parities = list(parities)
        self.action = dict(action)
        self.labels = labels or ["v%d" % k for k in range(len(weights))]
        self.hw = hw
        self.truncated = truncated
        self.kind = kind

    @property
    def dim(self):
        return len(self.weights)

    def __len__(self):
        return self.dim

    def op(self, a, b):
        if a == b and (a, a) not in self.action:
            return SuperOperator.diagonal([w[a - 1] for w in self.weights], 0)
        return self.action[(a, b)]

    def has(self, a, b):
        return a == b or (a, b) in self.action

    def character(self):
        return character(self)

    def raising_simple(self):
        return {i - 1: self.op(i, i + 1) for i in self.spec.simple if self.has(i, i + 1)}

    def lowering_simple(self):
        return {i - 1: self.op(i + 1, i) for i in self.spec.simple if self.has(i + 1, i)}

    def to_json(self):
        from .qfield import QScalar

        def s(x):
            if isinstance(x, QScalar):
                return x.to_str()
            return str(x)

        return {
            "kind": self.kind,
            "algebra": {"m": self.spec.m, "n": self.spec.n},
            "lambda": [str(x) for x in self.lam],
            "dim": self.dim,
            "truncated": self.truncated,
            "basis": self.labels,
            "weights": [[str(x) for x in w] for w in self.weights],
            "parities": self.parities,
            "action": {"e[%d,%d]" % ab: [[i, j, s(x)] for i, j, x in self.action[ab].triplets()]
                       for ab in sorted(self.action)},
            "character": character_json(self),
        }


def character(M) -> dict:
    """Weight multiplicities, sorted by height below the highest weight."""
    cnt = Counter(M.weights)
    lam = M.lam
    return dict(sorted(cnt.items(), key=lambda kv: (height(lam, kv[0]), kv[0])))


def character_json(M):
    return [[[str(x) for x in w], c] for w, c in character(M).items()]


def _blocks(size, simple):
    """Connected index blocks (1-based) for a set of simple roots."""
    block = list(range(size + 1))
    for i in sorted(simple):
        block[i + 1] = block[i]
    return block


def _complete_action(spec, weights, E, F, simple, parities):
    """
    All e_ab inside the blocks spanned by the simple roots, from the simple
    generators by graded commutators: e_ab = [e_{a,a+1}, e_{a+1,b}} and
    e_ba = [e_{b,b-1}, e_{b-1,a}}.
    """
    n = len(weights)
    block = _blocks(spec.size, simple)
    act = {}
    for a in spec.indices:
        act[(a, a)] = SuperOperator.diagonal([w[a - 1] for w in weights], 0)
    for i in simple:
        act[(i, i + 1)] = E[i - 1]
        act[(i + 1, i)] = F[i - 1]
    for length in range(2, spec.size):
        for a in range(1, spec.size - length + 1):
            b = a + length
            if block[a] != block[b]:
                continue
            act[(a, b)] = super_commutator(act[(a, a + 1)], act[(a + 1, b)])
            act[(b, a)] = super_commutator(act[(b, b - 1)], act[(b - 1, a)])
    for (a, b), X in act.items():
        X.parity = spec.pair_parity(a, b)
    return act


def build_highest_weight_irrep(spec: AlgebraSpec, lam, simple=None, kind="irrep"):
    """
    Irreducible module of highest weight lam over the subalgebra generated by
    the Cartan and the simple roots in ``simple`` (default: all), built by
    lowering closure.
    """
    lam = tuple(_num(x) for x in lam)
    if simple is None:
        simple = spec.simple
    data = lowering_closure(lam, [(i - 1, spec.root_parity(i)) for i in simple],
                            classical_hval(spec))
    act = _complete_action(spec, data.weights, data.E, data.F, list(simple), data.parities)
    parities = [_weight_parity(spec, lam, w) for w in data.weights]
    return WeightModule(spec, lam, data.weights, parities, act, hw=0, kind=kind)


def _weight_parity(spec, lam, mu):
    """Parity of a weight vector relative to the highest-weight vector."""
    s = sum(Fraction(mu[a - 1]) - Fraction(lam[a - 1]) for a in spec.indices if a > spec.m)
    return int(s) & 1


def build_even_irrep(spec: AlgebraSpec, lam) -> WeightModule:
    """Irreducible gl(m) + gl(n) module of highest weight lam."""
    check_dominant(spec, lam)
    even = [i for i in spec.simple if i != spec.m]
    return build_highest_weight_irrep(spec, lam, even, kind="even-irrep")


def build_irrep_direct(spec: AlgebraSpec, lam) -> WeightModule:
    """The irreducible gl(m|n)-module V(lam), built directly by lowering closure."""
    check_dominant(spec, lam)
    return build_highest_weight_irrep(spec, lam, kind="irrep")


# -- Kac module ---------------------------------------------------------------

def odd_lowering_roots(spec):
    """The e_{mu i} (mu > m >= i), ordered by (mu, i)."""
    return [(mu, i) for mu in range(spec.m + 1, spec.size + 1) for i in range(1, spec.m + 1)]


def build_kac_module(spec: AlgebraSpec, lam) -> WeightModule:
    """
    Kac module U(f-) (x) V0(lam): basis = ordered products of odd lowering
    e_{mu i} times a basis of the even irreducible module.
    """
    V0 = build_even_irrep(spec, lam)
    roots = odd_lowering_roots(spec)
    pos = {r: t for t, r in enumerate(roots)}
    subsets = [S for k in range(len(roots) + 1) for S in combinations(range(len(roots)), k)]
    d0 = V0.dim
    index = {}
    for S in subsets:
        for k in range(d0):
            index[(S, k)] = len(index)
    m = spec.m

    def insert(r, S):
        """e_r * (ordered product S) = sign * ordered product, or None."""
        if r in S:
            return None
        before = sum(1 for s in S if s < r)
        return (-1) ** before, tuple(sorted(S + (r,)))

    def apply_vec(vec, fn):
        out = {}
        for key, c in vec.items():
            for k2, x in fn(key).items():
                y = out.get(k2, 0) + c * x
                if y:
                    out[k2] = y
                else:
                    out.pop(k2, None)
        return out

    def insert_vec(r, vec):
        def fn(key):
            S, k = key
            t = insert(r, S)
            return {} if t is None else {(t[1], k): t[0]}
        return apply_vec(vec, fn)

    cache = {}

    def act(x, S, k):
        """e_x on (product S) (x) v_k, as a dict over (S', k')."""
        key = (x, S, k)
        if key in cache:
            return cache[key]
        a, b = x
        if a > m >= b:                              # odd lowering
            out = insert_vec(pos[x], {(S, k): 1})
        elif not S:
            if a <= m < b:                          # odd raising kills V0
                out = {}
            else:
                out = {((), l): c for l, c in V0.op(a, b).cols.get(k, {}).items()}
        else:
            y = roots[S[0]]
            rest = S[1:]
            out = {}
            for (c, d), coef in bracket(spec, a, b, *y).items():
                out = _vadd(out, act((c, d), rest, k), coef)
            inner = act(x, rest, k)
            sgn = -1 if spec.pair_parity(a, b) else 1
            out = _vadd(out, insert_vec(S[0], inner), sgn)
        cache[key] = out
        return out

    n_tot = len(index)
    action = {}
    for a in spec.indices:
        for b in spec.indices:
            cols = {}
            for (S, k), j in index.items():
                v = act((a, b), S, k)
                if v:
                    cols[j] = {index[kk]: c for kk, c in v.items()}
            action[(a, b)] = SuperOperator(n_tot, n_tot, cols, spec.pair_parity(a, b))
    weights = [None] * n_tot
    parities = [0] * n_tot
    labels = [None] * n_tot
    for (S, k), j in index.items():
        w = list(V0.weights[k])
        for t in S:
            mu, i = roots[t]
            w[mu - 1] += 1
            w[i - 1] -= 1
        weights[j] = tuple(w)
        parities[j] = (len(S) + V0.parities[k]) & 1
        word = " ".join("e[%d,%d]" % roots[t] for t in S)
        labels[j] = (word + " " if word else "") + "⊗ v%d" % k
    return WeightModule(spec, V0.lam, weights, parities, action, labels,
                        hw=index[((), V0.hw)], kind="kac")


def _vadd(u, v, c=1):
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


# -- parabolic induction --------------------------------------------------------

def build_parabolic_induced(spec: AlgebraSpec, theta, lam, degree_cap=None) -> WeightModule:
    """
    U(gl) (x)_{U(p)} V0(lam) for the standard parabolic p whose Levi part is
    generated by the simple roots in ``theta`` (a proper subset of I').
    Basis: PBW monomials in the lowering e_ba outside the Levi, ordered by
    (b, a), of degree <= degree_cap, times a basis of V0.  When the cap cuts
    off a nonzero part of the module the result is flagged ``truncated``.
    """
    theta = sorted(set(theta))
    if any(not 1 <= t < spec.size for t in theta) or len(theta) == spec.size - 1:
        raise ValueError("theta must be a proper subset of I'")
    check_dominant(spec, lam)
    lam = tuple(_num(x) for x in lam)
    V0 = build_highest_weight_irrep(spec, lam, theta, kind="levi-irrep")
    block = _blocks(spec.size, theta)
    roots = [(b, a) for b in spec.indices for a in spec.indices if b > a and block[a] != block[b]]
    pos = {r: t for t, r in enumerate(roots)}
    rpar = [spec.pair_parity(*r) for r in roots]
    nr = len(roots)
    finite = all(rpar)
    if degree_cap is None:
        if not finite:
            raise ValueError("an even root outside the Levi part needs a degree cap")
        degree_cap = nr
    cap = degree_cap
    truncated = [False]

    def unit(t):
        e = [0] * nr
        e[t] = 1
        return tuple(e)

    def addexp(M, t, s):
        e = list(M)
        e[t] += s
        return tuple(e)

    ins_cache = {}

    def ins(r, M):
        """y_r * M straightened into ordered monomials, as {M': c}."""
        key = (r, M)
        if key in ins_cache:
            return ins_cache[key]
        first = next((t for t in range(nr) if M[t]), None)
        if first is None or r < first or (r == first and not rpar[r]):
            M2 = addexp(M, r, 1)
            if sum(M2) > cap:
                truncated[0] = True
                out = {}
            else:
                out = {M2: 1}
        elif r == first:
            out = {}                                    # odd square
        else:
            s = first
            Mp = addexp(M, s, -1)
            sgn = -1 if (rpar[r] and rpar[s]) else 1
            out = {}
            for M3, c in ins(r, Mp).items():
                for M4, c2 in ins(s, M3).items():
                    out = _vadd(out, {M4: c * c2}, sgn)
            for cd, coef in bracket(spec, *roots[r], *roots[s]).items():
                for M3, c in ins(pos[cd], Mp).items():
                    out = _vadd(out, {M3: c}, coef)
        ins_cache[key] = out
        return out

    def ins_vec(r, vec):
        out = {}
        for (M, k), c in vec.items():
            for M2, x in ins(r, M).items():
                out = _vadd(out, {(M2, k): x}, c)
        return out

    def weight(M, k):
        w = list(V0.weights[k])
        for t, e in enumerate(M):
            if e:
                b, a = roots[t]
                w[b - 1] += e
                w[a - 1] -= e
        return w

    cache = {}

    def act(x, M, k):
        key = (x, M, k)
        if key in cache:
            return cache[key]
        a, b = x
        if x in pos:
            out = ins_vec(pos[x], {(M, k): 1})
        elif a == b:
            wv = weight(M, k)[a - 1]
            out = {(M, k): wv} if wv else {}
        elif not any(M):
            if block[a] == block[b]:
                out = {(M, l): c for l, c in V0.op(a, b).cols.get(k, {}).items()}
            else:
                out = {}                               # nilradical kills V0
        else:
            s = next(t for t in range(nr) if M[t])
            Mp = addexp(M, s, -1)
            out = {}
            for cd, coef in bracket(spec, a, b, *roots[s]).items():
                out = _vadd(out, act(cd, Mp, k), coef)
            sgn = -1 if (spec.pair_parity(a, b) and rpar[s]) else 1
            out = _vadd(out, ins_vec(s, act(x, Mp, k)), sgn)
        cache[key] = out
        return out

    monos = []

    def rec(t, left, acc):
        if t == nr:
            monos.append(tuple(acc))
            return
        hi = min(left, 1) if rpar[t] else left
        for e in range(0, hi + 1):
            acc.append(e)
            rec(t + 1, left - e, acc)
            acc.pop()

    rec(0, cap, [])
    monos.sort(key=lambda M: (sum(M), tuple(-e for e in M)))
    index = {}
    for M in monos:
        for k in range(V0.dim):
            index[(M, k)] = len(index)
    n_tot = len(index)
    action = {}
    for a in spec.indices:
        for b in spec.indices:
            cols = {}
            for (M, k), j in index.items():
                v = act((a, b), M, k)
                if v:
                    cols[j] = {index[kk]: c for kk, c in v.items()}
            action[(a, b)] = SuperOperator(n_tot, n_tot, cols, spec.pair_parity(a, b))
    weights = [None] * n_tot
    labels = [None] * n_tot
    for (M, k), j in index.items():
        weights[j] = tuple(weight(M, k))
        word = " ".join(("e[%d,%d]" % roots[t]) + ("^%d" % e if e > 1 else "")
                        for t, e in enumerate(M) if e)
        labels[j] = (word + " " if word else "") + "⊗ v%d" % k
    parities = [_weight_parity(spec, lam, w) for w in weights]
    mod = WeightModule(spec, lam, weights, parities, action, labels,
                       hw=index[(tuple([0] * nr), V0.hw)], truncated=truncated[0],
                       kind="parabolic")
    mod.degree_cap = cap
    mod.theta = tuple(theta)
    return mod


# -- quotients -------------------------------------------------------------------

def irreducible_quotient(M: WeightModule) -> WeightModule:
    """
    M / rad, where rad is the radical of the contravariant form built from
    omega(e_ab) = e_ba.  For a truncated module only weight spaces whose
    height does not exceed the degree cap are used; the result is flagged
    truncated unless the quotient visibly terminates below the cap.
    """
    max_h = getattr(M, "degree_cap", None) if M.truncated else None
    R = RadicalQuotient(M.lam, M.weights, M.hw, M.raising_simple(), max_height=max_h)
    action = {ab: R.induced(X) for ab, X in M.action.items()}
    weights = [M.weights[k] for k in R.reps]
    labels = [M.labels[k] for k in R.reps]
    parities = [M.parities[k] for k in R.reps]
    truncated = False
    if max_h is not None:
        hs = {height(M.lam, w) for w in weights}
        truncated = not any(h not in hs for h in range(0, max_h + 1))
    out = WeightModule(M.spec, M.lam, weights, parities, action, labels, hw=0,
                       truncated=truncated, kind="irreducible-quotient")
    out.radical = R
    return out


def contravariant_ranks(M: WeightModule, max_height=None):
    """Gram-matrix ranks per weight (brute-force oracle for the quotient)."""
    if max_height is None:
        max_height = max(height(M.lam, w) for w in M.weights)
    return gram_ranks(M.lam, M.weights, M.hw, M.raising_simple(), M.lowering_simple(), max_height)


# -- verification helpers ------------------------------------------------------------

def bracket_violations(M: WeightModule, pairs=None):
    """Pairs (a,b,c,d) with [pi(e_ab), pi(e_cd)} != pi([e_ab, e_cd})."""
    spec = M.spec
    keys = sorted(k for k in M.action)
    bad = []
    for x in keys:
        for y in keys:
            if pairs is not None and (x, y) not in pairs:
                continue
            br = bracket(spec, *x, *y)
            if not all(M.has(*k) for k in br):
                continue
            lhs = super_commutator(M.op(*x), M.op(*y))
            rhs = SuperOperator.zero(M.dim)
            for k, c in br.items():
                rhs = rhs + M.op(*k).scale(c)
            if lhs != rhs:
                bad.append(x + y)
    return bad


def closure(ops, start, n):
    """Span of everything reachable from the start vectors; returns an Echelon."""
    ech = Echelon()
    queue = []
    for v in start:
        if ech.add(v) is not None:
            queue.append(v)
    while queue:
        v = queue.pop()
        for X in ops:
            w = X.apply(v)
            if w and ech.add(w) is not None:
                queue.append(w)
    return ech


def irreducibility_witness(M: WeightModule) -> bool:
    """
    True iff the joint kernel of the simple raising operators is the
    highest-weight line and the highest-weight vector generates M.  In a
    finite-dimensional weight module every nonzero submodule contains such
    a joint-kernel vector, so this proves irreducibility.
    """
    from .linalg import kernel
    raising = list(M.raising_simple().values())
    cols = {}
    for j in range(M.dim):
        col = {}
        for t, X in enumerate(raising):
            for i, c in X.cols.get(j, {}).items():
                col[(t, i)] = c
        cols[j] = col
    ker = kernel(cols, M.dim)
    if len(ker) != 1 or set(ker[0]) != {M.hw}:
        return False
    ops = [M.op(*ab) for ab in M.action if ab[0] != ab[1]]
    return len(closure(ops, [{M.hw: 1}], M.dim)) == M.dim


def cyclic_from_every_basis_vector(M: WeightModule) -> bool:
    ops = [M.op(*ab) for ab in M.action]
    return all(len(closure(ops, [{j: 1}], M.dim)) == M.dim for j in range(M.dim))


def weyl_dimension_even(spec: AlgebraSpec, lam) -> int:
    """Weyl dimension of the gl(m) + gl(n) irrep (oracle for tests and reports)."""
    def weyl(part):
        r = len(part)
        num = Fraction(1)
        for i in range(r):
            for j in range(i + 1, r):
                num *= Fraction(part[i] - part[j] + j - i, j - i)
        return num
    out = weyl(lam[:spec.m]) * weyl(lam[spec.m:])
    return int(out)
