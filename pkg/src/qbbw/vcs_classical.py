"""
Classical vector-coherent-state realizations of gl(m|n).

Two families of first-order differential operators:

* projective type: polynomials in Z_a (a in I' = 1..m+n-1; theta_i odd for
  i <= m, z_mu even) tensored with an irreducible module V0 over
  gl(m|n-1) + gl(1);
* Kac type: the Grassmann algebra in theta_{mu i} (mu > m >= i) tensored
  with an irreducible gl(m) + gl(n) module.

Both come with the coherent-state map w -> xi_w built from
g = exp(sum Z (x) e), so the realizations can be checked against the
module they are supposed to reproduce.

Tensor conventions: (A (x) B)(p (x) v) = (-1)^{[B][p]} Ap (x) Bv.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .glmn import (AlgebraSpec, WeightModule, bracket, build_highest_weight_irrep,
                   build_irrep_direct, check_dominant, _num)
from .linalg import Echelon
from .superalg import (GeneratorSet, SuperOperator, SuperSpace, TensorSpace,
                       derivative_operator, multiplication_operator, super_commutator, tensor)

# Sign conventions.  "printed" reproduces the displayed formulas literally;
# "corrected" is what the relation and intertwining checks single out.
PROJECTIVE_CONVENTIONS = ("corrected", "printed")
GRASSMANN_CONVENTIONS = ("corrected", "printed")


class Realization:
    """Operators for every e_ab on space (x) V0, plus bookkeeping."""

    def __init__(self, spec, lam, space, V0, ops, kind, L=None, convention=None):
        self.spec = spec
        self.lam = tuple(lam)
        self.space = space              # SuperSpace
        self.V0 = V0
        self.tspace = TensorSpace(space, V0.parities, V0.labels)
        self.ops = ops
        self.kind = kind
        self.L = L
        self.convention = convention

    @property
    def dim(self):
        return len(self.tspace)

    @property
    def hw(self):
        return self.tspace.idx(self.space.one(), self.V0.hw)

    def op(self, a, b):
        return self.ops[(a, b)]

    def weight(self, k):
        """Weight of the ambient basis vector k."""
        i, j = self.tspace.split(k)
        w = list(self.V0.weights[j])
        for g, e in enumerate(self.space.basis[i]):
            if e:
                for a, d in self._var_weight[g].items():
                    w[a - 1] += d * e
        return tuple(w)

    def exact_columns(self, raise_by):
        """Columns on which products raising the degree by ``raise_by`` are exact."""
        if self.L is None:
            return None
        if self.kind == "projective" and self.spec.n == 1 and self.L >= self.spec.m:
            return None     # only Grassmann variables: the truncation is exact
        limit = self.L - raise_by
        return [k for k in range(self.dim) if self.tspace.degree(k) <= limit]

    def closure_module(self) -> WeightModule:
        """The submodule generated by 1 (x) v+, as a WeightModule on a weight basis."""
        return closure_module(self.spec, self.lam, self.ops, self.hw, self.weight, self.tspace)


def closure_module(spec, lam, ops, hw, weight_fn, tspace=None, kind="closure"):
    """
    Submodule generated by the vector ``hw`` under the operators ``ops``.
    Images of weight vectors under weight-homogeneous operators are weight
    vectors, so the accepted spanning vectors form a weight basis.
    """
    ech = Echelon()
    wts = []
    queue = [{hw: 1}]
    ech.add(queue[0])
    wts.append(weight_fn(hw))
    keys = sorted(ops)
    while queue:
        v = queue.pop(0)
        for ab in keys:
            w = ops[ab].apply(v)
            if w and ech.add(w) is not None:
                queue.append(w)
                wts.append(weight_fn(next(iter(w))))
    basis = ech.basis
    n = len(basis)
    action = {}
    for ab in keys:
        cols = {}
        for t, v in enumerate(basis):
            c = ech.coords(ops[ab].apply(v))
            if c is None:
                raise ValueError("closure is not invariant under e%s" % (ab,))
            if c:
                cols[t] = c
        action[ab] = SuperOperator(n, n, cols, ops[ab].parity)
    par = []
    for v in basis:
        k = next(iter(v))
        par.append(tspace.parity(k) if tspace is not None else 0)
    labels = []
    for v in basis:
        k = min(v)
        labels.append(tspace.label(k) if tspace is not None else "u%d" % k)
    mod = WeightModule(spec, lam, wts, par, action, labels, hw=0, kind=kind)
    mod.vectors = basis
    mod.max_degree = max((tspace.degree(k) for v in basis for k in v), default=0) \
        if tspace is not None else None
    return mod


# ---------------------------------------------------------------------------
# projective type
# ---------------------------------------------------------------------------

def level_zero_module(V: WeightModule) -> WeightModule:
    """
    Restriction of V to its lowest e_{NN} eigenspace (N = m+n), as a module
    over gl(m|n-1) + gl(1) in the basis inherited from V.
    """
    spec = V.spec
    N = spec.size
    top = V.lam[N - 1]
    idx = [k for k, w in enumerate(V.weights) if w[N - 1] == top]
    pos = {k: t for t, k in enumerate(idx)}
    action = {}
    for (a, b), X in V.action.items():
        if a == N or b == N:
            if a != b:
                continue
        cols = {}
        for k in idx:
            col = X.cols.get(k, {})
            if any(i not in pos for i in col):
                raise ValueError("level zero is not invariant under e[%d,%d]" % (a, b))
            if col:
                cols[pos[k]] = {pos[i]: c for i, c in col.items()}
        action[(a, b)] = SuperOperator(len(idx), len(idx), cols, X.parity)
    out = WeightModule(spec, V.lam, [V.weights[k] for k in idx], [V.parities[k] for k in idx],
                       action, [V.labels[k] for k in idx], hw=pos[V.hw], kind="level-zero")
    out.embedding = idx
    return out


def build_projective_V0(spec: AlgebraSpec, lam) -> WeightModule:
    """Irreducible gl(m|n-1) + gl(1) module of highest weight lam (lowering closure)."""
    return build_highest_weight_irrep(spec, lam, list(range(1, spec.size - 1)), kind="level-zero")


def initial_degree(spec, lam):
    d = Fraction(lam[spec.size - 2]) - Fraction(lam[spec.size - 1]) if spec.size >= 2 else 0
    base = int(d) if d.denominator == 1 and d >= 0 and spec.n >= 2 else 0
    return base + spec.m


def projective_operators(spec, lam, V0, L, convention="corrected"):
    m, n = spec.m, spec.n
    N = spec.size
    gens = GeneratorSet.projective(m, n)
    S = SuperSpace(gens, L)
    d0 = V0.dim
    I1 = list(range(1, N))
    par = spec.parity
    D = {a: derivative_operator(S, a - 1) for a in I1}
    Zm = {a: multiplication_operator(S, a - 1) for a in I1}
    one0 = SuperOperator.identity(d0)
    oneS = SuperOperator.identity(len(S))

    def T(A, B):
        return tensor(A, B, S.parity)

    def pi0(a, b):
        return V0.op(a, b)

    euler = SuperOperator.zero(len(S))
    for a in I1:
        euler = euler + Zm[a] @ D[a]
    ops = {}
    for a in I1:
        for b in I1:
            sgn = -1 if (par(a) * (par(b) + 1)) % 2 else 1
            ops[(a, b)] = T((Zm[b] @ D[a]).scale(-sgn), one0) + T(oneS, pi0(a, b))
    ops[(N, N)] = T(euler.scale(-1 if convention == "printed" else 1), one0) + T(oneS, pi0(N, N))
    for a in I1:
        sN = -1 if (par(a) and convention != "printed") else 1
        X = T(Zm[a], pi0(N, N).scale(sN))
        for b in I1:
            X = X + T(Zm[b], pi0(b, a))
            s = -1 if par(a) else 1
            X = X + T((Zm[a] @ Zm[b] @ D[b]).scale(s), one0)
        ops[(N, a)] = X
        ops[(a, N)] = T(D[a], one0)
    for (a, b), X in ops.items():
        X.parity = spec.pair_parity(a, b)
    var_weight = {}
    for a in I1:
        # Z_a carries weight eps_N - eps_a
        var_weight[a - 1] = {a: -1, N: 1}
    return S, ops, var_weight


def realize_projective(spec: AlgebraSpec, lam, L=None, V0=None, convention="corrected", max_L=60):
    """
    Projective-type realization on Lambda[Z]_L (x) V0.  With L=None the
    truncation degree is grown until the closure of 1 (x) v+ stays strictly
    below L (then every operator is exact on it).
    """
    check_dominant(spec, lam)
    lam = tuple(_num(x) for x in lam)
    if spec.n < 1:
        raise ValueError("the projective realization needs n >= 1")
    if V0 is None:
        V0 = build_projective_V0(spec, lam)
    adaptive = L is None
    if adaptive:
        L = initial_degree(spec, lam)
    while True:
        S, ops, vw = projective_operators(spec, lam, V0, L, convention)
        R = Realization(spec, lam, S, V0, ops, "projective", L, convention)
        R._var_weight = vw
        if not adaptive:
            return R
        C = R.closure_module()
        if C.max_degree < L or (spec.n == 1 and L >= spec.m):
            R.closure_cache = C
            return R
        L = C.max_degree + 1
        if L > max_L:
            raise ValueError("closure still growing at degree %d" % L)


# ---------------------------------------------------------------------------
# Kac type
# ---------------------------------------------------------------------------

def kac_generators(spec):
    gens = GeneratorSet.kac(spec.m, spec.n)
    pos = {}
    t = 0
    for mu in range(spec.m + 1, spec.size + 1):
        for i in range(1, spec.m + 1):
            pos[(mu, i)] = t
            t += 1
    return gens, pos


def realize_grassmann(spec: AlgebraSpec, lam, V0=None, convention="corrected"):
    """Kac-type realization on Lambda[theta_{mu i}] (x) V0."""
    from .glmn import build_even_irrep
    check_dominant(spec, lam)
    lam = tuple(_num(x) for x in lam)
    m, N = spec.m, spec.size
    if V0 is None:
        V0 = build_even_irrep(spec, lam)
    gens, pos = kac_generators(spec)
    S = SuperSpace(gens, len(gens))
    d0 = V0.dim
    D = {k: derivative_operator(S, g) for k, g in pos.items()}
    Th = {k: multiplication_operator(S, g) for k, g in pos.items()}
    one0 = SuperOperator.identity(d0)
    oneS = SuperOperator.identity(len(S))
    evens = range(1, m + 1)
    odds = range(m + 1, N + 1)

    def T(A, B):
        return tensor(A, B, S.parity)

    ops = {}
    for i in evens:
        for j in evens:
            X = SuperOperator.zero(len(S))
            for mu in odds:
                X = X - Th[(mu, j)] @ D[(mu, i)]
            ops[(i, j)] = T(X, one0) + T(oneS, V0.op(i, j))
    for mu in odds:
        for nu in odds:
            X = SuperOperator.zero(len(S))
            for i in evens:
                if convention == "printed":
                    X = X - Th[(nu, i)] @ D[(mu, i)]
                else:
                    X = X + Th[(mu, i)] @ D[(nu, i)]
            ops[(mu, nu)] = T(X, one0) + T(oneS, V0.op(mu, nu))
    for mu in odds:
        for i in evens:
            X = SuperOperator.zero(len(S) * d0)
            for j in evens:
                for nu in odds:
                    X = X + T(Th[(nu, i)] @ Th[(mu, j)] @ D[(nu, j)], one0)
                X = X + T(Th[(mu, j)], V0.op(j, i))
            for nu in odds:
                X = X + T(Th[(nu, i)], V0.op(mu, nu))
            ops[(mu, i)] = X
            ops[(i, mu)] = T(D[(mu, i)], one0)
    for (a, b), X in ops.items():
        X.parity = spec.pair_parity(a, b)
    R = Realization(spec, lam, S, V0, ops, "grassmann", None, convention)
    R._var_weight = {g: {mu: 1, i: -1} for (mu, i), g in pos.items()}
    return R


# ---------------------------------------------------------------------------
# coherent states
# ---------------------------------------------------------------------------

def _exp_apply(O, v):
    """exp(O) v for nilpotent O (classical factorials)."""
    out = dict(v)
    term = dict(v)
    for j in range(1, O.n_in + 2):
        term = O.apply(term)
        if not term:
            return out
        c = Fraction(1, factorial(j))
        for k, x in term.items():
            y = out.get(k, 0) + c * x
            if y:
                out[k] = y
            else:
                out.pop(k, None)
    raise ValueError("exponent is not nilpotent")


class CoherentStateMap:
    """
    w -> xi_w = sum_i (-1)^{[v_i](1+[w])} <v^i| g (1 (x) w)> (x) v^i with
    g = exp(sum_a Z_a (x) e_{a,N}) (projective type) or
    g = exp(sum theta_{mu i} (x) e_{i mu}) (Kac type).

    ``V`` is the full module, ``level`` lists the indices of V spanning V0
    (in the order used by the realization), and the pairing includes the
    sign (-1)^{[v^i][p]} for moving the dual vector past the polynomial.
    """

    def __init__(self, R: Realization, V: WeightModule, level, pairs):
        self.R = R
        self.V = V
        self.level = list(level)
        S = R.space
        self.big = TensorSpace(S, V.parities, V.labels)
        O = SuperOperator.zero(len(S) * V.dim)
        for g, e in pairs:
            O = O + tensor(multiplication_operator(S, g), V.op(*e), S.parity)
        self.O = O
        self.pos = {k: t for t, k in enumerate(self.level)}

    def __call__(self, w):
        """xi_w for a vector w of V given as {index: coeff}."""
        S = self.R.space
        V = self.V
        out = {}
        for k, c in w.items():
            pw = V.parities[k]
            v = {self.big.idx(S.one(), k): 1}
            gv = _exp_apply(self.O, v)
            for key, x in gv.items():
                i, j = self.big.split(key)
                t = self.pos.get(j)
                if t is None:
                    continue
                pv = V.parities[j]
                pp = S.parity[i]
                s = (pv * (1 + pw) + pv * pp) % 2
                tgt = self.R.tspace.idx(i, t)
                y = out.get(tgt, 0) + (-x if s else x) * c
                if y:
                    out[tgt] = y
                else:
                    out.pop(tgt, None)
        return out


def coherent_state_map_projective(R: Realization, V: WeightModule = None) -> CoherentStateMap:
    """Coherent states for a projective-type realization whose V0 is the level-zero part of V."""
    spec = R.spec
    N = spec.size
    if V is None:
        V = build_irrep_direct(spec, R.lam)
    level = getattr(R.V0, "embedding", None)
    if level is None:
        raise ValueError("the realization's V0 must be the level-zero restriction of V")
    pairs = [(a - 1, (a, N)) for a in range(1, N)]
    return CoherentStateMap(R, V, level, pairs)


def coherent_state_map_grassmann(R: Realization, K: WeightModule) -> CoherentStateMap:
    """Coherent states for a Kac-type realization; K is the Kac module."""
    spec = R.spec
    gens, pos = kac_generators(spec)
    level = [k for k, lab in enumerate(K.labels) if lab.startswith("⊗")]
    pairs = [(g, (i, mu)) for (mu, i), g in pos.items()]
    return CoherentStateMap(R, K, level, pairs)


def coherent_state(R: Realization, w, V: WeightModule = None):
    """xi_w for the projective-type realization R."""
    return coherent_state_map_projective(R, V)(w)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def relation_violations(spec, ops, columns=None):
    """(a,b,c,d) with [pi(e_ab), pi(e_cd)} != pi([e_ab, e_cd}) on the given columns."""
    bad = []
    keys = sorted(ops)
    for x in keys:
        for y in keys:
            lhs = super_commutator(ops[x], ops[y])
            rhs = SuperOperator.zero(lhs.n_in)
            for k, c in bracket(spec, *x, *y).items():
                rhs = rhs + ops[k].scale(c)
            diff = lhs - rhs
            if columns is not None:
                diff = diff.restrict_columns(columns)
            if not diff.is_zero():
                bad.append({"identity": "[e%d%d,e%d%d}" % (x + y), "pair": x + y,
                            "diff": [[i, j, str(v)] for i, j, v in diff.triplets()[:8]]})
    return bad


def verify_realization(R: Realization, oracle: WeightModule = None):
    """
    Report: violated bracket identities (on columns where truncation is
    exact), and isomorphism witnesses of the closure of 1 (x) v+ against
    an oracle irreducible module.
    """
    from .glmn import character, irreducibility_witness, irreducible_quotient, build_kac_module
    cols = R.exact_columns(2)
    viol = relation_violations(R.spec, R.ops, cols)
    C = getattr(R, "closure_cache", None) or R.closure_module()
    if oracle is None:
        oracle = irreducible_quotient(build_kac_module(R.spec, R.lam))
    hw_ok = C.weights[0] == R.lam and all(
        not R.ops[(a, b)].apply({R.hw: 1}) for a in R.spec.indices for b in R.spec.indices if a < b)
    report = {
        "kind": R.kind,
        "convention": R.convention,
        "violations": viol,
        "closure_dim": C.dim,
        "oracle_dim": oracle.dim,
        "highest_weight_ok": hw_ok,
        "character_equal": character(C) == character(oracle),
        "closure_irreducible": irreducibility_witness(C),
        "truncation": R.L,
    }
    if R.L is not None:
        report["closure_max_degree"] = C.max_degree
    report["ok"] = (not viol and report["closure_dim"] == oracle.dim and hw_ok
                    and report["character_equal"] and report["closure_irreducible"])
    return report


def intertwining_violations(R: Realization, xi: CoherentStateMap, pairs=None):
    """
    (a, b, k) for which pi(e_ab) xi_{w_k} != xi_{e_ab w_k}; ``pairs`` restricts
    the check to a sample of ((a, b), k).
    """
    V = xi.V
    if pairs is None:
        pairs = [(ab, k) for ab in sorted(V.action) for k in range(V.dim)]
    cache = {}
    bad = []
    for ab, k in pairs:
        if k not in cache:
            cache[k] = xi({k: 1})
        lhs = R.ops[ab].apply(cache[k])
        rhs = xi(V.op(*ab).cols.get(k, {}))
        if any(lhs.get(i, 0) != rhs.get(i, 0) for i in set(lhs) | set(rhs)):
            bad.append((ab[0], ab[1], k))
    return bad


def mutate(R: Realization, ab, op: SuperOperator) -> Realization:
    """Copy of R with pi(e_ab) replaced (fault injection for the checks)."""
    ops = dict(R.ops)
    ops[ab] = op
    out = Realization(R.spec, R.lam, R.space, R.V0, ops, R.kind, R.L, "mutant")
    out._var_weight = R._var_weight
    return out
