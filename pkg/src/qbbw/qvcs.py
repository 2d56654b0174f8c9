"""
Quantum coherent-state realizations of U_q(gl(m|n)).

* ``realize_patch``: q-difference operators on polynomials of degree <= k
  in the affine coordinates Z_a (theta_i odd for i <= m, z_mu even) of a
  projective superspace patch.
* ``tensor_operators_y`` / ``operator_O``: the multiplication-plus-scaling
  operators y_a and O = sum_a s_a y_a (x) E_{a,N} acting on
  Lambda[Z]_L (x) V for a U_q-module V.
* ``CoherentStateMap``: Xi_w = sum_i <v^i| exp_q(O)(1 (x) w)> (x) v^i with the
  Koszul sign convention (the alternative per-component sign is kept as
  ``sign_rule="printed"``).
* ``realize_bbw``: operators on Lambda[Z]_L (x) V0 whose closure from
  1 (x) v+ is the irreducible module of highest weight lambda; V0 is built
  recursively along gl(m|n) > gl(m|n-1) > ... > gl(m).

Throughout N = m+n, q_a = q^{(-1)^[a]}, and Z_a has weight eps_N - eps_a.
"""

from __future__ import annotations

from .glmn import AlgebraSpec, character, check_dominant, _num
from .linalg import Echelon, kernel
from .qfield import QScalar, qpow, q_factorial
from .superalg import (GeneratorSet, SuperOperator, SuperSpace, TensorSpace, difference_operator,
                       multiplication_operator, q_exp_apply, q_exp_operator, scaling_operator,
                       tensor)
from . import uq
from .uq import QWeightModule, qsign

PATCH_CONVENTIONS = ("corrected", "printed")
BBW_CONVENTIONS = ("corrected", "printed")


def _q_a(spec, a, e=1):
    return qpow(qsign(spec, a) * e)


def patch_space(spec, L):
    return SuperSpace(GeneratorSet.projective(spec.m, spec.n), L)


class QRealization:
    """
    A family of operators for the generators of U_q on a based space:
    E[a] = E_{a,a+1}, F[a] = E_{a+1,a}, K[(a, s)] = K_a^s.  Duck-types the
    module interface used by ``uq.evaluate`` and ``uq.relation_violations``.
    """

    def __init__(self, spec, lam, space, V0, E, F, K, kind, L=None, convention=None, params=None):
        self.spec = spec
        self.lam = tuple(lam) if lam is not None else None
        self.space = space
        self.V0 = V0
        self.tspace = TensorSpace(space, V0.parities, V0.labels) if V0 is not None else None
        self.E = E
        self.F = F
        self.K = K
        self.kind = kind
        self.L = L
        self.convention = convention
        self.params = params or {}
        self.closure_cache = None

    @property
    def dim(self):
        return self.tspace.dim if self.tspace is not None else self.space.dim

    @property
    def hw(self):
        if self.tspace is None:
            return self.space.one()
        return self.tspace.idx(self.space.one(), self.V0.hw)

    def parity(self, k):
        return self.tspace.parity(k) if self.tspace is not None else self.space.parity[k]

    def degree(self, k):
        return self.tspace.degree(k) if self.tspace is not None else self.space.degree[k]

    def label(self, k):
        return self.tspace.label(k) if self.tspace is not None else self.space.label(k)

    def letter(self, x):
        if x[0] == "K":
            return self.K[(x[1], x[2])]
        return (self.E if x[0] == "E" else self.F)[x[1]]

    def has_letter(self, x):
        if x[0] == "K":
            return (x[1], x[2]) in self.K
        return x[1] in (self.E if x[0] == "E" else self.F)

    def ops(self):
        """Generator operators keyed like module actions: (a, a+1) and (a+1, a)."""
        out = {}
        for a, X in self.E.items():
            out[(a, a + 1)] = X
        for a, X in self.F.items():
            out[(a + 1, a)] = X
        return out

    def weight(self, k):
        """Weight of a basis vector, read from the diagonal K_a."""
        spec = self.spec
        w = []
        for a in spec.indices:
            c = self.K[(a, 1)].cols.get(k, {}).get(k)
            e = _exponent(c)
            w.append(qsign(spec, a) * e)
        return tuple(w)

    def exact_columns(self, raise_by=2):
        """Basis vectors on which words raising Z-degree by <= raise_by are untruncated."""
        if self.L is None or (self.kind in ("bbw", "patch") and self.full_space()):
            return None
        return [k for k in range(self.dim) if self.degree(k) <= self.L - raise_by]

    def full_space(self):
        """True when the truncation drops nothing (only odd coordinates, or a closed patch)."""
        if self.kind == "patch":
            return True
        gens = self.space.gens
        return gens.even_count == 0 and self.L >= gens.odd_count

    def closure_module(self) -> QWeightModule:
        if self.closure_cache is None:
            self.closure_cache = closure_qmodule(self)
        return self.closure_cache


def _exponent(c):
    """e with c = q^e (c a monomial QScalar)."""
    if c is None:
        raise ValueError("K is not diagonal on this vector")
    c = c if isinstance(c, QScalar) else QScalar(c)
    num, den = c.num, c.den
    if den.coeffs != (1,) or den.low != 0 or num.coeffs != (1,):
        raise ValueError("K eigenvalue %s is not a power of q" % c.to_str())
    return num.low


def closure_qmodule(R: QRealization, start=None) -> QWeightModule:
    """Submodule generated by 1 (x) v+ under all generators, as a QWeightModule."""
    spec = R.spec
    ops = R.ops()
    keys = sorted(ops)
    ech = Echelon()
    start = {R.hw: 1} if start is None else start
    queue = [start]
    ech.add(start)
    wts = [R.weight(next(iter(start)))]
    while queue:
        v = queue.pop(0)
        for ab in keys:
            w = ops[ab].apply(v)
            if w and ech.add(w) is not None:
                queue.append(w)
                wts.append(R.weight(next(iter(w))))
    basis = ech.basis
    n = len(basis)
    action = {}
    for ab in keys:
        cols = {}
        for t, v in enumerate(basis):
            c = ech.coords(ops[ab].apply(v))
            if c is None:
                raise ValueError("closure is not invariant under E%s" % (ab,))
            if c:
                cols[t] = c
        action[ab] = SuperOperator(n, n, cols, ops[ab].parity)
    par = [R.parity(next(iter(v))) for v in basis]
    labels = [R.label(min(v)) for v in basis]
    lam = R.lam if R.lam is not None else wts[0]
    M = QWeightModule(spec, lam, wts, par, action, labels, hw=0, kind="q-closure")
    M.vectors = basis
    M.max_degree = max((R.degree(k) for v in basis for k in v), default=0)
    return M


# ---------------------------------------------------------------------------
# the projective patch
# ---------------------------------------------------------------------------

class _PatchOps:
    """Elementary operators on Lambda[Z]_L."""

    def __init__(self, spec, space):
        self.spec = spec
        self.S = space
        self._c = {}

    def Z(self, a):
        key = ("Z", a)
        if key not in self._c:
            self._c[key] = multiplication_operator(self.S, a - 1)
        return self._c[key]

    def nabla(self, a):
        key = ("D", a)
        if key not in self._c:
            self._c[key] = difference_operator(self.S, a - 1)
        return self._c[key]

    def qd(self, powers):
        """prod_a q^{p_a d_a} for powers {a: p_a} (a in 1..N-1)."""
        return scaling_operator(self.S, {a - 1: p for a, p in powers.items() if p})

    def qa_d(self, a, e):
        """q_a^{e d_a}."""
        return self.qd({a: qsign(self.spec, a) * e})

    def sum_d(self, e):
        """q_N^{e sum_a d_a}."""
        s = qsign(self.spec, self.spec.size) * e
        return self.qd({a: s for a in range(1, self.spec.size)})


def levi_lowering_sign(spec, a):
    """Sign of the Z_a nabla_{a+1} term of E_{a+1,a} (a + 1 < N)."""
    return -(-1) ** (spec.parity(a + 1) * (spec.parity(a) + 1))


def patch_operators(spec, space, c=0, k=0, levi_only=False, convention="corrected"):
    """
    Generators on Lambda[Z]: K_a = q^c q_a^{-d_a} (a < N), K_N = q_N^{-k} q^c
    prod_a q_N^{d_a}, E_{a,a+1} = -Z_{a+1} nabla_a, E_{a+1,a} = s Z_a nabla_{a+1}
    (a+1 < N), E_{N-1,N} = -nabla_{N-1},
    E_{N,N-1} = -(-1)^{[N-1]} Z_{N-1} (q^-c K_N - q^c K_N^-1) / (q_N - q_N^-1).
    convention="printed" omits the (-1)^{[N-1]} (wrong for n >= 2).
    """
    if convention not in PATCH_CONVENTIONS:
        raise ValueError("unknown convention %r" % convention)
    N = spec.size
    P = _PatchOps(spec, space)
    E, F, K = {}, {}, {}
    qc = qpow(c)
    for a in range(1, N):
        K[(a, 1)] = P.qa_d(a, -1).scale(qc)
        K[(a, -1)] = P.qa_d(a, 1).scale(qpow(-c))
    sN = qsign(spec, N)
    K[(N, 1)] = P.sum_d(1).scale(qpow(c - sN * k))
    K[(N, -1)] = P.sum_d(-1).scale(qpow(-c + sN * k))
    for a in range(1, N - 1):
        E[a] = -(P.Z(a + 1) @ P.nabla(a))
        F[a] = (P.Z(a) @ P.nabla(a + 1)).scale(levi_lowering_sign(spec, a))
        E[a].parity = F[a].parity = spec.root_parity(a)
    if not levi_only and N >= 2:
        E[N - 1] = -P.nabla(N - 1)
        d = (_q_a(spec, N) - _q_a(spec, N, -1)).inverse()
        inner = K[(N, 1)].scale(qpow(-c)) - K[(N, -1)].scale(qc)
        if convention == "corrected" and spec.parity(N - 1):
            d = -d
        F[N - 1] = -(P.Z(N - 1) @ inner).scale(d)
        E[N - 1].parity = F[N - 1].parity = spec.root_parity(N - 1)
    return E, F, K


def realize_patch(spec: AlgebraSpec, c=0, k=0, convention="corrected") -> QRealization:
    """Difference-operator module on polynomials of degree <= k in the patch coordinates."""
    if k < 0:
        raise ValueError("degree k must be nonnegative")
    space = patch_space(spec, k)
    E, F, K = patch_operators(spec, space, c, k, convention=convention)
    return QRealization(spec, None, space, None, E, F, K, "patch", L=k, convention=convention,
                        params={"c": c, "k": k})


def central_eigenvalue(R: QRealization):
    """Eigenvalue of prod_a K_a^{(-1)^[a]} if it acts as a scalar, else None."""
    spec = R.spec
    op = SuperOperator.identity(R.dim)
    for a in spec.indices:
        op = op @ R.K[(a, qsign(spec, a))]
    vals = {op.cols.get(k, {}).get(k) for k in range(R.dim)}
    if len(vals) != 1 or any(len(op.cols.get(k, {})) != 1 for k in range(R.dim)):
        return None
    return vals.pop()


def singular_vectors(R: QRealization):
    """Basis of the common kernel of the raising generators."""
    cols = {}
    for k in range(R.dim):
        v = {}
        for a, X in R.E.items():
            for i, c in X.cols.get(k, {}).items():
                v[(a, i)] = c
        cols[k] = v
    return kernel(cols, R.dim)


def is_irreducible(R: QRealization):
    """Cyclic from the highest-weight vector with no other singular vectors."""
    sing = singular_vectors(R)
    return len(sing) == 1 and R.closure_module().dim == R.dim


# ---------------------------------------------------------------------------
# tensor operators y_a and O
# ---------------------------------------------------------------------------

def y_scalar_exponent(spec, a, convention="corrected"):
    """
    Exponent of the scalar q-power in y_a: sum_{b=a+1}^{N-1} (-1)^{[b]}.
    convention="printed" gives -sum (-1)^{[b+1]}; the two agree only when
    every b in range has [b] = 0 and [b+1] = 1 or the range is empty.
    """
    if convention == "printed":
        return -sum(qsign(spec, b + 1) for b in range(a + 1, spec.size))
    return sum(qsign(spec, b) for b in range(a + 1, spec.size))


def tensor_operators_y(spec, space, convention="corrected"):
    """y_a = (-1)^{[a]+1} Z_a q^{sum_{b>a} ((-1)^{[b]} - d_b)}, a = 1..N-1."""
    N = spec.size
    P = _PatchOps(spec, space)
    out = {}
    for a in range(1, N):
        s = 1 if spec.parity(a) else -1
        sc = P.qd({b: -1 for b in range(a + 1, N)})
        op = (P.Z(a) @ sc).scale(qpow(y_scalar_exponent(spec, a, convention)) * s)
        op.parity = 1 - spec.parity(a)
        out[a] = op
    return out


def z_tilde(spec, space, convention="corrected"):
    """tilde Z_a = q^{sum_{b>a} (-1)^{[b]}} Z_a."""
    P = _PatchOps(spec, space)
    out = {}
    for a in range(1, spec.size):
        op = P.Z(a).scale(qpow(y_scalar_exponent(spec, a, convention)))
        op.parity = 1 - spec.parity(a)
        out[a] = op
    return out


def _root_N(V: QWeightModule, a):
    N = V.spec.size
    X = V.op(a, N)
    X.parity = V.spec.pair_parity(a, N)
    return X


def operator_O(spec, space, V: QWeightModule, sign="odd-index", convention="corrected"):
    """O = sum_a s_a y_a (x) E_{a,N} on Lambda[Z]_L (x) V; s_a = (-1)^{[a]+1}."""
    ys = tensor_operators_y(spec, space, convention)
    total = SuperOperator.zero(space.dim * V.dim)
    for a, y in ys.items():
        s = (1 if spec.parity(a) else -1) if sign == "odd-index" else -1
        total = total + tensor(y, _root_N(V, a), space.parity).scale(s)
    total.parity = 0
    return total


def operator_O_parts(spec, space, V: QWeightModule, convention="corrected"):
    """O_a = tilde Z_a (x) E_{a,N}, a = 1..N-1."""
    zt = z_tilde(spec, space, convention)
    out = {}
    for a, z in zt.items():
        op = tensor(z, _root_N(V, a), space.parity)
        op.parity = 0
        out[a] = op
    return out


def evaluate_pair(t: uq.Tensor2, left: QRealization, V: QWeightModule):
    """(Upsilon (x) pi_V)(t) on Lambda[Z] (x) V."""
    n = left.dim * V.dim
    total = SuperOperator.zero(n)
    spec = t.spec
    for (w1, w2), c in t.terms.items():
        A = uq.evaluate(uq.Element(spec, {w1: 1}), left)
        B = uq.evaluate(uq.Element(spec, {w2: 1}), V)
        if A.is_zero() or B.is_zero():
            continue
        A.parity = uq.word_parity(spec, w1)
        B.parity = uq.word_parity(spec, w2)
        total = total + tensor(A, B, left.space.parity).scale(c)
    return total


def upsilon(spec, space) -> QRealization:
    """The Levi-subalgebra operators (c = k = 0) on Lambda[Z]_L."""
    E, F, K = patch_operators(spec, space, 0, 0, levi_only=True)
    return QRealization(spec, None, space, None, E, F, K, "upsilon", L=space.L)


def commutant_violations(spec, V: QWeightModule, L=None, sign="odd-index", O=None,
                         convention="corrected"):
    """Levi generators u with [(Upsilon (x) id) Delta'(u), O] != 0."""
    if L is None:
        L = max_level(V) + 1
    space = patch_space(spec, L)
    Y = upsilon(spec, space)
    if O is None:
        O = operator_O(spec, space, V, sign, convention)
    bad = []
    for name, u in uq.levi_generators(spec):
        D = evaluate_pair(uq.opposite_coproduct(u), Y, V)
        if not (D @ O - O @ D).is_zero():
            bad.append(name)
    return bad


def max_level(V: QWeightModule):
    N = V.spec.size
    top = V.lam[N - 1]
    return max(int(w[N - 1] - top) for w in V.weights)


def is_nilpotent(O: SuperOperator):
    P = O
    for _ in range(O.n_in + 1):
        if P.is_zero():
            return True
        P = O @ P
    return P.is_zero()


def q_exp_factorization(spec, V: QWeightModule, L=None, convention="corrected"):
    """
    Compare exp_q(O)(1 (x) v) with exp_q(O_1) ... exp_q(O_{N-1})(1 (x) v) for
    every basis vector v; also the binomial expansion of the powers of
    O = O'(q^{-d_{N-1}} (x) 1) + Z_{N-1} (x) E_{N-1,N} and the q-commutation
    O'(Z_{N-1} (x) E_{N-1,N}) = q^{-1} (Z_{N-1} (x) E_{N-1,N}) O'.
    """
    N = spec.size
    if L is None:
        L = max_level(V) + 1
    space = patch_space(spec, L)
    O = operator_O(spec, space, V, convention=convention)
    parts = operator_O_parts(spec, space, V, convention)
    one = space.one()
    d = V.dim
    report = {"factorization": [], "binomial": [], "q_commutation": True, "nilpotent": is_nilpotent(O)}
    for j in range(d):
        v = {one * d + j: 1}
        lhs = q_exp_apply(O, v)
        rhs = v
        for a in range(N - 1, 0, -1):
            rhs = q_exp_apply(parts[a], rhs)
        if lhs != rhs:
            report["factorization"].append(j)
    # O = O' (q^{-d_{N-1}} (x) 1) + Z_{N-1} (x) E_{N-1,N}
    P = _PatchOps(spec, space)
    ys = tensor_operators_y(spec, space, convention)
    Op = SuperOperator.zero(space.dim * d)
    for a in range(1, N - 1):
        s = 1 if spec.parity(a) else -1
        Op = Op + tensor(ys[a] @ P.qd({N - 1: 1}), _root_N(V, a), space.parity).scale(s)
    Op.parity = 0
    zE = tensor(P.Z(N - 1), _root_N(V, N - 1), space.parity)
    zE.parity = 0
    shift = tensor(P.qd({N - 1: -1}), SuperOperator.identity(d), space.parity)
    if not (Op @ shift + zE - O).is_zero():
        report["q_commutation"] = False
    if not (Op @ zE - zE.scale(qpow(-1)) @ Op).is_zero():
        report["q_commutation"] = False
    for j in range(d):
        v = {one * d + j: 1}
        power = v
        for k in range(1, L + 1):
            power = O.apply(power)
            rhs = {}
            zl = v
            for l in range(0, k + 1):
                if l:
                    zl = zE.apply(zl)
                term = zl
                for _ in range(k - l):
                    term = Op.apply(term)
                coef = q_factorial(k) * (q_factorial(k - l) * q_factorial(l)).inverse()
                for key, x in term.items():
                    y = rhs.get(key)
                    y = coef * x if y is None else y + coef * x
                    if y:
                        rhs[key] = y
                    else:
                        rhs.pop(key, None)
            if power != rhs:
                report["binomial"].append((j, k))
    report["ok"] = (not report["factorization"] and not report["binomial"]
                    and report["q_commutation"] and report["nilpotent"])
    return report


# ---------------------------------------------------------------------------
# coherent states
# ---------------------------------------------------------------------------

def level_zero_qmodule(V: QWeightModule) -> QWeightModule:
    """Top K_N-eigenspace of V as a module over the Levi subalgebra (basis inherited)."""
    from .vcs_classical import level_zero_module
    W = level_zero_module(V)
    M = QWeightModule(V.spec, V.lam, W.weights, W.parities, W.action, W.labels, hw=W.hw,
                      kind="q-level-zero")
    M.embedding = W.embedding
    return M


class CoherentStateMap:
    """
    w -> Xi_w in Lambda[Z]_L (x) V0, V0 = top K_N-eigenspace of V.

    sign_rule="koszul" takes the components <v^i| exp_q(O)(1 (x) w)> (x) v^i
    as they are; this intertwines with the Koszul-signed operators of
    ``bbw_operators``.  sign_rule="printed" multiplies by
    (-1)^{[v^i](1+[w])} = (-1)^{[f][v^i]} on each component f (x) v^i, which
    is the conversion to the unsigned tensor convention and so breaks
    intertwining here whenever V0 has odd vectors.
    """

    def __init__(self, spec, V: QWeightModule, L, V0: QWeightModule = None, sign_rule="koszul",
                 convention="corrected"):
        self.spec = spec
        self.V = V
        self.V0 = V0 if V0 is not None else level_zero_qmodule(V)
        self.L = L
        self.space = patch_space(spec, L)
        self.O = operator_O(spec, self.space, V, convention=convention)
        self.pos = {k: t for t, k in enumerate(self.V0.embedding)}
        self.sign_rule = sign_rule

    def __call__(self, w):
        d, d0 = self.V.dim, self.V0.dim
        pars = {self.V.parities[k] for k in w}
        if len(pars) > 1:
            raise ValueError("coherent states are defined for homogeneous vectors")
        pw = pars.pop() if pars else 0
        one = self.space.one()
        g = q_exp_apply(self.O, {one * d + k: c for k, c in w.items()})
        out = {}
        for key, c in g.items():
            i, j = divmod(key, d)
            t = self.pos.get(j)
            if t is None:
                continue
            s = -1 if (self.sign_rule == "printed" and self.V0.parities[t] and not pw) else 1
            out[i * d0 + t] = c if s > 0 else -c
        return out


def intertwining_violations(R: QRealization, xi: CoherentStateMap, gens=None):
    """Generators u (letters) with pi(u) Xi_w != Xi_{u w} for some basis w."""
    V = xi.V
    bad = []
    N = R.spec.size
    letters = gens or ([("E", a) for a in range(1, N)] + [("F", a) for a in range(1, N)]
                       + [("K", a, 1) for a in range(1, N + 1)])
    for x in letters:
        P = R.letter(x)
        X = V.letter(x)
        for k in range(V.dim):
            lhs = P.apply(xi({k: 1}))
            img = X.cols.get(k, {})
            # split the image into homogeneous parts (it is homogeneous)
            rhs = xi(img) if img else {}
            if lhs != rhs:
                bad.append((x, k))
                break
    return bad


# ---------------------------------------------------------------------------
# the full realization on Lambda[Z]_L (x) V0
# ---------------------------------------------------------------------------

def bbw_operators(spec, space, V0: QWeightModule, convention="corrected"):
    """Generators on Lambda[Z]_L (x) V0 (see module docstring)."""
    if convention not in BBW_CONVENTIONS:
        raise ValueError("unknown convention %r" % convention)
    N = spec.size
    P = _PatchOps(spec, space)
    d0 = V0.dim
    spar = space.parity

    def T(A, B, pa=None):
        if B.parity is None:
            B.parity = 0
        out = tensor(A, B, spar)
        return out

    def pi0(x):
        return V0.letter(x)

    I0 = SuperOperator.identity(d0)
    E, F, K = {}, {}, {}
    for b in range(1, N):
        K[(b, 1)] = T(P.qa_d(b, -1), pi0(("K", b, 1)))
        K[(b, -1)] = T(P.qa_d(b, 1), pi0(("K", b, -1)))
    K[(N, 1)] = T(P.sum_d(1), V0.K(N, 1))
    K[(N, -1)] = T(P.sum_d(-1), V0.K(N, -1))
    for a in range(1, N - 1):
        ea = -(P.Z(a + 1) @ P.nabla(a))
        ea.parity = spec.root_parity(a)
        kk = P.qd({a: -qsign(spec, a), a + 1: qsign(spec, a + 1)})
        E[a] = T(ea, I0) + T(kk, pi0(("E", a)))
        if convention == "printed":
            fa = -(P.Z(a) @ P.nabla(a + 1))       # wrong sign at a = m
        else:
            fa = (P.Z(a) @ P.nabla(a + 1)).scale(levi_lowering_sign(spec, a))
        fa.parity = spec.root_parity(a)
        kinv = V0.K(a, -1) @ V0.K(a + 1, 1)
        F[a] = T(fa, kinv) + T(SuperOperator.identity(space.dim), pi0(("F", a)))
        E[a].parity = F[a].parity = spec.root_parity(a)
    E[N - 1] = T(P.nabla(N - 1), I0)
    E[N - 1].parity = spec.root_parity(N - 1)
    # E_{N,N-1}
    z = P.Z(N - 1)
    dq = (_q_a(spec, N - 1) - _q_a(spec, N - 1, -1)).inverse()
    t1 = T(z, V0.K(N - 1, 1)) @ K[(N, -1)]
    t2 = T(z, V0.K(N - 1, -1)) @ K[(N, 1)]
    total = (t1 - t2).scale(dq)
    zt = z_tilde(spec, space, convention)
    sN = qsign(spec, N)
    # constant factor q_{N-1}^-1; printed q_N^-1 differs when n = 1
    const = _q_a(spec, N if convention == "printed" else N - 1, -1)
    for a in range(1, N - 1):
        sc = P.qd({b: -sN for b in range(1, a + 1)})
        left_op = (zt[a] @ sc).scale(const)
        root = V0.op(a, N - 1) @ V0.K(N - 1, 1) @ V0.K(N, -1)
        root.parity = spec.pair_parity(a, N - 1)
        total = total + T(left_op, root)
    F[N - 1] = total
    F[N - 1].parity = spec.root_parity(N - 1)
    return E, F, K


def _as_levi_module(spec, M: QWeightModule, lamN):
    """A U_q(gl(m|n-1)) module viewed as a module over the Levi part of U_q(gl(m|n))."""
    N = spec.size
    weights = [tuple(w) + (lamN,) for w in M.weights]
    lam = tuple(M.lam) + (lamN,)
    out = QWeightModule(spec, lam, weights, M.parities, dict(M.action), M.labels, hw=M.hw,
                        kind="q-levi")
    return out


def build_bbw_V0(spec: AlgebraSpec, lam, convention="corrected"):
    """
    V0 for the BBW realization: irreducible module of highest weight
    (lam_1..lam_{N-1}) for U_q(gl(m|n-1)), itself built by the BBW
    realization, down to U_q(gl(m)) (lowering closure); K_N acts by q_N^{lam_N}.
    """
    N = spec.size
    lam = tuple(lam)
    if spec.n <= 1:
        sub = AlgebraSpec(spec.m, 0) if spec.m else None
        if sub is None or spec.m == 0:
            raise ValueError("need m >= 1")
        if spec.m == 1:
            M = QWeightModule(sub, lam[:1], [lam[:1]], [0], {}, ["v+"], hw=0, kind="q-trivial")
        else:
            M = uq.build_uq_highest_weight(sub, lam[:N - 1], list(range(1, spec.m)))
        return _as_levi_module(spec, M, lam[N - 1])
    sub = AlgebraSpec(spec.m, spec.n - 1)
    R = realize_bbw(sub, lam[:N - 1], convention=convention)
    M = R.closure_module()
    M.lam = tuple(lam[:N - 1])
    return _as_levi_module(spec, M, lam[N - 1])


def initial_degree(spec, lam):
    m, n = spec.m, spec.n
    N = spec.size
    if n >= 2:
        x = _num(lam[N - 2]) - _num(lam[N - 1])
        if x >= 0 and getattr(x, "denominator", 1) == 1:
            return int(x) + m
    return m


def realize_bbw(spec: AlgebraSpec, lam, L=None, V0=None, convention="corrected", max_L=60) -> QRealization:
    """
    Operators on Lambda[Z]_L (x) V0 realizing the irreducible module of
    highest weight lam on the closure of 1 (x) v+.  Without an explicit L,
    L grows until the closure stays strictly below the cap.
    """
    check_dominant(spec, lam)
    lam = tuple(_num(x) for x in lam)
    uq._check_integral(lam)
    if V0 is None:
        V0 = build_bbw_V0(spec, lam, convention)
    gens = GeneratorSet.projective(spec.m, spec.n)
    adaptive = L is None
    L = initial_degree(spec, lam) if adaptive else L
    while True:
        space = SuperSpace(gens, L)
        E, F, K = bbw_operators(spec, space, V0, convention)
        R = QRealization(spec, lam, space, V0, E, F, K, "bbw", L=L, convention=convention)
        if not adaptive or R.full_space():
            return R
        C = R.closure_module()
        if C.max_degree < L:
            return R
        if L >= max_L:
            raise ValueError("closure still reaches degree %d; raise max_L" % L)
        L = min(max_L, max(L + 1, 2 * L))


def verify_qrealization(R: QRealization, oracle: QWeightModule = None):
    """Relation suite on exact columns, closure vs oracle, highest weight."""
    spec = R.spec
    cols = R.exact_columns(2)
    bad = []
    for name, r in uq.defining_relations(spec):
        if any(not R.has_letter(x) for w in r.terms for x in w):
            continue
        op = uq.evaluate(r, R)
        if cols is not None:
            op = op.restrict_columns(cols)
        if not op.is_zero():
            bad.append(name)
    out = {"kind": R.kind, "convention": R.convention, "violations": bad}
    if R.lam is not None:
        C = R.closure_module()
        if oracle is None:
            oracle = uq.build_uq_irrep(spec, R.lam, route="kac")
        out["closure_dim"] = C.dim
        out["oracle_dim"] = oracle.dim
        out["character_equal"] = character(C) == character(oracle)
        out["highest_weight_ok"] = (R.weight(R.hw) == tuple(R.lam)
                                    and all(not X.cols.get(R.hw) for X in R.E.values()))
        out["closure_max_degree"] = C.max_degree
        out["ok"] = (not bad and out["character_equal"] and out["highest_weight_ok"]
                     and C.dim == oracle.dim)
    else:
        out["ok"] = not bad
    return out


def mutate(R: QRealization, letter, op: SuperOperator) -> QRealization:
    """Copy of R with one generator replaced (fault injection)."""
    E, F, K = dict(R.E), dict(R.F), dict(R.K)
    if letter[0] == "E":
        E[letter[1]] = op
    elif letter[0] == "F":
        F[letter[1]] = op
    else:
        K[(letter[1], letter[2])] = op
    return QRealization(R.spec, R.lam, R.space, R.V0, E, F, K, R.kind, R.L, R.convention, R.params)


# ---------------------------------------------------------------------------
# auxiliary exp_q identities
# ---------------------------------------------------------------------------

def auxiliary_identities(spec, V: QWeightModule, L=None, drop_factor=False, convention="corrected"):
    """
    On Lambda[Z]_L (x) V, with O_a = tilde Z_a (x) E_{a,N} and p = q_{N-1}:
      [exp_q(O_{N-1}), 1 (x) E_{N,N-1}]
        = ((z (x) K_{N-1}) exp_q(O_{N-1}) (1 (x) K_N^-1)
           - (z (x) K_{N-1}^-1) exp_q(O_{N-1}) (1 (x) K_N)) / (p - p^-1)
      [exp_q(O_a), 1 (x) E_{N,N-1}]
        = (tilde Z_a p^-1 (x) E_{a,N-1}) exp_q(O_a) (1 (x) K_{N-1} K_N^-1),  a < N-1.
    convention="printed" uses p = q_N, which differs only when n = 1.
    Checked on columns where no truncation occurs.  ``drop_factor`` removes
    the p^-1 factor (fault injection).  Returns {identity: ok}.
    """
    N = spec.size
    if L is None:
        L = max_level(V) + 2
    space = patch_space(spec, L)
    d = V.dim
    spar = space.parity
    P = _PatchOps(spec, space)
    parts = operator_O_parts(spec, space, V, convention)
    Id = SuperOperator.identity(space.dim)

    def one(B):
        return tensor(Id, B, spar)

    FN = V.letter(("F", N - 1))
    lower = one(FN)
    top = max_level(V)
    cols = [i * d + j for i in range(space.dim) for j in range(d)
            if space.degree[i] + top + 1 <= L]
    out = {}
    exps = {a: q_exp_operator(O) for a, O in parts.items()}
    z = P.Z(N - 1)
    e = exps[N - 1]
    lhs = (e @ lower - lower @ e).restrict_columns(cols)
    p = N if convention == "printed" else N - 1
    dq = (_q_a(spec, p) - _q_a(spec, p, -1)).inverse()
    r1 = tensor(z, V.K(N - 1, 1), spar) @ e @ one(V.K(N, -1))
    r2 = tensor(z, V.K(N - 1, -1), spar) @ e @ one(V.K(N, 1))
    rhs = (r1 - r2).scale(dq).restrict_columns(cols)
    out["[exp_q(O_%d), E_%d,%d]" % (N - 1, N, N - 1)] = (lhs - rhs).is_zero()
    zt = z_tilde(spec, space, convention)
    for a in range(1, N - 1):
        e = exps[a]
        lhs = (e @ lower - lower @ e).restrict_columns(cols)
        Ea = V.op(a, N - 1)
        Ea.parity = spec.pair_parity(a, N - 1)
        zq = zt[a] if drop_factor else zt[a].scale(_q_a(spec, p, -1))
        zq.parity = zt[a].parity
        rhs = (tensor(zq, Ea, spar) @ e @ one(V.K(N - 1, 1) @ V.K(N, -1))).restrict_columns(cols)
        out["[exp_q(O_%d), E_%d,%d]" % (a, N, N - 1)] = (lhs - rhs).is_zero()
    return out
