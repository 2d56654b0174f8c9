"""
Highest-weight machinery shared by the classical and quantum modules.

Two independent constructions live here:

* ``lowering_closure`` builds an irreducible highest-weight module directly.
  A vector of weight mu is identified with the list of its images under the
  simple raising operators; in an irreducible module this map is injective
  below the top, so candidates f_i b can be compared without ever forming
  a bigger module.

* ``radical_quotient`` takes any cyclic highest-weight module (a Kac module,
  a parabolically induced module, a closure inside a realization) and
  divides out the radical of its contravariant form, computed weight space
  by weight space: v lies in the radical iff every e_j v does.

``gram_ranks`` is the brute-force oracle for the second one.
"""

from __future__ import annotations

from collections import defaultdict

from .linalg import Echelon, kernel as _kernel, rank, vadd
from .superalg import SuperOperator


class NotFiniteError(ValueError):
    """Raised when a closure keeps growing past its depth cap."""


def simple_coordinates(lam, mu):
    """Coefficients c_i of lam - mu = sum c_i alpha_i (alpha_i = eps_i - eps_{i+1})."""
    out = []
    acc = 0
    for a in range(len(lam) - 1):
        acc += lam[a] - mu[a]
        out.append(acc)
    return tuple(out)


def height(lam, mu):
    return sum(simple_coordinates(lam, mu))


def shift(mu, i, sign):
    """mu + sign * alpha_i for the simple root alpha_i = eps_i - eps_{i+1} (0-based i)."""
    mu = list(mu)
    mu[i] += sign
    mu[i + 1] -= sign
    return tuple(mu)


class HWModuleData:
    """Plain output of the builders: weights, parities and simple generator matrices."""

    def __init__(self, lam, weights, parities, E, F, hw=0):
        self.lam = tuple(lam)
        self.weights = weights
        self.parities = parities
        self.E = E          # simple index i -> SuperOperator
        self.F = F
        self.hw = hw

    @property
    def dim(self):
        return len(self.weights)


def lowering_closure(lam, simple, hval, depth_cap=200):
    """
    Irreducible highest-weight module of weight ``lam``.

    ``simple`` is a list of (i, parity) for the simple roots that generate
    the algebra (0-based i, root eps_i - eps_{i+1}); ``hval(i, mu)`` is the
    scalar by which [e_i, f_i} acts on weight mu.  Returns HWModuleData.
    """
    lam = tuple(lam)
    par = dict(simple)
    weights = [lam]
    parities = [0]
    E = {i: {} for i, _ in simple}       # i -> {basis col: sparse vec}
    F = {i: {} for i, _ in simple}
    layer = [0]
    depth = 0
    while layer:
        depth += 1
        if depth > depth_cap:
            raise NotFiniteError("highest-weight closure exceeded depth %d" % depth_cap)
        # candidates grouped by target weight
        groups = defaultdict(list)
        for b in layer:
            nu = weights[b]
            for i, _ in simple:
                groups[shift(nu, i, -1)].append((i, b))
        new_layer = []
        for mu in sorted(groups):
            ech = Echelon()
            owners = []
            for i, b in groups[mu]:
                nu = weights[b]
                sig = {}
                images = {}
                for j, pj in simple:
                    # e_j f_i b = (-1)^{p_i p_j} f_i e_j b + delta_ij h_i(nu) b
                    img = {}
                    ejb = E[j].get(b, {})
                    s = -1 if (par[i] and pj) else 1
                    for l, c in ejb.items():
                        img = vadd(img, F[i].get(l, {}), s * c)
                    if i == j:
                        h = hval(i, nu)
                        if h:
                            img = vadd(img, {b: h})
                    images[j] = img
                    for l, c in img.items():
                        sig[(j, l)] = c
                if not sig:
                    # a singular vector below the top is zero in the irreducible module
                    F[i][b] = {}
                    continue
                c = ech.coords(sig)
                if c is None:
                    k = len(weights)
                    ech.add(sig)
                    owners.append(k)
                    weights.append(mu)
                    parities.append((parities[b] + par[i]) & 1)
                    for j, img in images.items():
                        if img:
                            E[j][k] = img
                    F[i][b] = {k: 1}
                    new_layer.append(k)
                else:
                    F[i][b] = {owners[r]: x for r, x in c.items()}
        layer = new_layer
    n = len(weights)
    Eop = {i: SuperOperator(n, n, {k: v for k, v in E[i].items() if v}, par[i]) for i, _ in simple}
    Fop = {i: SuperOperator(n, n, {k: v for k, v in F[i].items() if v}, par[i]) for i, _ in simple}
    return HWModuleData(lam, weights, parities, Eop, Fop)


class RadicalQuotient:
    """
    Quotient of a cyclic highest-weight module by the radical of its
    contravariant form.

    ``weights`` lists the weight of every basis vector of the big module,
    ``raising`` maps simple index j to the matrix of e_j.  Weight spaces of
    height greater than ``max_height`` are ignored (used for truncated
    induced modules).
    """

    def __init__(self, lam, weights, hw, raising, max_height=None):
        self.lam = tuple(lam)
        by_weight = defaultdict(list)
        for k, w in enumerate(weights):
            by_weight[tuple(w)].append(k)
        order = sorted(by_weight, key=lambda w: (height(self.lam, w), w), reverse=False)
        self.qc = {}            # basis index -> quotient coordinates {rep position: c}
        self.reps = []          # chosen basis indices of the big module
        self.rep_weight = []
        self.kernel = {}        # weight -> list of radical basis vectors
        self.heights = {}
        self.complete_to = None
        for mu in order:
            h = height(self.lam, mu)
            if max_height is not None and h > max_height:
                continue
            idx = by_weight[mu]
            self.heights[mu] = h
            if mu == self.lam:
                if idx != [hw]:
                    raise ValueError("highest weight space must be spanned by the highest-weight vector")
                pos = len(self.reps)
                self.reps.append(hw)
                self.rep_weight.append(mu)
                self.qc[hw] = {pos: 1}
                self.kernel[mu] = []
                continue
            sigs = []
            for k in idx:
                sig = {}
                for j, Ej in raising.items():
                    for l, c in Ej.cols.get(k, {}).items():
                        for r, x in self.qc.get(l, {}).items():
                            key = (j, r)
                            y = sig.get(key)
                            y = c * x if y is None else y + c * x
                            if y:
                                sig[key] = y
                            else:
                                sig.pop(key, None)
                sigs.append(sig)
            ech = Echelon()
            local = []
            for k, sig in zip(idx, sigs):
                if sig and ech.add(sig) is not None:
                    pos = len(self.reps)
                    self.reps.append(k)
                    self.rep_weight.append(mu)
                    local.append(pos)
            ker = []
            for k, sig in zip(idx, sigs):
                c = ech.coords(sig) if sig else {}
                self.qc[k] = {local[r]: x for r, x in c.items()}
            # radical basis of this weight space: kernel of k -> qc[k]
            cols = {t: self.qc[k] for t, k in enumerate(idx)}
            for v in _kernel(cols, len(idx)):
                ker.append({idx[t]: c for t, c in v.items()})
            self.kernel[mu] = ker

    @property
    def dim(self):
        return len(self.reps)

    def project(self, v):
        """Quotient coordinates of a vector of the big module."""
        out = {}
        for k, c in v.items():
            for r, x in self.qc.get(k, {}).items():
                y = out.get(r)
                y = c * x if y is None else y + c * x
                if y:
                    out[r] = y
                else:
                    out.pop(r, None)
        return out

    def induced(self, op: SuperOperator) -> SuperOperator:
        """Matrix of op on the quotient (op must preserve the radical)."""
        n = len(self.reps)
        cols = {}
        for pos, k in enumerate(self.reps):
            v = self.project(op.cols.get(k, {}))
            if v:
                cols[pos] = v
        return SuperOperator(n, n, cols, op.parity)

    def radical_is_invariant(self, ops):
        """True iff every op maps every radical vector into the radical."""
        for vecs in self.kernel.values():
            for v in vecs:
                for op in ops:
                    if self.project(op.apply(v)):
                        return False
        return True


def gram_ranks(lam, weights, hw, raising, lowering, max_height):
    """
    Brute-force contravariant form: for every weight of height <= max_height,
    span the weight space by all lowering words f_{i1}...f_{ik} v+ and return
    the rank of the Gram matrix <u v+, w v+> (coefficient of v+ in
    e_{ik}...e_{i1} w v+).  Independent oracle for RadicalQuotient.
    """
    lam = tuple(lam)
    simple = sorted(lowering)
    words = {(): {hw: 1}}
    frontier = {(): {hw: 1}}
    by_weight = defaultdict(list)
    by_weight[lam].append(())
    for depth in range(1, max_height + 1):
        nxt = {}
        for w, v in frontier.items():
            for i in simple:
                u = lowering[i].apply(v)
                if u:
                    nxt[w + (i,)] = u
        words.update(nxt)
        for w in nxt:
            mu = lam
            for i in w:
                mu = shift(mu, i, -1)
            by_weight[mu].append(w)
        frontier = nxt
    ranks = {}
    for mu, ws in by_weight.items():
        rows = []
        for u in ws:
            row = {}
            for t, w in enumerate(ws):
                # u v+ = f_{uk}...f_{u1} v+, so omega(u) = e_{u1}...e_{uk}: e_{uk} acts first
                vec = words[w]
                for i in reversed(u):
                    vec = raising[i].apply(vec)
                    if not vec:
                        break
                c = vec.get(hw, 0)
                if c:
                    row[t] = c
            rows.append(row)
        ranks[mu] = rank(rows)
    return ranks
