"""
Truncated polynomial superalgebras and parity-graded sparse operators.

A SuperSpace is the span of all monomials of degree <= L in a list of even
(commuting) and odd (Grassmann) generators.  Monomials are exponent tuples
in generator order; odd exponents are 0 or 1.  The algebra multiplies
without truncation, and a SuperSpace drops everything above degree L.

SuperOperator is a column-sparse matrix.  It is used for every realized
generator in the package, both on SuperSpaces and on their tensor products
with modules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .qfield import QScalar, q_factorial, q_int, qpow

__all__ = [
    "GeneratorSet",
    "SuperMonomial",
    "SuperSpace",
    "SuperOperator",
    "TensorSpace",
    "monomial_product",
    "derivative_operator",
    "difference_operator",
    "scaling_operator",
    "multiplication_operator",
    "super_commutator",
    "q_exp_operator",
    "tensor",
]


# ---------------------------------------------------------------------------
# generators and monomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorSet:
    """Ordered generators with parities (1 = odd); odd ones come first."""

    names: tuple
    parities: tuple

    def __post_init__(self):
        if len(self.names) != len(self.parities):
            raise ValueError("names and parities differ in length")
        if any(p not in (0, 1) for p in self.parities):
            raise ValueError("parity must be 0 or 1")

    def __len__(self):
        return len(self.names)

    @property
    def odd_count(self):
        return sum(self.parities)

    @property
    def even_count(self):
        return len(self.parities) - self.odd_count

    def index(self, name):
        return self.names.index(name)

    @classmethod
    def projective(cls, m, n):
        """Affine patch coordinates Z_a, a = 1..m+n-1: theta_i (i <= m), z_mu."""
        names = tuple("θ%d" % a for a in range(1, m + 1)) + \
            tuple("z%d" % a for a in range(m + 1, m + n))
        return cls(names, (1,) * m + (0,) * (n - 1))

    @classmethod
    def kac(cls, m, n):
        """Grassmann coordinates theta_{mu i}, ordered by (mu, i)."""
        names = tuple("θ%d,%d" % (mu, i) for mu in range(m + 1, m + n + 1)
                      for i in range(1, m + 1))
        return cls(names, (1,) * (m * n))


@dataclass(frozen=True)
class SuperMonomial:
    """A monomial as an exponent tuple over a GeneratorSet."""

    gens: GeneratorSet
    exps: tuple

    def __post_init__(self):
        for p, e in zip(self.gens.parities, self.exps):
            if e < 0 or (p and e > 1):
                raise ValueError("invalid exponent %r for parity %d" % (e, p))

    @property
    def degree(self):
        return sum(self.exps)

    @property
    def parity(self):
        return monomial_parity(self.gens, self.exps)

    @property
    def odd_part(self):
        return tuple(g for g, p, e in zip(self.gens.names, self.gens.parities, self.exps) if p and e)

    @property
    def even_part(self):
        return {g: e for g, p, e in zip(self.gens.names, self.gens.parities, self.exps) if not p and e}

    def __mul__(self, other):
        r = monomial_product(self.gens, self.exps, other.exps)
        if r is None:
            return 0, None
        s, w = r
        return s, SuperMonomial(self.gens, w)

    def __str__(self):
        return monomial_text(self.gens, self.exps)


def monomial_parity(gens, exps):
    return sum(e for p, e in zip(gens.parities, exps) if p) & 1


def monomial_text(gens, exps):
    parts = ["%s^%d" % (g, e) for g, e in zip(gens.names, exps) if e]
    return " ".join(parts) if parts else "1"


def monomial_product(gens, u, v):
    """
    Product of monomials u*v in canonical order: (sign, exps), or None
    when an odd generator repeats.  The sign counts transpositions of odd
    generators needed to merge v's odd factors into u's.
    """
    sign = 1
    odd_after = 0       # odd generators of u strictly after the current index
    par = gens.parities
    n = len(u)
    # count, for each odd generator in v, the odd generators in u with a larger index
    total_u_odd = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        total_u_odd[i] = total_u_odd[i + 1] + (u[i] if par[i] else 0)
    out = []
    for i in range(n):
        if par[i]:
            if u[i] and v[i]:
                return None
            if v[i] and (total_u_odd[i + 1] & 1):
                sign = -sign
        out.append(u[i] + v[i])
    del odd_after
    return sign, tuple(out)


def _monomials_of_degree(parities, d):
    """All exponent tuples of total degree d (odd exponents <= 1)."""
    n = len(parities)
    out = []

    def rec(i, left, acc):
        if i == n:
            if left == 0:
                out.append(tuple(acc))
            return
        hi = min(left, 1) if parities[i] else left
        for e in range(hi, -1, -1):
            acc.append(e)
            rec(i + 1, left - e, acc)
            acc.pop()

    rec(0, d, [])
    return out


class SuperSpace:
    """Polynomials of degree <= L; basis graded by degree, then lexicographic."""

    def __init__(self, gens: GeneratorSet, L: int):
        if L < 0:
            raise ValueError("truncation degree must be nonnegative")
        self.gens = gens
        self.L = L
        basis = []
        for d in range(L + 1):
            basis.extend(_monomials_of_degree(gens.parities, d))
        self.basis = basis
        self.index = {b: i for i, b in enumerate(basis)}
        self.parity = [monomial_parity(gens, b) for b in basis]
        self.degree = [sum(b) for b in basis]

    def __len__(self):
        return len(self.basis)

    @property
    def dim(self):
        return len(self.basis)

    def monomial(self, i):
        return SuperMonomial(self.gens, self.basis[i])

    def label(self, i):
        return monomial_text(self.gens, self.basis[i])

    def one(self):
        return self.index[(0,) * len(self.gens)]

    def from_map(self, fn, parity=None):
        """Operator sending basis monomial b to sum c*w of fn(b) = {w: c}; w beyond L dropped."""
        cols = {}
        for j, b in enumerate(self.basis):
            col = {}
            for w, c in fn(b).items():
                i = self.index.get(w)
                if i is not None and c:
                    col[i] = col.get(i, 0) + c
            col = {i: c for i, c in col.items() if c}
            if col:
                cols[j] = col
        return SuperOperator(len(self), len(self), cols, parity)


class TensorSpace:
    """SuperSpace (x) module; basis index = i * module_dim + j."""

    def __init__(self, space: SuperSpace, module_parities, module_labels=None):
        self.space = space
        self.mdim = len(module_parities)
        self.mpar = list(module_parities)
        self.mlabels = module_labels

    def __len__(self):
        return len(self.space) * self.mdim

    @property
    def dim(self):
        return len(self)

    def idx(self, i, j):
        return i * self.mdim + j

    def split(self, k):
        return divmod(k, self.mdim)

    def parity(self, k):
        i, j = divmod(k, self.mdim)
        return (self.space.parity[i] + self.mpar[j]) & 1

    def degree(self, k):
        return self.space.degree[k // self.mdim]

    def label(self, k):
        i, j = divmod(k, self.mdim)
        ml = self.mlabels[j] if self.mlabels else "v%d" % j
        return "%s ⊗ %s" % (self.space.label(i), ml)


# ---------------------------------------------------------------------------
# sparse operators
# ---------------------------------------------------------------------------

class SuperOperator:
    """
    Column-sparse linear map.  cols[j] = {i: a_ij}.  ``parity`` is 0/1 for
    homogeneous maps and None when unknown or mixed.
    """

    __slots__ = ("n_in", "n_out", "cols", "parity")

    def __init__(self, n_in, n_out=None, cols=None, parity=None):
        self.n_in = n_in
        self.n_out = n_in if n_out is None else n_out
        self.cols = cols if cols is not None else {}
        self.parity = parity

    # constructors ---------------------------------------------------------

    @classmethod
    def identity(cls, n, one=1):
        return cls(n, n, {j: {j: one} for j in range(n)}, 0)

    @classmethod
    def zero(cls, n_in, n_out=None, parity=0):
        return cls(n_in, n_out, {}, parity)

    @classmethod
    def diagonal(cls, values, parity=0):
        return cls(len(values), len(values), {j: {j: v} for j, v in enumerate(values) if v}, parity)

    @classmethod
    def from_dense(cls, rows, parity=None):
        n_out = len(rows)
        n_in = len(rows[0]) if rows else 0
        cols = {}
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                if x:
                    cols.setdefault(j, {})[i] = x
        return cls(n_in, n_out, cols, parity)

    # basic access ---------------------------------------------------------

    @property
    def shape(self):
        return (self.n_out, self.n_in)

    def entry(self, i, j):
        return self.cols.get(j, {}).get(i, 0)

    def nnz(self):
        return sum(len(c) for c in self.cols.values())

    def is_zero(self):
        return not any(self.cols.values())

    def __bool__(self):
        return not self.is_zero()

    def to_dense(self):
        out = [[0] * self.n_in for _ in range(self.n_out)]
        for j, col in self.cols.items():
            for i, x in col.items():
                out[i][j] = x
        return out

    def triplets(self):
        return sorted((i, j, x) for j, col in self.cols.items() for i, x in col.items() if x)

    def apply(self, v):
        """Apply to a sparse vector {index: coeff}."""
        out = {}
        for j, c in v.items():
            col = self.cols.get(j)
            if not col or not c:
                continue
            for i, x in col.items():
                y = out.get(i)
                y = c * x if y is None else y + c * x
                if y:
                    out[i] = y
                else:
                    del out[i]
        return out

    def column(self, j):
        return dict(self.cols.get(j, {}))

    # algebra ---------------------------------------------------------------

    def _check(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch %r vs %r" % (self.shape, other.shape))

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        cols = {j: dict(c) for j, c in self.cols.items()}
        for j, col in other.cols.items():
            tgt = cols.setdefault(j, {})
            for i, x in col.items():
                y = tgt.get(i)
                y = x if y is None else y + x
                if y:
                    tgt[i] = y
                else:
                    tgt.pop(i, None)
        cols = {j: c for j, c in cols.items() if c}
        par = self.parity if self.parity == other.parity else None
        if not self.cols:
            par = other.parity
        elif not other.cols:
            par = self.parity
        return SuperOperator(self.n_in, self.n_out, cols, par)

    __radd__ = __add__

    def __neg__(self):
        return SuperOperator(self.n_in, self.n_out,
                             {j: {i: -x for i, x in c.items()} for j, c in self.cols.items()},
                             self.parity)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if not c:
            return SuperOperator(self.n_in, self.n_out, {}, self.parity)
        return SuperOperator(self.n_in, self.n_out,
                             {j: {i: c * x for i, x in col.items()} for j, col in self.cols.items()},
                             self.parity)

    def __mul__(self, c):
        if isinstance(c, SuperOperator):
            return self @ c
        return self.scale(c)

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other):
        if self.n_in != other.n_out:
            raise ValueError("cannot compose %r after %r" % (self.shape, other.shape))
        cols = {}
        for j, col in other.cols.items():
            r = self.apply(col)
            if r:
                cols[j] = r
        par = None
        if self.parity is not None and other.parity is not None:
            par = (self.parity + other.parity) & 1
        return SuperOperator(other.n_in, self.n_out, cols, par)

    def __pow__(self, k):
        out = SuperOperator.identity(self.n_in)
        for _ in range(k):
            out = self @ out
        return out

    def __eq__(self, other):
        if not isinstance(other, SuperOperator):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def restrict_columns(self, keep):
        keep = set(keep)
        return SuperOperator(self.n_in, self.n_out,
                             {j: c for j, c in self.cols.items() if j in keep}, self.parity)

    def map_entries(self, fn):
        cols = {}
        for j, col in self.cols.items():
            c = {i: fn(x) for i, x in col.items()}
            c = {i: x for i, x in c.items() if x}
            if c:
                cols[j] = c
        return SuperOperator(self.n_in, self.n_out, cols, self.parity)

    def respects_grading(self, par_in, par_out=None):
        """True iff every entry maps parity s to parity s + self.parity."""
        if par_out is None:
            par_out = par_in
        if self.parity is None:
            return False
        for j, col in self.cols.items():
            for i, x in col.items():
                if x and (par_out[i] - par_in[j] - self.parity) % 2:
                    return False
        return True

    def __repr__(self):
        return "SuperOperator(%dx%d, nnz=%d, parity=%r)" % (self.n_out, self.n_in, self.nnz(), self.parity)


def super_commutator(A: SuperOperator, B: SuperOperator) -> SuperOperator:
    """[A, B} = AB - (-1)^{[A][B]} BA."""
    A._check(B)
    if A.parity is None or B.parity is None:
        raise ValueError("graded commutator needs homogeneous operators")
    AB = A @ B
    BA = B @ A
    out = AB + BA if (A.parity and B.parity) else AB - BA
    out.parity = (A.parity + B.parity) & 1
    return out


def q_exp_operator(O: SuperOperator, one=None) -> SuperOperator:
    """exp_q(O) = sum_j O^j / [j]! for nilpotent O."""
    n = O.n_in
    out = SuperOperator.identity(n)
    power = SuperOperator.identity(n)
    for j in range(1, n + 2):
        power = O @ power
        if power.is_zero():
            out.parity = 0 if O.parity == 0 else None
            return out
        out = out + power.scale(q_factorial(j).inverse())
    raise ValueError("operator is not nilpotent within dim + 1 powers")


def q_exp_apply(O: SuperOperator, v):
    """exp_q(O) applied to one vector; cheaper than forming the matrix."""
    out = dict(v)
    term = dict(v)
    for j in range(1, O.n_in + 2):
        term = O.apply(term)
        if not term:
            return out
        c = q_factorial(j).inverse()
        for k, x in term.items():
            y = out.get(k)
            y = c * x if y is None else y + c * x
            if y:
                out[k] = y
            else:
                out.pop(k, None)
    raise ValueError("operator is not nilpotent on this vector")


# ---------------------------------------------------------------------------
# operators on a SuperSpace
# ---------------------------------------------------------------------------

def _odd_before(gens, exps, g):
    return sum(e for p, e in zip(gens.parities[:g], exps[:g]) if p)


def derivative_operator(space: SuperSpace, g: int) -> SuperOperator:
    """Left super-derivative d/dZ_g (odd for odd g)."""
    gens = space.gens
    odd = gens.parities[g]

    def fn(b):
        e = b[g]
        if not e:
            return {}
        w = list(b)
        w[g] -= 1
        if odd:
            return {tuple(w): -1 if _odd_before(gens, b, g) & 1 else 1}
        return {tuple(w): e}

    return space.from_map(fn, odd)


def multiplication_operator(space: SuperSpace, g: int) -> SuperOperator:
    """Left multiplication by Z_g, projected to degree <= L."""
    gens = space.gens
    odd = gens.parities[g]

    def fn(b):
        if odd and b[g]:
            return {}
        w = list(b)
        w[g] += 1
        s = -1 if (odd and _odd_before(gens, b, g) & 1) else 1
        return {tuple(w): s}

    return space.from_map(fn, odd)


def difference_operator(space: SuperSpace, g: int) -> SuperOperator:
    """q-difference nabla_z: z^k -> [k] z^(k-1); d/dtheta for odd generators."""
    if space.gens.parities[g]:
        return derivative_operator(space, g)

    def fn(b):
        e = b[g]
        if not e:
            return {}
        w = list(b)
        w[g] -= 1
        return {tuple(w): q_int(e)}

    return space.from_map(fn, 0)


def scaling_operator(space: SuperSpace, g, power: int = 1) -> SuperOperator:
    """
    q^(power * d_g): multiplies a monomial by q^(power * deg_g).

    ``g`` may also be a dict {generator: power} for products of scalings.
    """
    weights = {g: power} if isinstance(g, int) else dict(g)
    vals = []
    for b in space.basis:
        e = sum(p * b[h] for h, p in weights.items())
        vals.append(qpow(e))
    return SuperOperator.diagonal(vals, 0)


def degree_operator(space: SuperSpace, g: int) -> SuperOperator:
    """Plain scaling operator d_g = Z_g d/dZ_g (integer eigenvalues)."""
    return SuperOperator.diagonal([b[g] for b in space.basis], 0)


# ---------------------------------------------------------------------------
# tensor products
# ---------------------------------------------------------------------------

def tensor(A: SuperOperator, B: SuperOperator, space_parities, module_parities=None) -> SuperOperator:
    """
    A (x) B with the Koszul rule (A (x) B)(p (x) v) = (-1)^{[B][p]} Ap (x) Bv.
    A acts on a space whose basis parities are ``space_parities``.
    """
    d = B.n_in
    if B.parity is None:
        raise ValueError("right tensor factor must be homogeneous")
    cols = {}
    for j1, c1 in A.cols.items():
        flip = B.parity and space_parities[j1]
        for j2, c2 in B.cols.items():
            col = {}
            for i1, x in c1.items():
                for i2, y in c2.items():
                    col[i1 * B.n_out + i2] = -(x * y) if flip else x * y
            cols[j1 * d + j2] = col
    par = None
    if A.parity is not None:
        par = (A.parity + B.parity) & 1
    return SuperOperator(A.n_in * d, A.n_out * B.n_out, cols, par)


def left(A: SuperOperator, d: int) -> SuperOperator:
    """A (x) 1 on a tensor with a d-dimensional module."""
    return tensor(A, SuperOperator.identity(d), [0] * A.n_in)


def right(B: SuperOperator, space: SuperSpace) -> SuperOperator:
    """1 (x) B on space (x) module (Koszul signs from the space parities)."""
    return tensor(SuperOperator.identity(len(space)), B, space.parity)
