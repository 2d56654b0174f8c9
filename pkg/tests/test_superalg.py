from __future__ import annotations

from hypothesis import given, settings, strategies as st

from qbbw.qfield import eval_at, q_factorial, q_int, qpow
from qbbw.superalg import (GeneratorSet, SuperMonomial, SuperOperator, SuperSpace,
                           derivative_operator, difference_operator, monomial_product,
                           multiplication_operator, q_exp_operator, scaling_operator,
                           super_commutator, tensor)

G = GeneratorSet(("θ1", "θ2", "θ3", "z4", "z5"), (1, 1, 1, 0, 0))


def brute_product(gens, u, v):
    """Concatenate the letter words and bubble sort, counting odd swaps."""
    word = [g for g, e in enumerate(u) for _ in range(e)] + [g for g, e in enumerate(v) for _ in range(e)]
    sign = 1
    for i in range(len(word)):
        for j in range(len(word) - 1 - i):
            if word[j] > word[j + 1]:
                if gens.parities[word[j]] and gens.parities[word[j + 1]]:
                    sign = -sign
                word[j], word[j + 1] = word[j + 1], word[j]
    exps = [0] * len(gens)
    for g in word:
        exps[g] += 1
    if any(p and e > 1 for p, e in zip(gens.parities, exps)):
        return None
    return sign, tuple(exps)


mono = st.tuples(st.integers(0, 1), st.integers(0, 1), st.integers(0, 1),
                 st.integers(0, 2), st.integers(0, 2))


@settings(max_examples=200, deadline=None)
@given(mono, mono)
def test_product_matches_brute_force(u, v):
    assert monomial_product(G, u, v) == brute_product(G, u, v)


@settings(max_examples=200, deadline=None)
@given(mono, mono, mono)
def test_product_associative(u, v, w):
    def mul(a, b):
        if a is None or b is None:
            return None
        r = monomial_product(G, a[1], b[1])
        return None if r is None else (a[0] * b[0] * r[0], r[1])

    a, b, c = (1, u), (1, v), (1, w)
    assert mul(mul(a, b), c) == mul(a, mul(b, c))


def test_product_examples():
    t1, t2 = (1, 0, 0, 0, 0), (0, 1, 0, 0, 0)
    s12, w = monomial_product(G, t1, t2)
    s21, w2 = monomial_product(G, t2, t1)
    assert w == w2 and s12 == -s21
    assert monomial_product(G, t1, t1) is None
    # (θ1 z)(θ2 z): z is even, so no sign; (θ2 z)(θ1 z) picks up one
    assert monomial_product(G, (1, 0, 0, 1, 0), (0, 1, 0, 1, 0)) == (1, (1, 1, 0, 2, 0))
    assert monomial_product(G, (0, 1, 0, 1, 0), (1, 0, 0, 1, 0)) == (-1, (1, 1, 0, 2, 0))
    m = SuperMonomial(G, (1, 0, 1, 2, 0))
    assert str(m) == "θ1^1 θ3^1 z4^2" and m.degree == 4 and m.parity == 0


def test_space_dimensions():
    from math import comb
    for L in range(5):
        S = SuperSpace(G, L)
        expect = sum(comb(3, i) * comb(d - i + 1, 1) for d in range(L + 1) for i in range(0, min(3, d) + 1))
        assert len(S) == expect
        assert S.degree == sorted(S.degree)


def vec(S, exps, c=1):
    return {S.index[exps]: c}


def test_derivative_examples():
    g = GeneratorSet(("θ1", "θ2", "z3"), (1, 1, 0))
    S = SuperSpace(g, 4)
    d1 = derivative_operator(S, 0)
    assert d1.apply(vec(S, (1, 0, 0))) == vec(S, (0, 0, 0))
    assert d1.apply(vec(S, (0, 0, 0))) == {}
    dz = derivative_operator(S, 2)
    assert dz.apply(vec(S, (0, 0, 3))) == vec(S, (0, 0, 2), 3)
    # θ2 θ1 = -θ1 θ2, and d/dθ1 (θ1 θ2) = θ2
    assert d1.apply(vec(S, (1, 1, 0), -1)) == vec(S, (0, 1, 0), -1)
    # left derivative in θ2 of θ1 θ2 passes θ1: -θ1
    d2 = derivative_operator(S, 1)
    assert d2.apply(vec(S, (1, 1, 0))) == vec(S, (1, 0, 0), -1)


def test_difference_and_scaling():
    g = GeneratorSet(("z",), (0,))
    S = SuperSpace(g, 6)
    nz = difference_operator(S, 0)
    assert nz.apply(vec(S, (1,))) == vec(S, (0,))
    assert nz.apply(vec(S, (0,))) == {}
    assert nz.apply(vec(S, (3,))) == vec(S, (2,), q_int(3))
    qd = scaling_operator(S, 0, 1)
    assert qd.apply(vec(S, (2,))) == vec(S, (2,), qpow(2))
    assert qd.apply(vec(S, (0,))) == vec(S, (0,))


def test_difference_leibniz():
    # nabla(f h) = nabla f q^d h + q^-d f nabla h and the mirrored form,
    # as operator identities: nabla∘mult(z^j) on polynomials of degree <= 6
    g = GeneratorSet(("z",), (0,))
    S = SuperSpace(g, 6)
    nz = difference_operator(S, 0)
    qd, qmd = scaling_operator(S, 0, 1), scaling_operator(S, 0, -1)
    z = multiplication_operator(S, 0)
    low = [i for i, d in enumerate(S.degree) if d <= 5]
    for j in range(0, 4):
        f = z ** j            # multiplication by f = z^j
        nf = SuperOperator.identity(len(S)).scale(q_int(j)) @ (z ** (j - 1)) if j else SuperOperator.zero(len(S))
        qf = qpow(j)
        lhs = (nz @ f).restrict_columns([i for i in low if S.degree[i] + j <= 6])
        rhs1 = (nf @ qd + f.scale(qf.inverse()) @ nz).restrict_columns(lhs.cols.keys() | set(i for i in low if S.degree[i] + j <= 6))
        rhs2 = (nf @ qmd + f.scale(qf) @ nz).restrict_columns(lhs.cols.keys() | set(i for i in low if S.degree[i] + j <= 6))
        assert lhs == rhs1
        assert lhs == rhs2
    # the explicit example f = z, h = z^2
    h = vec(S, (2,))
    lhs = nz.apply(z.apply(h))
    rhs = {S.index[(2,)]: qpow(2) + qpow(-1) * q_int(2)}
    assert lhs == rhs


def test_classical_limit():
    g = GeneratorSet(("θ", "z"), (1, 0))
    S = SuperSpace(g, 5)
    nz = difference_operator(S, 1).map_entries(lambda x: eval_at(x, 1))
    dz = derivative_operator(S, 1)
    assert nz == dz


def test_commutators():
    g = GeneratorSet(("θ1", "θ2", "w", "ζ"), (1, 1, 0, 0))
    S = SuperSpace(g, 3)
    low = [i for i, d in enumerate(S.degree) if d < 3]
    dz, z = derivative_operator(S, 2), multiplication_operator(S, 2)
    assert super_commutator(dz, z).restrict_columns(low) == SuperOperator.identity(len(S)).restrict_columns(low)
    a, b = derivative_operator(S, 0), derivative_operator(S, 1)
    c = super_commutator(a, b)
    assert c.is_zero() and c.parity == 0
    assert super_commutator(difference_operator(S, 2), difference_operator(S, 3)).is_zero()
    for op in (a, b, z, dz, difference_operator(S, 3)):
        assert op.respects_grading(S.parity)


def test_q_exp():
    g = GeneratorSet(("z",), (0,))
    S = SuperSpace(g, 3)
    n = len(S)
    assert q_exp_operator(SuperOperator.zero(n)) == SuperOperator.identity(n)
    nil = SuperOperator(n, n, {0: {1: 1}}, 0)
    assert q_exp_operator(nil) == SuperOperator.identity(n) + nil
    # exp_q(z (x) E) on 1 (x) v with E^3 v = 0: E a 3x3 shift
    E = SuperOperator(3, 3, {0: {1: 1}, 1: {2: 1}}, 0)
    O = tensor(multiplication_operator(S, 0), E, S.parity)
    X = q_exp_operator(O)
    v = {S.index[(0,)] * 3 + 0: 1}
    got = X.apply(v)
    expect = {S.index[(0,)] * 3 + 0: 1, S.index[(1,)] * 3 + 1: 1,
              S.index[(2,)] * 3 + 2: q_factorial(2).inverse()}
    assert got == expect


def test_tensor_koszul():
    g = GeneratorSet(("θ",), (1,))
    S = SuperSpace(g, 1)
    F = SuperOperator(2, 2, {0: {1: 1}}, 1)       # odd map on a 1|1 module
    T = tensor(SuperOperator.identity(2), F, S.parity)
    # 1 (x) F on θ (x) v0 picks up (-1)^{[F][θ]} = -1
    assert T.apply({S.index[(1,)] * 2: 1}) == {S.index[(1,)] * 2 + 1: -1}
    assert T.apply({S.index[(0,)] * 2: 1}) == {S.index[(0,)] * 2 + 1: 1}
    # (A (x) 1)(1 (x) B) = (-1)^{[A][B]} (1 (x) B)(A (x) 1)
    A = derivative_operator(S, 0)
    A1 = tensor(A, SuperOperator.identity(2), S.parity)
    assert A1 @ T == -(T @ A1)
