from __future__ import annotations

from fractions import Fraction

import pytest

from qbbw.glmn import (AlgebraSpec, NonDominantError, bracket, bracket_violations,
                       build_even_irrep, build_irrep_direct, build_kac_module,
                       build_parabolic_induced, character, contravariant_ranks,
                       cyclic_from_every_basis_vector, irreducibility_witness,
                       irreducible_quotient, is_dominant, parse_weight,
                       super_jacobi_violations, weyl_dimension_even)

CASES = [(1, 1, (1, 0)), (1, 1, (0, 0)), (1, 1, (2, -1)), (2, 1, (1, 0, 0)), (2, 1, (1, 0, 2)),
         (1, 2, (1, 1, 0)), (1, 2, (2, 0, 0)), (2, 2, (1, 0, 0, 0)), (2, 2, (0, 0, 0, 0)),
         (2, 2, (2, 1, 3, 0))]


def test_bracket_examples():
    assert bracket(AlgebraSpec(2, 0), 1, 2, 2, 1) == {(1, 1): 1, (2, 2): -1}
    assert bracket(AlgebraSpec(1, 1), 1, 2, 2, 1) == {(1, 1): 1, (2, 2): 1}
    assert bracket(AlgebraSpec(1, 1), 1, 1, 1, 1) == {}


@pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (1, 2), (3, 1), (2, 2), (1, 3)])
def test_super_jacobi(m, n):
    assert super_jacobi_violations(AlgebraSpec(m, n)) == []


def test_dominance():
    s = AlgebraSpec(2, 1)
    assert is_dominant(s, (3, 1, 2))
    assert is_dominant(s, (0, 0, 0))
    assert not is_dominant(s, (1, 2, 0))
    assert not is_dominant(s, (Fraction(1, 2), 0, 0))
    assert is_dominant(s, (1, 0, Fraction(1, 3)))
    with pytest.raises(NonDominantError):
        build_kac_module(s, (1, 2, 0))


def test_parse_weight():
    assert parse_weight("3,1|2", 2, 1) == (3, 1, 2)
    assert parse_weight("1/2|0", 1, 1) == (Fraction(1, 2), 0)
    with pytest.raises(ValueError):
        parse_weight("1,2|0", 1, 1)


@pytest.mark.parametrize("m,n,lam,dim", [(2, 1, (1, 0, 0), 2), (2, 1, (0, 0, 0), 1),
                                         (2, 2, (2, 0, 0, 0), 3), (3, 2, (2, 1, 0, 3, 1), 8 * 3)])
def test_even_irrep_weyl(m, n, lam, dim):
    s = AlgebraSpec(m, n)
    V = build_even_irrep(s, lam)
    assert V.dim == dim == weyl_dimension_even(s, lam)
    assert bracket_violations(V) == []


@pytest.mark.parametrize("m,n,lam", CASES)
def test_kac_module(m, n, lam):
    s = AlgebraSpec(m, n)
    K = build_kac_module(s, lam)
    V0 = build_even_irrep(s, lam)
    assert K.dim == 2 ** (m * n) * V0.dim
    assert bracket_violations(K) == []
    # highest-weight vector is killed by the raising generators
    for a in s.indices:
        for b in s.indices:
            if a < b:
                assert K.op(a, b).apply({K.hw: 1}) == {}
    # e_aa diagonal with the weights
    for a in s.indices:
        X = K.op(a, a)
        assert all(set(c) == {j} and c[j] == K.weights[j][a - 1] for j, c in X.cols.items())


@pytest.mark.parametrize("m,n,lam", CASES)
def test_quotient_routes_agree(m, n, lam):
    s = AlgebraSpec(m, n)
    K = build_kac_module(s, lam)
    Q = irreducible_quotient(K)
    D = build_irrep_direct(s, lam)
    assert Q.character() == D.character()
    assert bracket_violations(Q) == []
    assert bracket_violations(D) == []
    assert irreducibility_witness(Q)
    assert Q.radical.radical_is_invariant(list(K.action.values()))
    if Q.dim <= 40:
        assert cyclic_from_every_basis_vector(Q)


@pytest.mark.parametrize("m,n,lam", CASES[:8])
def test_gram_oracle(m, n, lam):
    s = AlgebraSpec(m, n)
    K = build_kac_module(s, lam)
    Q = irreducible_quotient(K)
    ranks = contravariant_ranks(K)
    ch = Q.character()
    for w in set(ranks) | set(ch):
        assert ranks.get(w, 0) == ch.get(w, 0)


def test_quotient_examples():
    s = AlgebraSpec(1, 1)
    assert irreducible_quotient(build_kac_module(s, (1, 0))).dim == 2
    assert irreducible_quotient(build_kac_module(s, (0, 0))).dim == 1
    V = build_even_irrep(AlgebraSpec(2, 1), (2, 0, 0))
    assert irreducible_quotient(V).dim == V.dim


def test_character_examples():
    s = AlgebraSpec(1, 1)
    assert character(build_kac_module(s, (1, 0))) == {(1, 0): 1, (0, 1): 1}
    assert character(build_kac_module(s, (0, 0))) == {(0, 0): 1, (-1, 1): 1}
    assert character(build_even_irrep(AlgebraSpec(2, 1), (0, 0, 0))) == {(0, 0, 0): 1}
    K = build_kac_module(AlgebraSpec(2, 2), (2, 1, 3, 0))
    assert sum(character(K).values()) == K.dim


def test_parabolic_reproduces_kac():
    for m, n, lam in [(1, 1, (1, 0)), (2, 1, (1, 0, 2)), (2, 2, (2, 1, 3, 0))]:
        s = AlgebraSpec(m, n)
        even = [i for i in s.simple if i != m]
        K = build_kac_module(s, lam)
        P = build_parabolic_induced(s, even, lam)
        assert not P.truncated
        assert P.labels == K.labels
        assert all(P.action[k] == K.action[k] for k in K.action)


def test_parabolic_other_theta():
    s = AlgebraSpec(1, 2)
    P = build_parabolic_induced(s, [2], (0, 0, 0), 3)
    assert irreducible_quotient(P).character() == {(0, 0, 0): 1}
    for lam in [(1, 1, 0), (3, 1, 0), (2, 0, 0)]:
        Q = irreducible_quotient(build_parabolic_induced(s, [2], lam, 4))
        assert Q.character() == irreducible_quotient(build_kac_module(s, lam)).character()
    # Verma-type induction needs the cap; the quotient terminates below it
    s = AlgebraSpec(2, 1)
    P = build_parabolic_induced(s, [], (1, 0, 2), 6)
    assert P.truncated
    Q = irreducible_quotient(P)
    assert not Q.truncated
    assert Q.character() == build_irrep_direct(s, (1, 0, 2)).character()
    with pytest.raises(ValueError):
        build_parabolic_induced(s, [], (1, 0, 2))
    with pytest.raises(ValueError):
        build_parabolic_induced(s, [1, 2], (1, 0, 2))


def test_json_dump_deterministic():
    import json
    s = AlgebraSpec(1, 1)
    a = json.dumps(build_kac_module(s, (1, 0)).to_json(), sort_keys=True)
    b = json.dumps(build_kac_module(s, (1, 0)).to_json(), sort_keys=True)
    assert a == b and '"dim": 2' in a
