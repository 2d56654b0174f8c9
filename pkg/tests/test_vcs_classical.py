from __future__ import annotations

import random

import pytest

from qbbw.glmn import (AlgebraSpec, NonDominantError, build_irrep_direct, build_kac_module,
                       character, irreducible_quotient)
from qbbw.linalg import rank
from qbbw.superalg import SuperOperator
from qbbw.vcs_classical import (coherent_state, coherent_state_map_projective,
                                coherent_state_map_grassmann, initial_degree,
                                intertwining_violations, level_zero_module, mutate,
                                realize_projective, realize_grassmann, relation_violations,
                                verify_realization)

CASES = [(1, 1, (1, 0)), (1, 1, (0, 0)), (1, 1, (2, -1)), (2, 1, (1, 0, 0)), (2, 1, (1, 0, 2)),
         (1, 2, (1, 1, 0)), (1, 2, (2, 0, 0)), (2, 2, (1, 0, 0, 0)), (2, 2, (3, 3, 1, 1)),
         (1, 2, (2, 1, -1))]


@pytest.mark.parametrize("m,n,lam", CASES)
def test_projective_realization(m, n, lam):
    spec = AlgebraSpec(m, n)
    R = realize_projective(spec, lam)
    rep = verify_realization(R)
    assert rep["violations"] == []
    assert rep["ok"], rep
    # the truncation is never reached by the closure
    if n == 1:
        assert rep["closure_max_degree"] <= R.L == m     # finite Grassmann algebra
    else:
        assert rep["closure_max_degree"] < R.L


@pytest.mark.parametrize("m,n,lam", CASES)
def test_grassmann_realization(m, n, lam):
    spec = AlgebraSpec(m, n)
    R = realize_grassmann(spec, lam)
    rep = verify_realization(R)
    assert rep["violations"] == []
    assert rep["ok"], rep
    assert R.dim == 2 ** (m * n) * R.V0.dim


@pytest.mark.parametrize("kind", ["projective", "grassmann"])
def test_printed_conventions_fail(kind):
    spec = AlgebraSpec(1, 2)
    lam = (1, 1, 0)
    R = realize_projective(spec, lam, convention="printed") if kind == "projective" else \
        realize_grassmann(spec, lam, convention="printed")
    viol = verify_realization(R)["violations"]
    assert viol
    assert all("identity" in v and "diff" in v for v in viol)


def test_projective_gl11_example():
    spec = AlgebraSpec(1, 1)
    R = realize_projective(spec, (1, 0))
    d = R.op(1, 2)
    # pi(e12) = d/dtheta (x) 1: theta (x) v+ -> 1 (x) v+
    th = R.tspace.idx(1, 0)
    assert d.apply({th: 1}) == {R.hw: 1}
    assert d.apply({R.hw: 1}) == {}
    assert R.closure_module().dim == 2


def test_projective_weight_bookkeeping():
    spec = AlgebraSpec(1, 2)
    lam = (1, 1, 0)
    R = realize_projective(spec, lam)
    N = spec.size
    for a in range(1, N):
        v = R.op(N, a).apply({R.hw: 1})
        for k in v:
            w = R.weight(k)
            assert sum(w) == sum(lam)
            assert w[N - 1] == lam[N - 1] + 1 and w[a - 1] == lam[a - 1] - 1
        assert R.op(a, N).apply({R.hw: 1}) == {}


def test_projective_sign_only_visible_off_zero():
    # the (-1)^{[a]} on Z_a (x) pi0(e_NN) matters only when lambda_N != 0
    spec = AlgebraSpec(2, 2)
    R = realize_projective(spec, (3, 3, 1, 1), L=3)
    assert relation_violations(spec, R.ops, R.exact_columns(2)) == []
    P = realize_projective(spec, (3, 3, 1, 1), L=3, convention="printed")
    assert relation_violations(spec, P.ops, P.exact_columns(2))


def test_truncation_grows_past_initial_guess():
    spec = AlgebraSpec(1, 3)
    lam = (1, 2, 1, 1)
    R = realize_projective(spec, lam)
    C = R.closure_module()
    assert initial_degree(spec, lam) == 1
    assert C.max_degree == 2
    assert C.dim == build_irrep_direct(spec, lam).dim == 20


def test_projective_independent_V0_matches_level_zero():
    spec = AlgebraSpec(2, 2)
    lam = (2, 1, 3, 0)
    R1 = realize_projective(spec, lam)
    V = build_irrep_direct(spec, lam)
    R2 = realize_projective(spec, lam, V0=level_zero_module(V))
    assert character(R1.closure_module()) == character(R2.closure_module()) == character(V)


def test_grassmann_atypical_collapse():
    spec = AlgebraSpec(1, 1)
    R = realize_grassmann(spec, (0, 0))
    assert R.dim == 2
    assert R.closure_module().dim == 1


def test_grassmann_raising_kills_hw():
    spec = AlgebraSpec(2, 1)
    R = realize_grassmann(spec, (1, 0, 0))
    for i in (1, 2):
        assert R.op(i, 3).apply({R.hw: 1}) == {}
    assert R.closure_module().dim == irreducible_quotient(build_kac_module(spec, (1, 0, 0))).dim


def test_nondominant_rejected():
    with pytest.raises(NonDominantError):
        realize_projective(AlgebraSpec(1, 2), (1, 0, 1))
    with pytest.raises(NonDominantError):
        realize_grassmann(AlgebraSpec(2, 1), (0, 1, 0))


def test_mutant_detected():
    spec = AlgebraSpec(1, 2)
    R = realize_projective(spec, (1, 1, 0))
    M = mutate(R, (1, 3), -R.op(1, 3))
    viol = verify_realization(M)["violations"]
    assert viol and any("e13" in v["identity"] for v in viol)
    R3 = realize_grassmann(spec, (1, 1, 0))
    M3 = mutate(R3, (2, 1), R3.op(2, 1) + R3.op(2, 2).scale(0) + R3.op(2, 1))
    assert verify_realization(M3)["violations"]


# -- coherent states ---------------------------------------------------------

def test_coherent_state_highest_weight():
    spec = AlgebraSpec(1, 2)
    lam = (1, 1, 0)
    V = build_irrep_direct(spec, lam)
    R = realize_projective(spec, lam, V0=level_zero_module(V))
    assert coherent_state(R, {V.hw: 1}, V) == {R.hw: 1}


def test_coherent_state_gl11_series():
    # V(1|0) = span(v+, f v+); g(theta) (1 (x) f v+) = 1 (x) f v+ + theta (x) e12 f v+
    # and e12 f v+ = (lambda_1 + lambda_2) v+
    spec = AlgebraSpec(1, 1)
    V = build_irrep_direct(spec, (1, 0))
    R = realize_projective(spec, (1, 0), V0=level_zero_module(V))
    w = 1 - V.hw
    theta = R.tspace.idx(1, 0)
    assert coherent_state(R, {w: 1}, V) == {theta: 1}


def test_coherent_state_level_zero_projection():
    spec = AlgebraSpec(2, 1)
    lam = (1, 0, 2)
    V = build_irrep_direct(spec, lam)
    R = realize_projective(spec, lam, V0=level_zero_module(V))
    xi = coherent_state_map_projective(R, V)
    N = spec.size
    for k in range(V.dim):
        if all(not V.op(a, N).cols.get(k) for a in range(1, N)):
            t = R.V0.embedding.index(k)
            assert xi({k: 1}) == {R.tspace.idx(0, t): 1}


@pytest.mark.parametrize("m,n,lam", [(1, 1, (1, 0)), (2, 1, (1, 0, 2)), (1, 2, (1, 1, 0)),
                                     (2, 2, (3, 3, 1, 1)), (2, 2, (2, 1, 3, 0))])
def test_projective_intertwining(m, n, lam):
    spec = AlgebraSpec(m, n)
    V = build_irrep_direct(spec, lam)
    R = realize_projective(spec, lam, V0=level_zero_module(V))
    xi = coherent_state_map_projective(R, V)
    rng = random.Random(7)
    keys = sorted(V.action)
    sample = [(rng.choice(keys), rng.randrange(V.dim)) for _ in range(20)]
    assert intertwining_violations(R, xi, sample) == []
    # xi is injective: distinct basis vectors give independent coherent states
    assert rank([xi({k: 1}) for k in range(V.dim)]) == V.dim


@pytest.mark.parametrize("m,n,lam", [(1, 1, (0, 0)), (2, 1, (1, 0, 0)), (1, 2, (2, 1, -1)),
                                     (2, 2, (1, 0, 0, 0))])
def test_grassmann_kernel_is_radical(m, n, lam):
    spec = AlgebraSpec(m, n)
    K = build_kac_module(spec, lam)
    R = realize_grassmann(spec, lam)
    xi = coherent_state_map_grassmann(R, K)
    assert intertwining_violations(R, xi) == []
    Q = irreducible_quotient(K)
    assert rank([xi({k: 1}) for k in range(K.dim)]) == Q.dim
    for vecs in Q.radical.kernel.values():
        for v in vecs:
            assert xi(v) == {}


def test_sign_factor_pinned_by_intertwining():
    # dropping the (-1)^{[v_i](1+[w])} factor breaks intertwining
    spec = AlgebraSpec(1, 2)
    lam = (1, 1, 0)
    V = build_irrep_direct(spec, lam)
    R = realize_projective(spec, lam, V0=level_zero_module(V))
    xi = coherent_state_map_projective(R, V)
    assert intertwining_violations(R, xi) == []

    class NoSign(type(xi)):
        def __call__(self, w):
            out = {}
            for k, c in w.items():
                flip = V.parities[k]
                for key, x in super().__call__({k: c}).items():
                    j = R.tspace.split(key)[1]
                    s = -1 if (flip and R.V0.parities[j]) else 1
                    out[key] = out.get(key, 0) + s * x
            return {k: x for k, x in out.items() if x}

    bad = NoSign(R, V, xi.level, [(a - 1, (a, spec.size)) for a in range(1, spec.size)])
    assert intertwining_violations(R, bad)
