"""
Acceptance suite: one test per criterion, each timed against its budget.
Every test prints a single PASS/FAIL line (shown even under capture).
"""

from __future__ import annotations

import time
from contextlib import contextmanager

import pytest

from qbbw.glmn import (AlgebraSpec, bracket_violations, build_even_irrep, build_irrep_direct,
                       build_kac_module, character, irreducible_quotient, super_jacobi_violations,
                       weyl_dimension_even)
from qbbw.qfield import qpow
from qbbw import uq, qvcs, vcs_classical


@pytest.fixture
def report(capsys):
    @contextmanager
    def run(label, budget):
        t0 = time.perf_counter()
        status = {"ok": False, "detail": ""}
        try:
            yield status
        finally:
            dt = time.perf_counter() - t0
            ok = status["ok"] and dt < budget
            why = status["detail"] if not status["ok"] else ("" if dt < budget else "over budget")
            with capsys.disabled():
                print("\n[%s] %s  (%.1fs / %ds)%s" % ("PASS" if ok else "FAIL", label, dt, budget,
                                                     "  " + why if why else ""))
        assert status["ok"], status["detail"]
        assert dt < budget, "%s took %.1fs, budget %ds" % (label, dt, budget)
    return run


def _pairs(max_total):
    return [(m, n) for m in range(1, max_total) for n in range(1, max_total) if m + n <= max_total]


# 1 ---------------------------------------------------------------------------

def test_criterion_1_super_jacobi(report):
    with report("1 super-Jacobi identity, m+n <= 4", 10) as st:
        bad = {(m, n): super_jacobi_violations(AlgebraSpec(m, n)) for m, n in _pairs(4)}
        st["detail"] = {k: v[:3] for k, v in bad.items() if v}
        st["ok"] = not any(bad.values())


# 2 ---------------------------------------------------------------------------

KAC_WEIGHTS = [(1, 1, (1, 0)), (1, 1, (0, 0)), (1, 1, (3, -2)), (2, 1, (1, 0, 0)), (2, 1, (2, 1, 3)),
               (2, 1, (0, 0, 0)), (1, 2, (1, 1, 0)), (1, 2, (2, 3, 1)), (1, 2, (0, 0, 0)),
               (2, 2, (1, 0, 0, 0)), (2, 2, (2, 1, 3, 1)), (2, 2, (0, 0, 0, 0))]


def test_criterion_2_kac_dimension(report):
    with report("2 dim Kac = 2^{mn} dim V0 (%d weights)" % len(KAC_WEIGHTS), 60) as st:
        bad = []
        for m, n, lam in KAC_WEIGHTS:
            spec = AlgebraSpec(m, n)
            K = build_kac_module(spec, lam)
            d0 = build_even_irrep(spec, lam).dim
            if d0 != weyl_dimension_even(spec, lam) or K.dim != 2 ** (m * n) * d0:
                bad.append((m, n, lam, K.dim, d0))
        st["detail"] = bad
        st["ok"] = not bad and len(KAC_WEIGHTS) >= 10


# 3 ---------------------------------------------------------------------------

def test_criterion_3_classical_realizations(report):
    with report("3 classical realizations: brackets, closure = Kac-route irrep", 300) as st:
        bad = []
        for m, n, lam in KAC_WEIGHTS:
            spec = AlgebraSpec(m, n)
            oracle = irreducible_quotient(build_kac_module(spec, lam))
            for R in (vcs_classical.realize_projective(spec, lam),
                      vcs_classical.realize_grassmann(spec, lam)):
                rep = vcs_classical.verify_realization(R, oracle)
                if not (rep["ok"] and not rep["violations"]
                        and rep["closure_dim"] == oracle.dim and rep["character_equal"]):
                    bad.append((R.kind, m, n, lam))
        st["detail"] = bad
        st["ok"] = not bad


# 4 ---------------------------------------------------------------------------

def test_criterion_4_patch_relations(report):
    with report("4 difference-operator patch: all relations, central eigenvalue", 300) as st:
        bad = []
        for m, n in [(1, 2), (2, 1), (2, 2)]:
            spec = AlgebraSpec(m, n)
            names = {name for name, _ in uq.defining_relations(spec)}
            assert any(x.startswith("Serre+") for x in names) and any(x.startswith("Serre-") for x in names)
            assert "E%d^2" % m in names and "F%d^2" % m in names
            for k in range(0, 4):
                for c in (0, 1, -2):
                    R = qvcs.realize_patch(spec, c, k)
                    viol = uq.relation_violations(R)
                    if viol or qvcs.central_eigenvalue(R) != qpow((m - n) * c - k):
                        bad.append((m, n, k, c, viol[:3]))
        st["detail"] = bad
        st["ok"] = not bad


# 5 ---------------------------------------------------------------------------

def test_criterion_5_root_vector_identities(report):
    with report("5 root-vector identities: rewriting and module evaluation, m+n <= 4", 300) as st:
        bad = []
        count = 0
        for m, n in _pairs(4):
            spec = AlgebraSpec(m, n)
            rep = uq.verify_identities(spec, uq.lemma_identities(spec), uq.default_modules(spec),
                                       rewrite=True, strategies=("leftmost", "rightmost"))
            count += len(rep)
            bad += [(m, n, e["identity"]) for e in rep if not (e["ok"] and e["agree"])]
        st["detail"] = bad[:5]
        st["ok"] = not bad and count > 0


# 6 ---------------------------------------------------------------------------

LEMMA_CASES = [(1, 2, (1, 1, 0)), (1, 2, (2, 1, -1)), (2, 1, (1, 0, 0)), (2, 1, (1, 0, 2))]


def test_criterion_6_commutant_and_factorization(report):
    with report("6 commutant of O and q-exponential factorization", 300) as st:
        bad = []
        for m, n, lam in LEMMA_CASES:
            spec = AlgebraSpec(m, n)
            V = uq.build_uq_irrep(spec, lam)
            comm = qvcs.commutant_violations(spec, V)
            fact = qvcs.q_exp_factorization(spec, V)
            if comm or not fact["ok"]:
                bad.append((m, n, lam, comm, fact))
        st["detail"] = bad
        st["ok"] = not bad


# 7 ---------------------------------------------------------------------------

BBW_CASES = [(1, 1, (1, 0)), (1, 1, (0, 0)), (1, 1, (2, -1)), (1, 2, (1, 1, 0)), (1, 2, (2, 1, -1)),
             (1, 2, (2, 0, 0)), (2, 1, (1, 0, 0)), (2, 1, (1, 0, 2)), (2, 1, (2, 1, 0))]


def test_criterion_7_bbw_end_to_end(report):
    with report("7 full realization: relations, closure = quantum Kac oracle = classical", 900) as st:
        bad = []
        for m, n, lam in BBW_CASES:
            spec = AlgebraSpec(m, n)
            oracle = uq.build_uq_irrep(spec, lam, route="kac")
            R = qvcs.realize_bbw(spec, lam)
            rep = qvcs.verify_qrealization(R, oracle)
            classical = character(build_irrep_direct(spec, lam))
            if not (rep["ok"] and not rep["violations"] and rep["closure_dim"] == oracle.dim
                    and rep["character_equal"] and character(oracle) == classical
                    and character(R.closure_module()) == classical):
                bad.append((m, n, lam, rep))
        st["detail"] = bad
        st["ok"] = not bad and len(BBW_CASES) >= 6


# 8 ---------------------------------------------------------------------------

def test_criterion_8_auxiliary_identities(report):
    with report("8 auxiliary exp_q commutators, with fault injection", 300) as st:
        bad = []
        teeth = []
        for m, n, lam in BBW_CASES:
            spec = AlgebraSpec(m, n)
            V = uq.build_uq_irrep(spec, lam)
            rep = qvcs.auxiliary_identities(spec, V)
            if not rep or not all(rep.values()):
                bad.append((m, n, lam, rep))
            if spec.size > 2 and V.dim > 1:
                teeth.append(not all(qvcs.auxiliary_identities(spec, V, drop_factor=True).values()))
        # a mutated realization of E_{N,N-1} is caught by the relation suite
        spec = AlgebraSpec(1, 2)
        R = qvcs.realize_bbw(spec, (1, 1, 0))
        M = qvcs.mutate(R, ("F", 2), R.F[2].scale(qpow(1)))
        teeth.append(bool(qvcs.verify_qrealization(M)["violations"]))
        st["detail"] = {"failures": bad, "mutants_detected": teeth}
        st["ok"] = not bad and teeth and all(teeth)


# 9 ---------------------------------------------------------------------------

def test_criterion_9_atypical_collapse(report):
    with report("9 atypical gl(1|1), lambda = (0|0): Kac dim 2 -> irreducible dim 1", 10) as st:
        spec = AlgebraSpec(1, 1)
        K = build_kac_module(spec, (0, 0))
        Q = irreducible_quotient(K)
        Kq = uq.build_uq_kac_module(spec, (0, 0))
        Qq = uq.quotient_module(Kq)
        st["detail"] = {"classical": (K.dim, Q.dim), "quantum": (Kq.dim, Qq.dim)}
        st["ok"] = (K.dim == 2 and Q.dim == 1 and Kq.dim == 2 and Qq.dim == 1
                    and bracket_violations(Q) == [] and uq.relation_violations(Qq) == [])
