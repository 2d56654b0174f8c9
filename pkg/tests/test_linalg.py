from __future__ import annotations

from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from qbbw.linalg import Echelon, independent_subset, kernel, rank
from qbbw.qfield import q, q_int


@st.composite
def matrices(draw):
    r = draw(st.integers(1, 5))
    c = draw(st.integers(1, 5))
    return [[draw(st.integers(-2, 2)) for _ in range(c)] for _ in range(r)]


def as_vecs(rows):
    return [{j: Fraction(x) for j, x in enumerate(r) if x} for r in rows]


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    assert rank(as_vecs(rows)) == sympy.Matrix(rows).rank()


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_kernel(rows):
    cols = {j: {i: Fraction(rows[i][j]) for i in range(len(rows)) if rows[i][j]} for j in range(len(rows[0]))}
    ker = kernel(cols, len(rows[0]))
    assert len(ker) == len(rows[0]) - sympy.Matrix(rows).rank()
    for x in ker:
        for i in range(len(rows)):
            assert sum(rows[i][j] * c for j, c in x.items()) == 0


def test_coords_over_qscalars():
    e = Echelon()
    v1 = {0: q, 1: q_int(2)}
    v2 = {1: 1, 2: q_int(3)}
    assert e.add(v1) == 0 and e.add(v2) == 1
    w = {0: q * q_int(2), 1: q_int(2) ** 2 - 1, 2: -q_int(3)}
    c = e.coords(w)
    assert c == {0: q_int(2), 1: -1}
    assert e.add({0: 2 * q, 1: 2 * q_int(2)}) is None
    chosen, _ = independent_subset([v1, v2, v1])
    assert chosen == [0, 1]
