from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from d0res.errors import D0resError, NonCommutingActions
from d0res.fields import NumberField
from d0res.linalg import (
    ExactMatrix,
    eval_poly_at_matrices,
    eval_series_at_matrix,
    solve_exact,
)
from d0res.poly import Poly
from d0res.series import Series

F = Fraction


def M(rows):
    return ExactMatrix([[F(x) for x in row] for row in rows])


def test_nullspace_examples():
    assert M([[1, 2], [2, 4]]).nullspace() == [(F(-2), F(1))]
    assert ExactMatrix.identity(3).nullspace() == []
    basis = ExactMatrix.zeros(2, 3).nullspace()
    assert len(basis) == 3
    assert basis[0] == (F(1), F(0), F(0))


def test_rref_deterministic_pivoting():
    m = M([[0, 2, 4], [1, 1, 1], [1, 3, 5]])
    red, pivots = m.rref()
    assert pivots == [0, 1]
    assert red == M([[1, 0, -1], [0, 1, 2], [0, 0, 0]])


def test_matmul_and_pow():
    shift = M([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    sq = shift * shift
    assert sq == M([[0, 0, 0], [0, 0, 0], [1, 0, 0]])
    assert (shift ** 3).is_zero()
    assert shift ** 0 == ExactMatrix.identity(3)


def test_eval_poly_at_matrices_examples():
    shift3 = M([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    zero3 = ExactMatrix.zeros(3, 3)
    one = Poly.constant(2, F(1))
    assert eval_poly_at_matrices(one, [shift3, zero3]) == ExactMatrix.identity(3)
    xsq = Poly(2, {(2, 0): F(1)})
    assert eval_poly_at_matrices(xsq, [shift3, zero3]) == shift3 * shift3
    xy = Poly(2, {(1, 1): F(1)})
    assert eval_poly_at_matrices(xy, [shift3, zero3]).is_zero()


def test_eval_poly_rejects_non_commuting():
    a = M([[0, 1], [0, 0]])
    b = M([[0, 0], [1, 0]])
    with pytest.raises(NonCommutingActions):
        eval_poly_at_matrices(Poly(2, {(1, 1): F(1)}), [a, b])


def test_eval_series_at_matrix():
    shift = M([[0, 0], [1, 0]])
    s = Series.from_pairs([(1, F(2)), (2, F(5))], 4)
    assert eval_series_at_matrix(s, shift) == shift.scale(F(2))
    with pytest.raises(D0resError):
        eval_series_at_matrix(Series.from_pairs([(0, F(1))], 1),
                              M([[1, 0], [0, 1]]))


def test_solve_exact():
    rows = [[F(1), F(2)], [F(3), F(4)]]
    sol, free = solve_exact(rows, [F(5), F(6)])
    assert free == 0
    assert sol == [F(-4), F(9, 2)]
    sol2, _ = solve_exact([[F(1), F(1)], [F(2), F(2)]], [F(1), F(3)])
    assert sol2 is None


def test_block_diag():
    a = M([[1, 2], [3, 4]])
    b = M([[5]])
    c = ExactMatrix.block_diag(a, b)
    assert c.rows == 3 and c.cols == 3
    assert c[2, 2] == 5 and c[2, 0] == 0


def test_extension_field_matrices():
    gauss = NumberField([1, 0, 1], generator="i")
    i = gauss.gen()
    m = ExactMatrix([[i, gauss.from_rational(1)],
                     [gauss.from_rational(-1), i]])
    assert not m.rational
    # (i row-reduces to a rank-1 matrix: second row = -i * first)
    assert m.rank() == 1
    ns = m.nullspace()
    assert len(ns) == 1
    v = ns[0]
    assert all((m.data[r][0] * v[0] + m.data[r][1] * v[1]).is_zero()
               for r in range(2))


entries = st.integers(min_value=-9, max_value=9)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_nullspace_property(rows, cols, data):
    mat = M([[data.draw(entries) for _ in range(cols)] for _ in range(rows)])
    basis = mat.nullspace()
    assert len(basis) == cols - mat.rank()
    for v in basis:
        assert all(x == 0 for x in mat.apply_to(v))


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_eval_poly_is_ring_homomorphism(data):
    # commuting pair: powers of one matrix
    base = M([[data.draw(entries) for _ in range(3)] for _ in range(3)])
    a = base
    b = base * base
    fs = st.dictionaries(
        st.tuples(st.integers(0, 2), st.integers(0, 2)),
        st.fractions(min_value=-3, max_value=3, max_denominator=4),
        max_size=4,
    )
    f = Poly(2, data.draw(fs))
    g = Poly(2, data.draw(fs))
    lhs = eval_poly_at_matrices(f * g, [a, b])
    rhs = eval_poly_at_matrices(f, [a, b]) * eval_poly_at_matrices(g, [a, b])
    assert lhs == rhs
