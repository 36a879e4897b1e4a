import random

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from cuspforge.cohomology import fox_jacobian
from cuspforge.lie import J
from cuspforge.linalg import (
    LinalgError,
    Matrix,
    det,
    inverse,
    kernel_basis,
    rank,
    solve,
    to_float,
)

small = st.integers(min_value=-3, max_value=3)


@st.composite
def int_matrices(draw, max_dim=6):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    # low-rank products keep kernels non-trivial
    k = draw(st.integers(1, min(r, c)))
    a = draw(st.lists(st.lists(small, min_size=k, max_size=k), min_size=r, max_size=r))
    b = draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=k, max_size=k))
    return Matrix.from_rows([[mpq(x) for x in row] for row in a]) @ Matrix.from_rows([[mpq(x) for x in row] for row in b])


def mat_vec(m, v):
    return [sum((m[i, j] * v[j] for j in range(m.cols)), mpq(0)) for i in range(m.rows)]


def test_trivial_ranks():
    assert rank(Matrix.identity(4, mpq(1), mpq(0))) == 4
    assert rank(Matrix.zeros(9, 18, mpq(0))) == 0
    assert kernel_basis(Matrix.identity(4, mpq(1), mpq(0))) == []
    assert len(kernel_basis(Matrix.zeros(3, 5, mpq(0)))) == 5


def test_solve_examples():
    b = [mpq(3), mpq(-1), mpq(2)]
    assert solve(Matrix.identity(3, mpq(1), mpq(0)), b) == b
    assert solve(Matrix.zeros(2, 2, mpq(0)), [mpq(1), mpq(0)]) is None
    # 2 v1 x1 + 2 v2 y1 = u1, 2 v1 x2 + 2 v2 y2 = u2 at (x1,y1,x2,y2) = (1,0,0,1)
    x1, y1, x2, y2 = 1, 0, 0, 1
    m = Matrix.from_rows([[mpq(2 * x1), mpq(2 * y1)], [mpq(2 * x2), mpq(2 * y2)]])
    assert solve(m, [mpq(2), mpq(2)]) == [1, 1]
    with pytest.raises(LinalgError):
        Matrix(2, 2, [1, 2, 3])


def test_determinants_and_inverse_of_form():
    assert det(Matrix.identity(4, mpq(1), mpq(0))) == 1
    # cofactor expansion along the first row of J: only the (1,4) entry contributes
    minor = Matrix.from_rows([[J[i, j] for j in range(3)] for i in range(1, 4)])
    assert (-1) ** (1 + 4) * J[0, 3] * det(minor) == -1
    assert det(J) == -1
    assert inverse(J) == J
    assert J @ J == Matrix.identity(4, mpq(1), mpq(0))
    with pytest.raises(LinalgError):
        inverse(Matrix.zeros(2, 2, mpq(0)))


@given(int_matrices())
def test_rank_nullity_and_kernel(m):
    ker = kernel_basis(m)
    assert rank(m) + len(ker) == m.cols
    for v in ker:
        assert all(x == 0 for x in mat_vec(m, v))


@given(int_matrices())
def test_float_rank_agrees(m):
    assert rank(to_float(m)) == rank(m)
    assert rank(m) == np.linalg.matrix_rank(np.array([[float(x) for x in m.row(i)] for i in range(m.rows)]))


@given(int_matrices(), st.lists(small, min_size=6, max_size=6))
def test_solve_consistent_systems(m, x):
    x = [mpq(t) for t in x[: m.cols]]
    b = mat_vec(m, x)
    sol = solve(m, b)
    assert sol is not None and mat_vec(m, sol) == b
    fsol = solve(to_float(m), [float(t) for t in b])
    assert fsol is not None
    assert max(abs(float(s) - float(t)) for s, t in zip(mat_vec(to_float(m), fsol), b)) < 1e-8


def test_solve_free_variables_zero():
    m = Matrix.from_rows([[mpq(1), mpq(1)]])
    assert solve(m, [mpq(2)]) == [2, 0]


def test_deterministic_kernel():
    rng = random.Random(7)
    m = Matrix.from_rows([[mpq(rng.randint(-2, 2)) for _ in range(7)] for _ in range(4)])
    assert kernel_basis(m) == kernel_basis(m)


def test_fox_jacobian_52_rank(knot52):
    jac = fox_jacobian(knot52.presentation, knot52.rep, "v")
    assert jac.shape == (9, 18)
    assert rank(jac) == 8
    ker = kernel_basis(jac)
    assert len(ker) == 10
