from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ofhaar.linalg import SingularMatrixError, identity, invert_matrix, matmul
from ofhaar.scalars import ExactScalar

ONE, ZERO = ExactScalar(1), ExactScalar(0)


def as_grid(rows):
    return [[ExactScalar(Fraction(x)) for x in row] for row in rows]


def test_invert_known():
    inv = invert_matrix(as_grid([[4, 2], [2, 4]]), ONE, ZERO)
    assert inv == as_grid(
        [[Fraction(1, 3), Fraction(-1, 6)], [Fraction(-1, 6), Fraction(1, 3)]]
    )


def test_invert_identity_and_product():
    grid = as_grid([[1, 2, 3], [0, 1, 4], [5, 6, 0]])
    inv = invert_matrix(grid, ONE, ZERO)
    assert matmul(grid, inv) == identity(3, ONE, ZERO)
    assert matmul(inv, grid) == identity(3, ONE, ZERO)


def test_singular_raises():
    with pytest.raises(SingularMatrixError):
        invert_matrix(as_grid([[1, 2], [2, 4]]), ONE, ZERO)
    with pytest.raises(SingularMatrixError):
        invert_matrix(as_grid([[0, 0], [0, 0]]), ONE, ZERO)


def test_non_square_rejected():
    with pytest.raises(ValueError):
        invert_matrix(as_grid([[1, 2, 3], [4, 5, 6]]), ONE, ZERO)


def test_complex_entries():
    i = ExactScalar(0, 1)
    grid = [[ExactScalar(0), i], [i, ExactScalar(0)]]
    inv = invert_matrix(grid, ONE, ZERO)
    assert matmul(grid, inv) == identity(2, ONE, ZERO)


small_fractions = st.fractions(min_value=-9, max_value=9, max_denominator=9)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=4), st.data())
def test_random_matrices_invert_exactly(n, data):
    rows = data.draw(
        st.lists(
            st.lists(small_fractions, min_size=n, max_size=n),
            min_size=n,
            max_size=n,
        )
    )
    grid = [[ExactScalar(x) for x in row] for row in rows]
    try:
        inv = invert_matrix(grid, ONE, ZERO)
    except SingularMatrixError:
        return
    assert matmul(grid, inv) == identity(n, ONE, ZERO)
