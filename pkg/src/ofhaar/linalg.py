"""Dense linear algebra over exact (or high-precision) scalar grids.

Grids are plain lists of lists.  Inversion is fraction-preserving
Gauss-Jordan elimination: in exact mode the pivot is the simplest nonzero
candidate (smallest numerator/denominator bit size, to keep intermediate
fractions small), in float mode the largest-magnitude one.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import DEFAULT_TOLERANCE, ExactScalar, near_zero


class SingularMatrixError(ValueError):
    pass


def _bit_size(value) -> int:
    if isinstance(value, ExactScalar):
        return _bit_size(value.re) + _bit_size(value.im)
    if isinstance(value, Fraction):
        return value.numerator.bit_length() + value.denominator.bit_length()
    if isinstance(value, int):
        return value.bit_length()
    return 0


def identity(n: int, one, zero):
    return [[one if r == c else zero for c in range(n)] for r in range(n)]


def matmul(a, b):
    n, mid, m = len(a), len(b), len(b[0])
    return [
        [sum((a[r][s] * b[s][c] for s in range(mid)), start=0 * a[0][0]) for c in range(m)]
        for r in range(n)
    ]


def invert_matrix(grid, one, zero, *, exact: bool = True, tol=DEFAULT_TOLERANCE):
    """Exact inverse of a square grid; raises SingularMatrixError if singular."""
    n = len(grid)
    if any(len(row) != n for row in grid):
        raise ValueError("matrix must be square")
    work = [list(row) for row in grid]
    inv = identity(n, one, zero)

    for col in range(n):
        candidates = [
            r for r in range(col, n) if not near_zero(work[r][col], tol)
        ]
        if not candidates:
            raise SingularMatrixError(f"no pivot in column {col}")
        if exact:
            pivot_row = min(candidates, key=lambda r: _bit_size(work[r][col]))
        else:
            pivot_row = max(candidates, key=lambda r: abs(work[r][col]))
        if pivot_row != col:
            work[col], work[pivot_row] = work[pivot_row], work[col]
            inv[col], inv[pivot_row] = inv[pivot_row], inv[col]
        pivot = work[col][col]
        for c in range(n):
            work[col][c] = work[col][c] / pivot
            inv[col][c] = inv[col][c] / pivot
        for r in range(n):
            if r == col:
                continue
            factor = work[r][col]
            if near_zero(factor, tol):
                continue
            for c in range(n):
                work[r][c] = work[r][c] - factor * work[col][c]
                inv[r][c] = inv[r][c] - factor * inv[col][c]
    return inv
