"""Haar-state moments and *-moments of the generator matrix entries.

Plain moments come from the Weingarten sum over pairs of non-crossing
pairings.  Starred letters are first rewritten through the adjoint
translation (monomial matrices only), which reduces every *-monomial to a
scalar prefactor times a plain moment.  Second moments also have the closed
Schur form, which the test suite plays against the Weingarten route.
"""

from __future__ import annotations

from dataclasses import dataclass

from .deformation import FMatrix, NonMonomialF, translate_star
from .partitions import PLAIN, STAR, validate_sign_pattern
from .weingarten import delta, weingarten


@dataclass(frozen=True)
class StarWord:
    """A monomial u^ε(1)_{i(1)j(1)}···u^ε(L)_{i(L)j(L)}, 1-based indices."""

    i: tuple
    j: tuple
    eps: tuple

    def __post_init__(self):
        i = tuple(int(x) for x in self.i)
        j = tuple(int(x) for x in self.j)
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "j", j)
        if len(i) != len(j):
            raise ValueError("row and column index lists must have equal length")
        object.__setattr__(
            self, "eps", validate_sign_pattern(self.eps, len(i))
        )
        if any(x < 1 for x in i + j):
            raise ValueError("indices are 1-based and must be positive")

    def __len__(self):
        return len(self.i)

    def label(self) -> str:
        letters = [
            f"u{'*' if e == STAR else ''}[{a},{b}]"
            for a, b, e in zip(self.i, self.j, self.eps)
        ]
        return " ".join(letters) if letters else "1"

    def concat(self, other: "StarWord") -> "StarWord":
        return StarWord(self.i + other.i, self.j + other.j, self.eps + other.eps)


EMPTY_WORD = StarWord((), (), ())


def plain_word(i, j) -> StarWord:
    i = tuple(i)
    return StarWord(i, tuple(j), (PLAIN,) * len(i))


def haar_moment(fmatrix: FMatrix, i, j, cache_dir=None):
    """Haar expectation of the plain monomial with row indices i, columns j.

    Zero for odd length; the empty word has expectation 1.
    """
    i, j = tuple(i), tuple(j)
    if len(i) != len(j):
        raise ValueError("row and column index lists must have equal length")
    for x in i + j:
        fmatrix.check_index(x)
    length = len(i)
    if length == 0:
        return fmatrix.one()
    if length % 2:
        return fmatrix.zero()

    table = weingarten(length, fmatrix, cache_dir)
    with fmatrix.precision():
        col_weights = [delta(fmatrix, pairing, j).conjugate() for pairing in table.order]
        row_weights = [delta(fmatrix, pairing, i) for pairing in table.order]
        total = fmatrix.zero()
        for a, wj in enumerate(col_weights):
            if not wj:
                continue
            wg_row = table.wg[a]
            for b, wi in enumerate(row_weights):
                if not wi:
                    continue
                total = total + wg_row[b] * wj * wi
    return total


def haar_star_moment(fmatrix: FMatrix, word: StarWord, cache_dir=None):
    """Haar expectation of a *-monomial via adjoint translation (monomial F)."""
    if not fmatrix.monomial:
        raise NonMonomialF("star moments require a monomial matrix")
    for x in word.i + word.j:
        fmatrix.check_index(x)
    length = len(word)
    if length % 2:
        return fmatrix.zero()
    with fmatrix.precision():
        prefactor = fmatrix.one()
        rows, cols = [], []
        for a, b, e in zip(word.i, word.j, word.eps):
            t, a_eps, b_eps = translate_star(fmatrix, a, b, e)
            if not t:
                return fmatrix.zero()
            prefactor = prefactor * t
            rows.append(a_eps)
            cols.append(b_eps)
        return prefactor * haar_moment(fmatrix, rows, cols, cache_dir)


def schur_covariance(fmatrix: FMatrix, i, j, k, l, side: str):
    """Closed-form second moments: h(u*_{ij}u_{kl}) (left) and h(u_{ij}u*_{kl}) (right)."""
    for name, x in (("i", i), ("j", j), ("k", k), ("l", l)):
        fmatrix.check_index(x, name)
    with fmatrix.precision():
        if side == "left":
            if j != l:
                return fmatrix.zero()
            return fmatrix.q_inv_entry(k, i) / fmatrix.nf
        if side == "right":
            if i != k:
                return fmatrix.zero()
            return fmatrix.q_entry(l, j) / fmatrix.nf
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def variance_matrix(fmatrix: FMatrix):
    """N×N grid of (left, right) variances of the generators."""
    n = fmatrix.n
    with fmatrix.precision():
        return [
            [
                (
                    fmatrix.q_inv_entry(i, i) / fmatrix.nf,
                    fmatrix.q_entry(j, j) / fmatrix.nf,
                )
                for j in range(1, n + 1)
            ]
            for i in range(1, n + 1)
        ]
