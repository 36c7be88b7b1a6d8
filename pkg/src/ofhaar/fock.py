"""Truncated full Fock space as a matrix oracle for free limit moments.

Words over d letters up to a depth cutoff form the basis (vacuum first,
then by length and lexicographic order).  Creation operators shift words
down by one tensor slot and kill the top level; annihilation is the adjoint.
Distinct free variables live on disjoint letter pairs of one shared space,
so the oracle never touches the combinatorial pairing formulas it checks.

A vacuum expectation of a length-L product is exact once the cutoff reaches
⌈L/2⌉: a path from the vacuum back to the vacuum in L unit steps never
climbs higher than L/2.
"""

from __future__ import annotations

import warnings
from fractions import Fraction
from itertools import product

from .freedist import GCSpec, SEMICIRCULAR
from .scalars import rational_sqrt

#: cap on the truncated space dimension (dense words stay desk-scale)
MAX_DIMENSION = 5000


class CutoffTooSmallWarning(UserWarning):
    """The depth cutoff may truncate the requested vacuum expectation."""


class TruncatedFock:
    """Words over {1..d} of length at most m, vacuum included."""

    def __init__(self, letters: int, depth: int):
        if letters < 1:
            raise ValueError("need at least one letter")
        if depth < 0:
            raise ValueError("depth cutoff must be non-negative")
        dim = sum(letters**n for n in range(depth + 1))
        if dim > MAX_DIMENSION:
            raise ValueError(f"dimension {dim} exceeds the cap {MAX_DIMENSION}")
        self.letters = letters
        self.depth = depth
        basis = []
        for n in range(depth + 1):
            basis.extend(product(range(1, letters + 1), repeat=n))
        self.basis = tuple(basis)
        self.index = {word: pos for pos, word in enumerate(self.basis)}
        self.dim = dim

    def __repr__(self):
        return f"TruncatedFock(letters={self.letters}, depth={self.depth})"


class FockOperator:
    """A sparse operator stored column-wise as (row, value) lists."""

    def __init__(self, space: TruncatedFock, columns):
        self.space = space
        self.columns = tuple(tuple(col) for col in columns)
        if len(self.columns) != space.dim:
            raise ValueError("column count must match the space dimension")

    def apply(self, vector: dict) -> dict:
        out = {}
        for col, value in vector.items():
            for row, weight in self.columns[col]:
                out[row] = out.get(row, 0) + weight * value
        return {row: v for row, v in out.items() if v}

    def adjoint(self) -> "FockOperator":
        cols = [[] for _ in range(self.space.dim)]
        for col, entries in enumerate(self.columns):
            for row, weight in entries:
                cols[row].append((col, weight.conjugate()))
        return FockOperator(self.space, cols)

    def scaled(self, factor) -> "FockOperator":
        return FockOperator(
            self.space,
            [[(row, factor * w) for row, w in col] for col in self.columns],
        )

    def __add__(self, other: "FockOperator") -> "FockOperator":
        if other.space is not self.space:
            raise ValueError("operators live on different spaces")
        cols = []
        for left, right in zip(self.columns, other.columns):
            merged = {}
            for row, w in left + right:
                merged[row] = merged.get(row, 0) + w
            cols.append(sorted((row, w) for row, w in merged.items() if w))
        return FockOperator(self.space, cols)

    def dense(self):
        grid = [[Fraction(0)] * self.space.dim for _ in range(self.space.dim)]
        for col, entries in enumerate(self.columns):
            for row, weight in entries:
                grid[row][col] = weight
        return grid


def creation(space: TruncatedFock, coefficients) -> FockOperator:
    """ℓ(ξ) for ξ = Σ coefficients[i]·e_{i+1}; kills the top truncation level."""
    coefficients = list(coefficients)
    if len(coefficients) != space.letters:
        raise ValueError(
            f"expected {space.letters} coefficients, got {len(coefficients)}"
        )
    cols = []
    for word in space.basis:
        if len(word) == space.depth:
            cols.append(())
            continue
        cols.append(
            tuple(
                (space.index[(letter,) + word], coeff)
                for letter, coeff in enumerate(coefficients, start=1)
                if coeff
            )
        )
    return FockOperator(space, cols)


def annihilation(space: TruncatedFock, coefficients) -> FockOperator:
    return creation(space, coefficients).adjoint()


def unit_vector(space: TruncatedFock, letter: int):
    if not 1 <= letter <= space.letters:
        raise ValueError(f"letter {letter} out of range 1..{space.letters}")
    return [Fraction(int(i == letter)) for i in range(1, space.letters + 1)]


def gc_operator(space: TruncatedFock, alpha, beta, xi_letter: int, eta_letter: int) -> FockOperator:
    """α·ℓ(e_ξ) + β·ℓ(e_η)*; equal letters with α = β give a semicircular."""
    if xi_letter == eta_letter and alpha != beta:
        raise ValueError("a one-letter operator needs alpha = beta (semicircular)")
    create = creation(space, unit_vector(space, xi_letter)).scaled(alpha)
    annihilate = creation(space, unit_vector(space, eta_letter)).adjoint().scaled(beta)
    return create + annihilate


def gc_from_spec(space: TruncatedFock, spec: GCSpec, xi_letter: int, eta_letter: int) -> FockOperator:
    """Realize a family entry on the given letter pair; variances must be square."""
    alpha = rational_sqrt(Fraction(spec.left_var))
    beta = rational_sqrt(Fraction(spec.right_var))
    if alpha is None or beta is None:
        raise ValueError("variances must be perfect rational squares for the oracle")
    if spec.kind == SEMICIRCULAR:
        return gc_operator(space, alpha, beta, xi_letter, xi_letter)
    return gc_operator(space, alpha, beta, xi_letter, eta_letter)


def vacuum_expectation(operators):
    """(Ω, op_1···op_L Ω) for operators sharing one space."""
    operators = list(operators)
    if not operators:
        return Fraction(1)
    space = operators[0].space
    if any(op.space is not space for op in operators):
        raise ValueError("all operators must share one Fock space")
    length = len(operators)
    if 2 * space.depth < length:
        warnings.warn(
            f"cutoff {space.depth} < ceil({length}/2); the result may be truncated",
            CutoffTooSmallWarning,
            stacklevel=2,
        )
    vector = {0: Fraction(1)}
    for op in reversed(operators):
        vector = op.apply(vector)
        if not vector:
            return Fraction(0)
    return vector.get(0, Fraction(0))
