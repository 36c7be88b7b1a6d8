"""Deformation matrices for free orthogonal quantum groups.

A deformation matrix F is admissible when F·conj(F) = ±1.  Validation caches
everything downstream code needs: the sign c, the quantum dimension
N_F = Tr(F*F), the positive matrix Q = Fᵗ·conj(F) and its inverse F·F*, and
the monomial structure (one nonzero entry per row and column) that makes
adjoint translation of generators possible.

Canonical matrices are the block normal forms with a diagonal block D_k(ρ)
up right, ±D_k(ρ)⁻¹ down left, and an identity tail.  Operations that only
need the monomial involution (star translation, limit families, generating
grids) accept any monomial admissible matrix, so the large-rank and
gamma-deformed families constructed elsewhere pass through unchanged.
"""

from __future__ import annotations

import contextlib
import hashlib
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath
import sympy

from .scalars import (
    DEFAULT_PRECISION_BITS,
    DEFAULT_TOLERANCE,
    ExactScalar,
    format_scalar,
    near_zero,
    parse_scalar,
)


class NotAdmissible(ValueError):
    """F·conj(F) is not plus or minus the identity."""


class NonMonomialF(ValueError):
    """Star translation needs a monomial (one nonzero per row/column) matrix."""


class NonCanonicalF(ValueError):
    """The operation needs a canonical-type (monomial, real) matrix."""


@dataclass(frozen=True)
class CanonicalSpec:
    """Parameters (c, k, ρ, N) of a canonical deformation matrix."""

    c: int
    k: int
    rho: tuple
    n: int

    def __post_init__(self):
        object.__setattr__(self, "rho", tuple(Fraction(r) for r in self.rho))
        if self.c not in (1, -1):
            raise ValueError("c must be +1 or -1")
        if self.k < 0:
            raise ValueError("k must be non-negative")
        if len(self.rho) != self.k:
            raise ValueError(f"rho must have k={self.k} entries")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if any(a > b for a, b in zip(self.rho, self.rho[1:])):
            raise ValueError("rho must be non-decreasing")
        if self.c == 1:
            if any(not 0 < r < 1 for r in self.rho):
                raise ValueError("c=+1 requires rho entries in (0,1)")
            if self.n < 2 * self.k:
                raise ValueError("c=+1 requires n >= 2k")
        else:
            if any(not 0 < r <= 1 for r in self.rho):
                raise ValueError("c=-1 requires rho entries in (0,1]")
            if self.n != 2 * self.k:
                raise ValueError("c=-1 requires n = 2k")


class FMatrix:
    """A validated deformation matrix with its cached derived data.

    Instances are immutable after construction and are built through
    :func:`validate` or :func:`build_canonical`.
    """

    def __init__(self, entries, c, nf, q, q_inv, monomial, exact, tol, precision_bits):
        self.n = len(entries)
        self.entries = tuple(tuple(row) for row in entries)
        self.c = c
        self.nf = nf
        self.q = tuple(tuple(row) for row in q)
        self.q_inv = tuple(tuple(row) for row in q_inv)
        self.monomial = monomial
        self.exact = exact
        self.tol = tol
        self.precision_bits = precision_bits
        self._fingerprint = None
        if monomial:
            self._row_partner = tuple(
                next(c0 for c0 in range(self.n) if not near_zero(row[c0], tol)) + 1
                for row in self.entries
            )
            self._col_partner = tuple(
                next(
                    r0
                    for r0 in range(self.n)
                    if not near_zero(self.entries[r0][c0], tol)
                )
                + 1
                for c0 in range(self.n)
            )
        else:
            self._row_partner = None
            self._col_partner = None

    # -- scalar helpers -----------------------------------------------------

    def zero(self):
        return ExactScalar(0) if self.exact else mpmath.mpf(0)

    def one(self):
        return ExactScalar(1) if self.exact else mpmath.mpf(1)

    def precision(self):
        """Context manager pinning the mpmath precision for float mode."""
        if self.exact:
            return contextlib.nullcontext()
        return mpmath.workprec(self.precision_bits)

    # -- 1-based accessors ----------------------------------------------------

    def entry(self, i: int, j: int):
        return self.entries[i - 1][j - 1]

    def q_entry(self, i: int, j: int):
        return self.q[i - 1][j - 1]

    def q_inv_entry(self, i: int, j: int):
        return self.q_inv[i - 1][j - 1]

    def check_index(self, value: int, name: str = "index"):
        if not 1 <= value <= self.n:
            raise IndexError(f"{name} {value} out of range 1..{self.n}")

    # -- structure ------------------------------------------------------------

    @property
    def fingerprint(self) -> str:
        if self._fingerprint is None:
            if self.exact:
                cells = ";".join(
                    ",".join(format_scalar(x) for x in row) for row in self.entries
                )
                payload = f"exact|{self.n}|{cells}"
            else:
                with self.precision():
                    cells = ";".join(
                        ",".join(mpmath.nstr(x, mpmath.mp.dps) for x in row)
                        for row in self.entries
                    )
                payload = f"float{self.precision_bits}|{self.n}|{cells}"
            digest = hashlib.sha256(payload.encode("ascii")).hexdigest()
            self._fingerprint = digest
        return self._fingerprint

    def row_partner(self, i: int) -> int:
        """Column of the unique nonzero entry in row i (monomial F only)."""
        if not self.monomial:
            raise NonMonomialF("matrix is not monomial")
        return self._row_partner[i - 1]

    def col_partner(self, j: int) -> int:
        """Row of the unique nonzero entry in column j (monomial F only)."""
        if not self.monomial:
            raise NonMonomialF("matrix is not monomial")
        return self._col_partner[j - 1]

    @property
    def all_real(self) -> bool:
        if self.exact:
            return all(x.is_real for row in self.entries for x in row)
        return all(
            not isinstance(x, mpmath.mpc) or near_zero(x.imag, self.tol)
            for row in self.entries
            for x in row
        )

    @property
    def canonical_type(self) -> bool:
        """Monomial with real entries: the shape all canonical-form matrices have."""
        return self.monomial and self.all_real

    def require_canonical_type(self):
        if not self.canonical_type:
            raise NonCanonicalF(
                "operation requires a canonical-type (monomial, real) matrix"
            )

    def _entry_magnitude(self, i: int, j: int):
        value = self.entry(i, j)
        if isinstance(value, ExactScalar):
            return value.abs2()
        return abs(value) ** 2

    def two_cycle_reps(self) -> tuple:
        """One representative row per deformed index pair, smaller entry first."""
        self.require_canonical_type()
        reps = []
        for i in range(1, self.n + 1):
            p = self.row_partner(i)
            if p == i or p < i:
                continue
            if self._entry_magnitude(i, p) <= self._entry_magnitude(p, i):
                reps.append(i)
            else:
                reps.append(p)
        return tuple(sorted(reps))

    def fixed_points(self) -> tuple:
        self.require_canonical_type()
        return tuple(
            i for i in range(1, self.n + 1) if self.row_partner(i) == i
        )

    def generating_positions(self) -> frozenset:
        """The (i, j) grid whose generators algebraically generate everything.

        One representative per orbit of the adjoint involution: representative
        rows paired with every column, fixed rows with representative columns,
        and the fixed block with itself.
        """
        reps = self.two_cycle_reps()
        fixed = self.fixed_points()
        positions = {(i, j) for i in reps for j in range(1, self.n + 1)}
        positions.update((t, j) for t in fixed for j in reps)
        positions.update((t, u) for t in fixed for u in fixed)
        return frozenset(positions)


def _to_scalar(value):
    """Coerce one raw entry; returns (scalar, is_exact)."""
    if isinstance(value, ExactScalar):
        return value, True
    if isinstance(value, (int, Fraction)):
        return ExactScalar(value), True
    if isinstance(value, str):
        return parse_scalar(value), True
    if isinstance(value, (mpmath.mpf, mpmath.mpc)):
        return value, False
    if isinstance(value, float):
        return mpmath.mpf(value), False
    if isinstance(value, complex):
        return mpmath.mpc(value), False
    raise TypeError(f"cannot use {type(value).__name__} as a matrix entry")


def validate(entries, *, tol=DEFAULT_TOLERANCE, precision_bits=DEFAULT_PRECISION_BITS):
    """Check admissibility of a square grid and build the FMatrix around it.

    Entries may be ints, Fractions, "p/q(+r/s i)" strings, ExactScalars, or
    mpmath numbers; any non-rational entry switches the whole matrix to float
    mode at ``precision_bits``.
    """
    n = len(entries)
    if n == 0 or any(len(row) != n for row in entries):
        raise ValueError("entries must form a non-empty square grid")
    coerced = [[_to_scalar(x) for x in row] for row in entries]
    exact = all(flag for row in coerced for _, flag in row)
    if exact:
        grid = [[x for x, _ in row] for row in coerced]
    else:
        def _to_float(x):
            if isinstance(x, (mpmath.mpf, mpmath.mpc)):
                return x
            real = mpmath.mpf(x.re.numerator) / x.re.denominator
            if not x.im:
                return real
            return real + mpmath.mpc(0, 1) * x.im.numerator / x.im.denominator

        with mpmath.workprec(precision_bits):
            grid = [[_to_float(x) for x, _ in row] for row in coerced]

    ctx = contextlib.nullcontext() if exact else mpmath.workprec(precision_bits)
    with ctx:
        f_conj_f = [
            [
                sum(
                    (grid[i][s] * grid[s][j].conjugate() for s in range(n)),
                    start=grid[0][0] * 0,
                )
                for j in range(n)
            ]
            for i in range(n)
        ]
        c = None
        for sign in (1, -1):
            if all(
                near_zero(f_conj_f[i][j] - (sign if i == j else 0), tol)
                for i in range(n)
                for j in range(n)
            ):
                c = sign
                break
        if c is None:
            raise NotAdmissible("F·conj(F) is not +1 or -1")

        nf = sum(
            (x * x.conjugate() for row in grid for x in row), start=grid[0][0] * 0
        )
        q = [
            [
                sum(
                    (grid[s][i] * grid[s][j].conjugate() for s in range(n)),
                    start=grid[0][0] * 0,
                )
                for j in range(n)
            ]
            for i in range(n)
        ]
        q_inv = [
            [
                sum(
                    (grid[i][s] * grid[j][s].conjugate() for s in range(n)),
                    start=grid[0][0] * 0,
                )
                for j in range(n)
            ]
            for i in range(n)
        ]
        monomial = all(
            sum(1 for x in row if not near_zero(x, tol)) == 1 for row in grid
        ) and all(
            sum(1 for i in range(n) if not near_zero(grid[i][j], tol)) == 1
            for j in range(n)
        )
        trace_q = sum((q[i][i] for i in range(n)), start=grid[0][0] * 0)
        trace_q_inv = sum((q_inv[i][i] for i in range(n)), start=grid[0][0] * 0)
        if not (near_zero(trace_q - nf, tol) and near_zero(trace_q_inv - nf, tol)):
            raise AssertionError("trace identity Tr(Q) = Tr(Q^-1) = N_F failed")

    if exact:
        nf = ExactScalar(nf.to_fraction())
    return FMatrix(grid, c, nf, q, q_inv, monomial, exact, tol, precision_bits)


def build_canonical(spec: CanonicalSpec) -> FMatrix:
    """The canonical matrix: D_k(ρ) up right, c·D_k(ρ)⁻¹ down left, identity tail."""
    n, k = spec.n, spec.k
    entries = [[ExactScalar(0) for _ in range(n)] for _ in range(n)]
    for a in range(1, k + 1):
        entries[a - 1][k + a - 1] = ExactScalar(spec.rho[a - 1])
        entries[k + a - 1][a - 1] = ExactScalar(Fraction(spec.c) / spec.rho[a - 1])
    for t in range(2 * k + 1, n + 1):
        entries[t - 1][t - 1] = ExactScalar(1)
    matrix = validate(entries)
    assert matrix.c == spec.c
    return matrix


def translate_star(fmatrix: FMatrix, i: int, j: int, eps: str):
    """Rewrite one generator letter u^ε_{ij} as t·u_{i',j'}.

    Plain letters pass through with t = 1.  Starred letters use the adjoint
    relation for monomial F: the unique (i', j') carrying the adjoint, with
    t = c·conj(F_{i,i'})·F_{j',j}.
    """
    from .partitions import PLAIN, STAR

    fmatrix.check_index(i, "row")
    fmatrix.check_index(j, "column")
    if eps == PLAIN:
        return fmatrix.one(), i, j
    if eps != STAR:
        raise ValueError(f"invalid sign token {eps!r}")
    if not fmatrix.monomial:
        raise NonMonomialF("star translation requires a monomial matrix")
    i_eps = fmatrix.row_partner(i)
    j_eps = fmatrix.col_partner(j)
    t = fmatrix.c * fmatrix.entry(i, i_eps).conjugate() * fmatrix.entry(j_eps, j)
    return t, i_eps, j_eps


@dataclass(frozen=True)
class FactorType:
    """Murray-von Neumann type of the algebra attached to a diagonal Q."""

    kind: str  # "II1" | "IIIlambda" | "III1"
    ratio: Fraction = None

    def label(self) -> str:
        if self.kind == "II1":
            return "II_1"
        if self.kind == "IIIlambda":
            return f"III_{self.ratio}"
        return "III_1"

    def __str__(self):
        return self.label()


def _diagonal_fractions(q):
    if q and isinstance(q[0], (list, tuple)):
        n = len(q)
        diag = []
        for i in range(n):
            for j in range(n):
                value = q[i][j]
                if i != j and not near_zero(value):
                    raise ValueError("Q must be diagonal")
            diag.append(q[i][i])
        q = diag
    out = []
    for value in q:
        if isinstance(value, ExactScalar):
            value = value.to_fraction()
        if isinstance(value, (mpmath.mpf, mpmath.mpc, float)):
            raise ValueError("irrational entries unsupported in exact mode")
        value = Fraction(value)
        if value <= 0:
            raise ValueError("Q entries must be positive")
        out.append(value)
    return out


def _exponent_vector(ratio: Fraction, primes):
    factors = dict(sympy.factorint(ratio.numerator))
    for p, e in sympy.factorint(ratio.denominator).items():
        factors[p] = factors.get(p, 0) - e
    return tuple(factors.get(p, 0) for p in primes)


def classify_factor_type(q) -> FactorType:
    """Type of the factor from the multiplicative group of Q-eigenvalue ratios.

    Trivial ratio group gives II_1; a rank-one exponent lattice gives III_λ
    with λ the group generator in (0,1); higher rank gives III_1.
    """
    diag = _diagonal_fractions(q)
    ratios = set()
    for i, a in enumerate(diag):
        for b in diag[i + 1 :]:
            ratio = a / b
            if ratio != 1:
                ratios.add(ratio if ratio > 1 else 1 / ratio)
    if not ratios:
        return FactorType("II1")

    primes = sorted(
        {
            p
            for ratio in ratios
            for p in list(sympy.factorint(ratio.numerator))
            + list(sympy.factorint(ratio.denominator))
        }
    )
    vectors = [_exponent_vector(ratio, primes) for ratio in sorted(ratios)]

    # rank of the lattice spanned by the exponent vectors
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    for col in range(len(primes)):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                factor = rows[r][col] / rows[rank][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank > 1:
            return FactorType("III1")

    # rank one: the group is generated by d·g0 with g0 primitive
    base = vectors[0]
    g = gcd(*base) if len(base) > 1 else abs(base[0])
    primitive = tuple(x // g for x in base)
    anchor = next(idx for idx, x in enumerate(primitive) if x)
    multipliers = [v[anchor] // primitive[anchor] for v in vectors]
    d = 0
    for m in multipliers:
        d = gcd(d, abs(m))
    generator = [d * x for x in primitive]
    value = Fraction(1)
    for p, e in zip(primes, generator):
        value *= Fraction(p) ** e
    lam = value if value < 1 else 1 / value
    return FactorType("IIIlambda", lam)
