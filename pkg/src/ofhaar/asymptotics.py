"""Deformation families and convergence tables for the freeness error rates.

The freeness error of a word is the gap between its rescaled Haar *-moment
(one √N_F per letter) and the matching free-family moment.  Two parametric
families drive the sweeps: the large-rank matrices of growing size 2k+2
whose first-row entries approximate a prescribed generalized circular
sequence, and the gamma family of fixed size whose quantum dimension blows
up as the tail parameter shrinks.  Scaled errors (error·N_F) staying bounded
along a sweep is the operational form of the O(1/N_F) rate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .deformation import FMatrix, validate
from .freedist import limit_family
from .haar import StarWord, haar_star_moment
from .partitions import PLAIN, STAR
from .scalars import DEFAULT_PRECISION_BITS, ExactScalar, format_scalar, rational_sqrt
from .weingarten import weingarten


@dataclass(frozen=True)
class ConvergenceRow:
    """One (family parameter, word) cell of a convergence table."""

    family: str
    param: str
    n_f: object
    word: str
    error: object
    scaled: object


def _magnitude(value):
    if isinstance(value, ExactScalar):
        if value.is_real:
            return abs(value.to_fraction())
        raise ValueError(f"expected a real scalar, got {value}")
    if isinstance(value, (int, Fraction)):
        return abs(Fraction(value))
    return abs(value)


def freeness_error(fmatrix: FMatrix, word: StarWord, cache_dir=None):
    """|N_F^(L/2)·(Haar *-moment) − (free limit moment)| for one word.

    Every letter must sit in the generating grid; other entries have no
    limit variable attached.
    """
    family = limit_family(fmatrix)
    outside = [
        (a, b) for a, b in zip(word.i, word.j) if (a, b) not in family.positions
    ]
    if outside:
        raise ValueError(
            f"letters {outside!r} lie outside the generating grid of this matrix"
        )
    length = len(word)
    with fmatrix.precision():
        haar_value = haar_star_moment(fmatrix, word, cache_dir)
        scaled_haar = fmatrix.nf ** (length // 2) * haar_value if length % 2 == 0 else (
            fmatrix.zero()
        )
        free_value = family.moment(word)
        return _magnitude(scaled_haar - free_value)


def build_large_rank(k: int, lambdas, *, exact: bool = True, precision_bits: int = DEFAULT_PRECISION_BITS) -> FMatrix:
    """Size-2(k+1) matrix whose first-row generators carry variances (1, λ_i).

    The diagonal blocks hold D(1, √λ_1, …, √λ_k)⁻¹ up right and its negated
    inverse-free partner down left, so the matrix squares to −1.  Exact mode
    needs each λ_i to be a perfect rational square.
    """
    lambdas = [Fraction(x) for x in lambdas]
    if k < 1:
        raise ValueError("k must be positive")
    if len(lambdas) != k:
        raise ValueError(f"expected {k} lambda values, got {len(lambdas)}")
    if any(x <= 1 for x in lambdas):
        raise ValueError("lambda values must exceed 1")

    if exact:
        roots = [Fraction(1)]
        for lam in lambdas:
            root = rational_sqrt(lam)
            if root is None:
                raise ValueError(
                    f"lambda {lam} is not a perfect rational square; use float mode"
                )
            roots.append(root)
        size = 2 * (k + 1)
        entries = [[ExactScalar(0) for _ in range(size)] for _ in range(size)]
        for a, root in enumerate(roots, start=1):
            entries[a - 1][k + 1 + a - 1] = ExactScalar(1 / root)
            entries[k + 1 + a - 1][a - 1] = ExactScalar(-root)
        return validate(entries)

    with mpmath.workprec(precision_bits):
        roots = [mpmath.mpf(1)] + [
            mpmath.sqrt(mpmath.mpf(lam.numerator) / lam.denominator)
            for lam in lambdas
        ]
        size = 2 * (k + 1)
        entries = [[mpmath.mpf(0) for _ in range(size)] for _ in range(size)]
        for a, root in enumerate(roots, start=1):
            entries[a - 1][k + 1 + a - 1] = 1 / root
            entries[k + 1 + a - 1][a - 1] = -root
    return validate(entries, precision_bits=precision_bits)


def build_gamma(k: int, rho, gamma) -> FMatrix:
    """Size-2k+2 matrix: the usual diagonal blocks for ρ plus a γ-deformed tail.

    N_F = γ² + γ⁻² + Σ(ρ_i² + ρ_i⁻²) grows without bound as γ → 0 while the
    size stays fixed.
    """
    rho = [Fraction(x) for x in rho]
    gamma = Fraction(gamma)
    if k < 1:
        raise ValueError("k must be positive")
    if len(rho) != k:
        raise ValueError(f"expected {k} rho values, got {len(rho)}")
    if any(not 0 < r < 1 for r in rho):
        raise ValueError("rho entries must lie in (0,1)")
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0,1)")
    size = 2 * k + 2
    entries = [[ExactScalar(0) for _ in range(size)] for _ in range(size)]
    for a, r in enumerate(rho, start=1):
        entries[a - 1][k + a - 1] = ExactScalar(r)
        entries[k + a - 1][a - 1] = ExactScalar(1 / r)
    entries[2 * k][2 * k + 1] = ExactScalar(gamma)
    entries[2 * k + 1][2 * k] = ExactScalar(1 / gamma)
    return validate(entries)


def weingarten_diagonality_error(fmatrix: FMatrix, l: int, cache_dir=None):
    """max over (π,σ) of |N_F^(l/2)·W(π,σ) − δ(π,σ)|."""
    table = weingarten(l, fmatrix, cache_dir)
    with fmatrix.precision():
        scale = fmatrix.nf ** (l // 2)
        worst = _magnitude(fmatrix.zero())
        for a, row in enumerate(table.wg):
            for b, value in enumerate(row):
                gap = _magnitude(scale * value - (1 if a == b else 0))
                if gap > worst:
                    worst = gap
    return worst


def standard_word_suite(positions, lengths):
    """A fixed, deterministic suite of mixed-sign words on the given positions."""
    positions = list(positions)
    words = []
    for length in lengths:
        for pattern in ("alt", "alt-flip", "half", "plain"):
            if pattern == "alt":
                eps = tuple(PLAIN if r % 2 == 0 else STAR for r in range(length))
            elif pattern == "alt-flip":
                eps = tuple(STAR if r % 2 == 0 else PLAIN for r in range(length))
            elif pattern == "half":
                eps = (PLAIN,) * (length // 2) + (STAR,) * (length - length // 2)
            else:
                eps = (PLAIN,) * length
            for stride in (1, 2):
                chosen = [positions[(r // stride) % len(positions)] for r in range(length)]
                i = tuple(p[0] for p in chosen)
                j = tuple(p[1] for p in chosen)
                word = StarWord(i, j, eps)
                if word not in words:
                    words.append(word)
    return tuple(words)


def convergence_table(
    family: str,
    params,
    words,
    *,
    k: int = None,
    rho=None,
    lam=None,
    cache_dir=None,
    exact: bool = True,
    precision_bits: int = DEFAULT_PRECISION_BITS,
):
    """One ConvergenceRow per (parameter, word), parameters outer, words inner.

    ``gamma`` sweeps the tail parameter at fixed (k, rho); ``large-rank``
    sweeps k with every λ_i equal to ``lam``.
    """
    rows = []
    for param in params:
        if family == "gamma":
            if k is None or rho is None:
                raise ValueError("the gamma family needs k and rho")
            fmatrix = build_gamma(k, rho, param)
            label = str(Fraction(param))
        elif family == "large-rank":
            if lam is None:
                raise ValueError("the large-rank family needs lam")
            fmatrix = build_large_rank(
                int(param), [lam] * int(param), exact=exact, precision_bits=precision_bits
            )
            label = str(int(param))
        else:
            raise ValueError(f"unknown family {family!r}")
        n_f = fmatrix.nf.to_fraction() if fmatrix.exact else fmatrix.nf
        for word in words:
            error = freeness_error(fmatrix, word, cache_dir)
            rows.append(
                ConvergenceRow(
                    family=family,
                    param=label,
                    n_f=n_f,
                    word=word.label(),
                    error=error,
                    scaled=error * n_f,
                )
            )
    return rows


def rows_to_csv(rows) -> str:
    lines = ["family,param,n_f,word,error,scaled"]
    for row in rows:
        lines.append(
            ",".join(
                (
                    row.family,
                    row.param,
                    format_scalar(row.n_f),
                    f'"{row.word}"',
                    format_scalar(row.error),
                    format_scalar(row.scaled),
                )
            )
        )
    return "\n".join(lines) + "\n"
