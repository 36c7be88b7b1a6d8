"""State-level checks of quantum rotation invariance and twisted unitarity.

Everything here is a pairing of an algebraic identity against the Haar
state and a test word: the row-unitarity and Q-weighted column relations of
the generator matrix, and the invariance of a free generalized circular
family with variances ((Q⁻¹)_rr, 1) under the quantum rotation action.  Each
check returns an exact value that must be zero; nothing operator-valued is
asserted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .deformation import FMatrix
from .freedist import GCSpec, GENERALIZED_CIRCULAR, free_moment
from .haar import EMPTY_WORD, StarWord, haar_star_moment
from .partitions import PLAIN, STAR, enumerate_nc2_eps, validate_sign_pattern
from .scalars import format_scalar
from .weingarten import BudgetExceeded

#: cap on N^L for the rotation-invariance sum over column multi-indices
INVARIANCE_BUDGET = 10**6


@dataclass(frozen=True)
class InvarianceReport:
    """Both sides of one state-level identity, with their exact difference."""

    identity: str
    l: int
    eps: tuple
    i: tuple
    word: str
    lhs: object
    rhs: object
    difference: object

    def holds(self) -> bool:
        return not self.difference

    def to_json_dict(self) -> dict:
        return {
            "identity": self.identity,
            "l": self.l,
            "eps": ",".join(self.eps),
            "i": ",".join(str(x) for x in self.i),
            "word": self.word,
            "lhs": format_scalar(self.lhs),
            "rhs": format_scalar(self.rhs),
            "difference": format_scalar(self.difference),
        }


def rotation_invariant_family(fmatrix: FMatrix):
    """Free generalized circular x_1..x_N with variances ((Q⁻¹)_rr, 1)."""
    fmatrix.require_canonical_type()
    specs = []
    for r in range(1, fmatrix.n + 1):
        left = fmatrix.q_inv_entry(r, r)
        if fmatrix.exact:
            left = left.to_fraction()
        specs.append(GCSpec(r, GENERALIZED_CIRCULAR, left, Fraction(1)))
    return tuple(specs)


def _test_word(w) -> StarWord:
    return EMPTY_WORD if w is None else w


def weak_unitarity_check(fmatrix: FMatrix, i: int, j: int, w: StarWord = None, cache_dir=None):
    """h((Σ_r u_{ir}u*_{jr} − δ_ij)·w); zero when the generator rows are orthonormal."""
    fmatrix.check_index(i, "row")
    fmatrix.check_index(j, "row")
    w = _test_word(w)
    with fmatrix.precision():
        total = fmatrix.zero()
        for r in range(1, fmatrix.n + 1):
            term = StarWord((i, j), (r, r), (PLAIN, STAR)).concat(w)
            total = total + haar_star_moment(fmatrix, term, cache_dir)
        if i == j:
            total = total - haar_star_moment(fmatrix, w, cache_dir)
    return total


def weak_q_relation_check(fmatrix: FMatrix, i: int, j: int, w: StarWord = None, cache_dir=None):
    """h((Σ_r u*_{ir}u_{jr}(Q⁻¹)_rr − δ_ij(Q⁻¹)_ii)·w); the Q-twisted column relation."""
    fmatrix.check_index(i, "row")
    fmatrix.check_index(j, "row")
    w = _test_word(w)
    with fmatrix.precision():
        total = fmatrix.zero()
        for r in range(1, fmatrix.n + 1):
            term = StarWord((i, j), (r, r), (STAR, PLAIN)).concat(w)
            weight = fmatrix.q_inv_entry(r, r)
            total = total + weight * haar_star_moment(fmatrix, term, cache_dir)
        if i == j:
            weight = fmatrix.q_inv_entry(i, i)
            total = total - weight * haar_star_moment(fmatrix, w, cache_dir)
    return total


def _candidate_columns(l: int, eps, n: int):
    """Column words that can carry a nonzero free moment: those whose kernel
    dominates some sign-admissible pairing."""
    candidates = set()
    for pairing in enumerate_nc2_eps(l, eps):
        for values in product(range(1, n + 1), repeat=l // 2):
            j = [0] * l
            for (s, t), v in zip(pairing.pairs, values):
                j[s - 1] = v
                j[t - 1] = v
            candidates.add(tuple(j))
    return sorted(candidates)


def invariance_check(
    fmatrix: FMatrix, l: int, eps, i, w: StarWord = None, cache_dir=None
) -> InvarianceReport:
    """Pair the rotation-invariance identity against the Haar state and a word.

    lhs sums h(u-word(i,j,ε)·w)·φ(x_j^ε) over all column words j; rhs is
    φ(x_i^ε)·h(w).  The two agree exactly for the canonical family.
    """
    eps = validate_sign_pattern(eps, l)
    i = tuple(i)
    if len(i) != l:
        raise ValueError(f"expected {l} row indices, got {len(i)}")
    for x in i:
        fmatrix.check_index(x, "row")
    if fmatrix.n**l > INVARIANCE_BUDGET:
        raise BudgetExceeded(
            f"invariance sum needs {fmatrix.n}^{l} column words, over the cap"
        )
    w = _test_word(w)
    family = rotation_invariant_family(fmatrix)

    with fmatrix.precision():
        lhs = fmatrix.zero()
        for j in _candidate_columns(l, eps, fmatrix.n):
            free_part = free_moment(family, j, eps)
            if not free_part:
                continue
            haar_part = haar_star_moment(
                fmatrix, StarWord(i, j, eps).concat(w), cache_dir
            )
            lhs = lhs + free_part * haar_part
        rhs = free_moment(family, i, eps) * haar_star_moment(fmatrix, w, cache_dir)
        difference = lhs - rhs
    return InvarianceReport(
        identity="rotation-invariance",
        l=l,
        eps=eps,
        i=i,
        word=w.label(),
        lhs=lhs,
        rhs=rhs,
        difference=difference,
    )
