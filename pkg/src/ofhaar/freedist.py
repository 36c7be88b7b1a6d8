"""Moment formulas for free semicircular / generalized circular families.

Joint *-moments of a free family are sums over non-crossing pairings below
the kernel of the label word, with each pair contributing a second moment:
left variance for a (star, plain) pair, right variance for (plain, star),
zero otherwise.  Semicircular entries are self-adjoint, so their pairs
contribute the variance regardless of stars.

The module also builds the limit family attached to a deformation matrix
(variances come straight off the diagonal of Q and its inverse), extracts
the almost-periodic rotation parameter of a single generalized circular
element, and evaluates mixed moments in a two-sided free product by the
centering recursion, which is what the unitary-model moments reduce to.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .deformation import FMatrix, NonMonomialF
from .haar import StarWord, haar_star_moment
from .partitions import PLAIN, STAR, enumerate_nc2, kernel_refines, validate_sign_pattern
from .scalars import DEFAULT_PRECISION_BITS, rational_sqrt

SEMICIRCULAR = "semicircular"
GENERALIZED_CIRCULAR = "generalized-circular"

#: ceiling on free-product word length (block subsets grow exponentially)
FREE_PRODUCT_MAX_LENGTH = 12


@dataclass(frozen=True)
class GCSpec:
    """One free generator: its label, kind, and left/right variances."""

    label: object
    kind: str
    left_var: object
    right_var: object

    def __post_init__(self):
        if self.kind not in (SEMICIRCULAR, GENERALIZED_CIRCULAR):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.left_var <= 0 or self.right_var <= 0:
            raise ValueError("variances must be positive")
        if self.kind == SEMICIRCULAR and self.left_var != self.right_var:
            raise ValueError("semicircular elements have equal left/right variances")


def standard_semicircular(label) -> GCSpec:
    return GCSpec(label, SEMICIRCULAR, Fraction(1), Fraction(1))


def _pair_covariance(spec: GCSpec, eps_s, eps_t):
    if spec.kind == SEMICIRCULAR:
        return spec.left_var
    if eps_s == STAR and eps_t == PLAIN:
        return spec.left_var
    if eps_s == PLAIN and eps_t == STAR:
        return spec.right_var
    return 0


def free_moment(family, labels, eps):
    """Joint *-moment of a free family at the given label word and signs."""
    labels = tuple(labels)
    length = len(labels)
    eps = validate_sign_pattern(eps, length)
    specs = {}
    for spec in family:
        if spec.label in specs:
            raise ValueError(f"duplicate label {spec.label!r}")
        specs[spec.label] = spec
    unknown = [r for r in labels if r not in specs]
    if unknown:
        raise ValueError(f"labels {unknown!r} not in the family")
    if length % 2:
        return Fraction(0)

    total = 0
    for pairing in enumerate_nc2(length):
        if not kernel_refines(pairing, labels):
            continue
        term = 1
        for s, t in pairing.pairs:
            cov = _pair_covariance(specs[labels[s - 1]], eps[s - 1], eps[t - 1])
            if not cov:
                term = 0
                break
            term = term * cov
        total = total + term
    return total if total else Fraction(0)


class LimitFamily:
    """Free limit variables of the rescaled generators, indexed by (i, j)."""

    def __init__(self, fmatrix: FMatrix, specs):
        self.fmatrix = fmatrix
        self._by_position = {spec.label: spec for spec in specs}
        self.family = tuple(specs)
        self.positions = frozenset(self._by_position)

    def spec_at(self, i: int, j: int) -> GCSpec:
        return self._by_position[(i, j)]

    def moment(self, word: StarWord):
        labels = tuple(zip(word.i, word.j))
        return free_moment(self.family, labels, word.eps)


def limit_family(fmatrix: FMatrix) -> LimitFamily:
    """The free family matching the generator variances, over the generating grid.

    Entries with both indices in the undeformed (fixed) block are standard
    semicircular; every other grid entry is generalized circular with
    variances ((Q⁻¹)_ii, Q_jj).
    """
    fmatrix.require_canonical_type()
    fixed = set(fmatrix.fixed_points())
    specs = []
    for i, j in sorted(fmatrix.generating_positions()):
        left = fmatrix.q_inv_entry(i, i)
        right = fmatrix.q_entry(j, j)
        if fmatrix.exact:
            left, right = left.to_fraction(), right.to_fraction()
        if i in fixed and j in fixed:
            specs.append(GCSpec((i, j), SEMICIRCULAR, left, right))
        else:
            specs.append(GCSpec((i, j), GENERALIZED_CIRCULAR, left, right))
    return LimitFamily(fmatrix, specs)


def araki_woods_lambda(left_var, right_var):
    """Rotation parameter min(α/β, β/α) of a generalized circular element.

    Exact when the variance ratio is a perfect rational square, otherwise a
    high-precision float.
    """
    if left_var <= 0 or right_var <= 0:
        raise ValueError("variances must be positive")
    if isinstance(left_var, (int, Fraction)) and isinstance(right_var, (int, Fraction)):
        ratio = Fraction(left_var) / Fraction(right_var)
        if ratio > 1:
            ratio = 1 / ratio
        root = rational_sqrt(ratio)
        if root is not None:
            return root
        with mpmath.workprec(DEFAULT_PRECISION_BITS):
            return mpmath.sqrt(mpmath.mpf(ratio.numerator) / ratio.denominator)
    with mpmath.workprec(DEFAULT_PRECISION_BITS):
        ratio = mpmath.mpf(left_var) / mpmath.mpf(right_var)
        if ratio > 1:
            ratio = 1 / ratio
        return mpmath.sqrt(ratio)


def _merge_blocks(tagged_letters):
    blocks = []
    for tag, letter in tagged_letters:
        if blocks and blocks[-1][0] == tag:
            blocks[-1] = (tag, blocks[-1][1] + (letter,))
        else:
            blocks.append((tag, (letter,)))
    return tuple(blocks)


def _merge_block_seq(blocks):
    merged = []
    for tag, letters in blocks:
        if merged and merged[-1][0] == tag:
            merged[-1] = (tag, merged[-1][1] + letters)
        else:
            merged.append((tag, letters))
    return tuple(merged)


def free_product_moment(a_moments, b_moments, word):
    """Mixed moment of a word over two free algebras A and B.

    ``word`` is a sequence of ("A", letter) / ("B", letter) items and the two
    arguments are the moment functionals of the factors (value 1 on the empty
    word).  Alternating products of centered blocks vanish by freeness;
    expanding each block into centered part plus mean turns that into a
    recursion over words with strictly fewer blocks.
    """
    word = tuple(word)
    if len(word) > FREE_PRODUCT_MAX_LENGTH:
        raise ValueError(
            f"word length {len(word)} exceeds the free-product ceiling "
            f"{FREE_PRODUCT_MAX_LENGTH}"
        )
    functionals = {"A": a_moments, "B": b_moments}
    for tag, _ in word:
        if tag not in functionals:
            raise ValueError(f"letters must be tagged 'A' or 'B', got {tag!r}")

    block_means = {}

    def mean(tag, letters):
        key = (tag, letters)
        if key not in block_means:
            block_means[key] = functionals[tag](letters)
        return block_means[key]

    memo = {}

    def phi(blocks):
        if not blocks:
            return Fraction(1)
        if len(blocks) == 1:
            tag, letters = blocks[0]
            return mean(tag, letters)
        if blocks in memo:
            return memo[blocks]
        m = len(blocks)
        means = [mean(tag, letters) for tag, letters in blocks]
        total = 0
        for mask in range(1, 1 << m):
            coeff = 1
            for pos in range(m):
                if mask >> pos & 1:
                    coeff = coeff * means[pos]
                    if not coeff:
                        break
            if not coeff:
                continue
            kept = tuple(blocks[pos] for pos in range(m) if not mask >> pos & 1)
            sign = 1 if mask.bit_count() % 2 else -1
            total = total + sign * coeff * phi(_merge_block_seq(kept))
        result = total if total else Fraction(0)
        memo[blocks] = result
        return result

    return phi(_merge_blocks(word))


def haar_unitary_moments(letters):
    """Moments of a Haar unitary: letters are ±1 powers, value δ(total power, 0)."""
    return Fraction(1) if sum(letters) == 0 else Fraction(0)


def unitary_star_moment(fmatrix: FMatrix, word: StarWord, cache_dir=None):
    """Haar *-moment of the unitary-model generators v_{ij}.

    Each v_{ij} expands as (Haar unitary)·u_{ij} in the free product of the
    circle algebra with the orthogonal one, so the moment reduces to
    free-product bookkeeping over Haar-unitary powers and u-words.
    """
    if not fmatrix.monomial:
        raise NonMonomialF("unitary-model moments require a monomial matrix")
    if 2 * len(word) > FREE_PRODUCT_MAX_LENGTH:
        raise ValueError(
            f"word length {len(word)} exceeds the unitary-model ceiling "
            f"{FREE_PRODUCT_MAX_LENGTH // 2}"
        )
    tagged = []
    for a, b, e in zip(word.i, word.j, word.eps):
        if e == PLAIN:
            tagged.append(("A", 1))
            tagged.append(("B", (a, b, PLAIN)))
        else:
            tagged.append(("B", (a, b, STAR)))
            tagged.append(("A", -1))

    def u_moments(letters):
        rows = tuple(x[0] for x in letters)
        cols = tuple(x[1] for x in letters)
        eps = tuple(x[2] for x in letters)
        return haar_star_moment(fmatrix, StarWord(rows, cols, eps), cache_dir)

    return free_product_moment(haar_unitary_moments, u_moments, tagged)
