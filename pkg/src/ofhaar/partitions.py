"""Pairings and partitions of {1..k}: enumeration, joins, and kernel tests.

Non-crossing pairings index every Gram and Weingarten matrix in the engine,
so their enumeration order is part of the artifact contract: pairings are
serialized as pair lists sorted by left endpoint, and enumeration returns
them in lexicographic order on those lists.  Joins are taken in the full
partition lattice, not in the non-crossing one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

PLAIN = "1"
STAR = "*"

#: a sign pattern is a tuple of PLAIN/STAR tokens, one per word position
SignPattern = tuple

_SIGN_TOKENS = frozenset((PLAIN, STAR))


def _has_crossing(pairs) -> bool:
    for a, (s1, t1) in enumerate(pairs):
        for s2, t2 in pairs[a + 1 :]:
            if s1 < s2 < t1 < t2:
                return True
    return False


@dataclass(frozen=True)
class Pairing:
    """A perfect matching of {1..k}, stored as (s, t) pairs sorted by s."""

    k: int
    pairs: tuple
    noncrossing: bool = field(init=False)

    def __post_init__(self):
        pairs = tuple(tuple(p) for p in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        seen = set()
        for s, t in pairs:
            if not s < t:
                raise ValueError(f"pair ({s},{t}) must satisfy s < t")
            seen.update((s, t))
        if len(seen) != 2 * len(pairs) or seen != set(range(1, self.k + 1)):
            raise ValueError(f"pairs do not cover 1..{self.k} exactly once")
        if list(pairs) != sorted(pairs):
            raise ValueError("pairs must be sorted by left endpoint")
        object.__setattr__(self, "noncrossing", not _has_crossing(pairs))

    def __str__(self):
        return "".join(f"({s},{t})" for s, t in self.pairs) or "()"


@dataclass(frozen=True)
class Partition:
    """A set partition of {1..k} into blocks ordered by their minima."""

    k: int
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen = set()
        for block in blocks:
            if not block:
                raise ValueError("blocks must be non-empty")
            seen.update(block)
        if sum(len(b) for b in blocks) != self.k or seen != set(range(1, self.k + 1)):
            raise ValueError(f"blocks do not cover 1..{self.k} exactly once")
        if [b[0] for b in blocks] != sorted(b[0] for b in blocks):
            raise ValueError("blocks must be ordered by minimum")


def validate_sign_pattern(eps, k: int) -> tuple:
    eps = tuple(eps)
    if len(eps) != k:
        raise ValueError(f"sign pattern has length {len(eps)}, expected {k}")
    bad = [token for token in eps if token not in _SIGN_TOKENS]
    if bad:
        raise ValueError(f"invalid sign tokens {bad!r}; use {PLAIN!r} or {STAR!r}")
    return eps


def _nc2_pair_lists(points):
    """Yield the non-crossing pair lists on an increasing tuple of points."""
    if not points:
        yield ()
        return
    first = points[0]
    for cut in range(1, len(points), 2):
        partner = points[cut]
        for inner in _nc2_pair_lists(points[1:cut]):
            for outer in _nc2_pair_lists(points[cut + 1 :]):
                yield ((first, partner),) + inner + outer


@lru_cache(maxsize=None)
def enumerate_nc2(k: int):
    """All non-crossing pairings of {1..k}, in canonical (lexicographic) order.

    Odd k has no pairings and yields the empty tuple; k = 0 has exactly the
    empty pairing.
    """
    if k < 0:
        raise ValueError("ground-set size must be non-negative")
    if k % 2:
        return ()
    return tuple(
        Pairing(k, pairs) for pairs in _nc2_pair_lists(tuple(range(1, k + 1)))
    )


def enumerate_nc2_eps(k: int, eps):
    """Non-crossing pairings whose every pair mixes a plain and a star letter."""
    eps = validate_sign_pattern(eps, k)
    return tuple(
        pairing
        for pairing in enumerate_nc2(k)
        if all(eps[s - 1] != eps[t - 1] for s, t in pairing.pairs)
    )


def _blocks_of(partition_like):
    if isinstance(partition_like, Pairing):
        return partition_like.pairs
    if isinstance(partition_like, Partition):
        return partition_like.blocks
    raise TypeError(f"expected Pairing or Partition, got {type(partition_like).__name__}")


def join_block_count(pi, sigma) -> int:
    """Number of blocks of the join of two pairings in the full partition lattice."""
    if pi.k != sigma.k:
        raise ValueError(f"mismatched ground sets: {pi.k} vs {sigma.k}")
    parent = list(range(pi.k + 1))

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for s, t in _blocks_of(pi) + _blocks_of(sigma):
        parent[find(s)] = find(t)
    return len({find(x) for x in range(1, pi.k + 1)})


def kernel_refines(pi, labels) -> bool:
    """True iff the multi-index ``labels`` is constant on every block of ``pi``."""
    blocks = _blocks_of(pi)
    labels = tuple(labels)
    for block in blocks:
        first = labels[block[0] - 1]
        if any(labels[x - 1] != first for x in block[1:]):
            return False
    return True
