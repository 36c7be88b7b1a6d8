"""Deformed Gram matrices on non-crossing pairings and their exact inverses.

The Gram matrix has the closed form c^(L/2+|π∨σ|)·N_F^|π∨σ|; the brute-force
route computes the same inner products by summing conjugated index-weight
products over all N^L multi-indices, and exists purely as an independent
oracle.  Inverses (the Weingarten tables) are exact and cached, in memory and
optionally on disk, keyed by word length and matrix fingerprint.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from itertools import product

from filelock import FileLock

from . import linalg
from .deformation import FMatrix
from .partitions import Pairing, enumerate_nc2, join_block_count
from .scalars import format_scalar, parse_scalar

#: longest supported word (Catalan(6) = 132 pairings; exact inversion stays desk-scale)
MAX_WORD_LENGTH = 12

#: cap on N^L for the brute-force Gram oracle
BRUTEFORCE_BUDGET = 10**7

_CACHE_FORMAT = "ofhaar-weingarten-table"
_CACHE_VERSION = 1

_memory_cache = {}


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured budget."""


@dataclass(frozen=True)
class WeingartenTable:
    """Gram matrix and its exact inverse on the canonical pairing order."""

    l: int
    f_fingerprint: str
    order: tuple
    gram: tuple
    wg: tuple


def _check_length(l: int):
    if l < 0 or l % 2:
        raise ValueError(f"word length must be even and non-negative, got {l}")
    if l > MAX_WORD_LENGTH:
        raise ValueError(
            f"word length {l} exceeds the supported ceiling {MAX_WORD_LENGTH}"
        )


def delta(fmatrix: FMatrix, pairing: Pairing, idx) -> object:
    """Product of F entries over the pairs, right index first: Π F[i(t), i(s)]."""
    idx = tuple(idx)
    if len(idx) != pairing.k:
        raise ValueError(
            f"multi-index has length {len(idx)}, pairing covers {pairing.k}"
        )
    for x in idx:
        fmatrix.check_index(x)
    value = fmatrix.one()
    for s, t in pairing.pairs:
        factor = fmatrix.entry(idx[t - 1], idx[s - 1])
        if not factor:
            return fmatrix.zero()
        value = value * factor
    return value


def gram_closed(l: int, fmatrix: FMatrix):
    """Gram matrix from the closed form, as a grid over the canonical order."""
    _check_length(l)
    order = enumerate_nc2(l)
    half = l // 2
    with fmatrix.precision():
        powers = [fmatrix.one()]
        for _ in range(half):
            powers.append(powers[-1] * fmatrix.nf)
        grid = []
        for pi in order:
            row = []
            for sigma in order:
                blocks = join_block_count(pi, sigma)
                value = powers[blocks]
                if fmatrix.c == -1 and (half + blocks) % 2:
                    value = -value
                row.append(value)
            grid.append(row)
    return grid


def gram_bruteforce(l: int, fmatrix: FMatrix):
    """Gram matrix summed from first principles over all N^L multi-indices."""
    _check_length(l)
    n = fmatrix.n
    if n**l > BRUTEFORCE_BUDGET:
        raise BudgetExceeded(
            f"brute force needs {n}^{l} index tuples, over the {BRUTEFORCE_BUDGET} cap"
        )
    order = enumerate_nc2(l)
    m = len(order)
    with fmatrix.precision():
        grid = [[fmatrix.zero() for _ in range(m)] for _ in range(m)]
        for idx in product(range(1, n + 1), repeat=l):
            weights = [delta(fmatrix, pairing, idx) for pairing in order]
            live = [a for a, w in enumerate(weights) if w]
            for a in live:
                conj_weight = weights[a].conjugate()
                row = grid[a]
                for b in live:
                    row[b] = row[b] + conj_weight * weights[b]
    return grid


def weingarten(l: int, fmatrix: FMatrix, cache_dir=None) -> WeingartenTable:
    """Gram matrix and exact inverse for length l, cached by (l, fingerprint)."""
    _check_length(l)
    key = (fmatrix.fingerprint, l)
    table = _memory_cache.get(key)
    if table is not None:
        return table

    path = None
    if cache_dir is not None and fmatrix.exact:
        path = os.path.join(
            str(cache_dir), f"wg_l{l}_{fmatrix.fingerprint[:16]}.json"
        )
        table = _load_table(path, l, fmatrix.fingerprint)
        if table is not None:
            _memory_cache[key] = table
            return table

    gram = gram_closed(l, fmatrix)
    with fmatrix.precision():
        wg = linalg.invert_matrix(
            gram, fmatrix.one(), fmatrix.zero(), exact=fmatrix.exact, tol=fmatrix.tol
        )
    table = WeingartenTable(
        l=l,
        f_fingerprint=fmatrix.fingerprint,
        order=enumerate_nc2(l),
        gram=tuple(tuple(row) for row in gram),
        wg=tuple(tuple(row) for row in wg),
    )
    _memory_cache[key] = table
    if path is not None:
        _store_table(path, table)
    return table


def clear_memory_cache():
    _memory_cache.clear()


def _table_document(table: WeingartenTable) -> dict:
    return {
        "format": _CACHE_FORMAT,
        "version": _CACHE_VERSION,
        "l": table.l,
        "f_fingerprint": table.f_fingerprint,
        "order": [[list(pair) for pair in pairing.pairs] for pairing in table.order],
        "gram": [[format_scalar(x) for x in row] for row in table.gram],
        "wg": [[format_scalar(x) for x in row] for row in table.wg],
    }


def _store_table(path: str, table: WeingartenTable):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    payload = json.dumps(_table_document(table), sort_keys=True, indent=None)
    with FileLock(path + ".lock"):
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as handle:
                handle.write(payload)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)


def _load_table(path: str, l: int, fingerprint: str):
    if not os.path.exists(path):
        return None
    with open(path) as handle:
        doc = json.load(handle)
    if doc.get("format") != _CACHE_FORMAT or doc.get("version") != _CACHE_VERSION:
        return None
    if doc.get("l") != l or doc.get("f_fingerprint") != fingerprint:
        return None
    order = tuple(
        Pairing(l, tuple(tuple(pair) for pair in pairs)) for pairs in doc["order"]
    )
    gram = tuple(tuple(parse_scalar(x) for x in row) for row in doc["gram"])
    wg = tuple(tuple(parse_scalar(x) for x in row) for row in doc["wg"])
    return WeingartenTable(l=l, f_fingerprint=fingerprint, order=order, gram=gram, wg=wg)
