"""Inversions, major index, and the brute-force joint (inv, maj) table over S_n."""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exact_core import BivarPoly, _zeros, terms_from_csv, terms_to_csv

# Suffixes longer than this are split into lexicographic prefix ranges.
_BLOCK = 8


def _check_perm(w: Sequence[int]) -> None:
    if sorted(w) != list(range(1, len(w) + 1)):
        raise ValueError(f"not a permutation of 1..{len(w)}: {list(w)}")


def inv(w: Sequence[int]) -> int:
    _check_perm(w)
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def maj(w: Sequence[int]) -> int:
    _check_perm(w)
    return sum(i + 1 for i in range(len(w) - 1) if w[i] > w[i + 1])


@dataclass(frozen=True, eq=False)
class JointTable:
    """counts[i, j] = #{w in S_n : inv(w) = i, maj(w) = j}."""

    n: int
    counts: np.ndarray

    def __post_init__(self):
        side = math.comb(self.n, 2) + 1
        if self.counts.shape != (side, side):
            raise ValueError(f"table for n={self.n} must be {side}x{side}, got {self.counts.shape}")
        self.counts.flags.writeable = False

    def __eq__(self, other) -> bool:
        if not isinstance(other, JointTable):
            return NotImplemented
        return self.n == other.n and bool(np.all(self.counts == other.counts))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def inv_marginal(self) -> list[int]:
        return [int(c) for c in self.counts.sum(axis=1)]

    def maj_marginal(self) -> list[int]:
        return [int(c) for c in self.counts.sum(axis=0)]

    def to_csv(self, header: str | None = None) -> str:
        return terms_to_csv(self.counts, ("inv", "maj", "count"), header)

    @classmethod
    def from_csv(cls, n: int, text: str) -> "JointTable":
        return table_from_terms(n, terms_from_csv(text, ("inv", "maj", "count")))


def table_from_terms(n: int, terms: dict[tuple[int, int], int]) -> JointTable:
    side = math.comb(n, 2) + 1
    grid = _zeros(side, side)
    for (i, j), c in terms.items():
        if i >= side or j >= side:
            raise ValueError(f"entry ({i},{j}) outside the support of H_{n}")
        grid[i, j] = c
    return JointTable(n, grid)


def _suffix_perms(m: int) -> np.ndarray:
    if m == 0:
        return np.zeros((1, 0), dtype=np.int8)
    return np.array(list(itertools.permutations(range(m))), dtype=np.int8)


def _count_prefix_range(args: tuple[int, list[tuple[int, ...]]]) -> np.ndarray:
    """Counts (as int64, flattened) for every permutation starting with one of the prefixes."""
    n, prefixes = args
    side = math.comb(n, 2) + 1
    acc = np.zeros(side * side, dtype=np.int64)
    m = n - (len(prefixes[0]) if prefixes else 0)
    base = _suffix_perms(m)
    # statistics of the suffix block on its own
    pair_i, pair_j = np.triu_indices(m, k=1)
    suf_inv = (base[:, pair_i] > base[:, pair_j]).sum(axis=1, dtype=np.int64)
    for prefix in prefixes:
        r = len(prefix)
        rest = sorted(set(range(n)) - set(prefix))
        pre = np.array(prefix, dtype=np.int64)
        # suffix values are rest[base]; rest is increasing so relative order is kept
        pre_inv = sum(1 for a in range(r) for b in range(a + 1, r) if prefix[a] > prefix[b])
        cross = sum(1 for a in prefix for v in rest if a > v)
        inv_tot = suf_inv + (pre_inv + cross)
        words = np.asarray(rest, dtype=np.int64)[base] if m else np.zeros((1, 0), dtype=np.int64)
        if r and m:
            full = np.concatenate([np.broadcast_to(pre, (len(words), r)), words], axis=1)
        elif r:
            full = np.broadcast_to(pre, (1, r))
        else:
            full = words
        desc = full[:, :-1] > full[:, 1:]
        maj_tot = (desc * np.arange(1, n, dtype=np.int64)).sum(axis=1)
        acc += np.bincount(inv_tot * side + maj_tot, minlength=side * side)
    return acc


def joint_table_bruteforce(n: int, workers: int | None = None) -> JointTable:
    """Enumerate S_n in lexicographic order and tally (inv, maj).

    The enumeration is split into contiguous lexicographic ranges (all words
    sharing a prefix); per-range tables are merged by exact addition.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    side = math.comb(n, 2) + 1
    if n == 0:
        grid = _zeros(1, 1)
        grid[0, 0] = 1
        return JointTable(0, grid)
    r = max(0, n - _BLOCK)
    prefixes = list(itertools.permutations(range(n), r))
    if workers is None:
        workers = int(os.environ.get("MAHONIAN_THREADS", "0")) or 1
    size = max(1, math.ceil(len(prefixes) / (4 * workers)))
    chunks = [prefixes[k : k + size] for k in range(0, len(prefixes), size)]
    jobs = [(n, c) for c in chunks]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_count_prefix_range, jobs))
    else:
        parts = [_count_prefix_range(j) for j in jobs]
    grid = _zeros(side, side)
    for part in parts:
        grid += part.reshape(side, side).astype(object)
    return JointTable(n, grid)


def table_to_poly(t: JointTable) -> BivarPoly:
    return BivarPoly(t.counts).canonical()


def poly_to_table(n: int, h: BivarPoly) -> JointTable:
    return table_from_terms(n, h.terms())
