"""Integer partitions, the set-partition lattice P[n], and the c_mu coefficients.

Integer partitions are weakly decreasing tuples. A set partition is a tuple
of blocks, each block a sorted tuple, blocks ordered by their minimum.
Lambda <= Pi means Pi is obtained from Lambda by merging blocks, so the
all-singletons partition is the bottom element.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .exact_core import TruncatedSeries

IntPartition = tuple[int, ...]
SetPartition = tuple[tuple[int, ...], ...]


# ---------------------------------------------------------------- integer partitions

def all_partitions(n: int) -> list[IntPartition]:
    """Partitions of n in reverse-lexicographic order: (n), (n-1, 1), ..., (1^n)."""
    if n < 0:
        raise ValueError("n must be >= 0")

    def gen(rest: int, cap: int) -> Iterator[IntPartition]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    return list(gen(n, n))


def partition_factorial(lam: Sequence[int]) -> int:
    """lambda! = lambda_1! lambda_2! ..."""
    return math.prod(math.factorial(part) for part in lam)


def encode_partition(lam: Sequence[int]) -> str:
    return "+".join(str(x) for x in lam)


def decode_partition(text: str) -> IntPartition:
    parts = tuple(int(x) for x in text.split("+"))
    if any(x < 1 for x in parts) or list(parts) != sorted(parts, reverse=True):
        raise ValueError(f"not a partition: {text!r}")
    return parts


# ---------------------------------------------------------------- set partitions

def canonical(blocks: Iterable[Iterable[int]]) -> SetPartition:
    bl = [tuple(sorted(b)) for b in blocks if b]
    return tuple(sorted(bl, key=lambda b: b[0]))


def set_partitions(n: int) -> list[SetPartition]:
    """All Bell(n) set partitions of {1..n}, generated from restricted growth strings."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return [()]
    out = []

    def rgs(prefix: list[int], top: int) -> None:
        if len(prefix) == n:
            blocks: list[list[int]] = [[] for _ in range(top + 1)]
            for elem, label in enumerate(prefix, start=1):
                blocks[label].append(elem)
            out.append(tuple(tuple(b) for b in blocks))
            return
        for label in range(top + 2):
            prefix.append(label)
            rgs(prefix, max(top, label))
            prefix.pop()

    rgs([0], 0)
    return out


def bottom(n: int) -> SetPartition:
    return tuple((i,) for i in range(1, n + 1))


def top(n: int) -> SetPartition:
    return (tuple(range(1, n + 1)),) if n else ()


def ground_size(part: SetPartition) -> int:
    return sum(len(b) for b in part)


def leq(lam: SetPartition, pi: SetPartition) -> bool:
    """True iff every block of lam lies inside some block of pi."""
    if ground_size(lam) != ground_size(pi):
        raise ValueError("set partitions of different ground sets")
    where = {x: k for k, b in enumerate(pi) for x in b}
    return all(len({where[x] for x in b}) == 1 for b in lam)


def pi_of_lambda(lam: Sequence[int]) -> SetPartition:
    """Consecutive-interval set partition {1..lam_1}, {lam_1+1..lam_1+lam_2}, ... of type lam."""
    blocks, start = [], 1
    for part in lam:
        blocks.append(tuple(range(start, start + part)))
        start += part
    return tuple(blocks)


def type_of(part: SetPartition) -> IntPartition:
    return tuple(sorted((len(b) for b in part), reverse=True))


def _signed_factorial(m: int) -> int:
    # Moebius value of the bottom-to-top interval of P[m]
    return (-1) ** (m - 1) * math.factorial(m - 1)


def mobius(pi: SetPartition, lam: SetPartition) -> int:
    """mu(pi, lam) on P[n]; factors over the blocks of lam."""
    if not leq(pi, lam):
        raise ValueError("mobius(pi, lam) requires pi <= lam")
    where = {x: k for k, b in enumerate(lam) for x in b}
    merged = Counter(where[b[0]] for b in pi)
    return math.prod(_signed_factorial(m) for m in merged.values())


def upper_ideal(pi: SetPartition) -> list[SetPartition]:
    """All lam >= pi, obtained by set-partitioning the blocks of pi."""
    out = []
    for coarse in set_partitions(len(pi)):
        out.append(canonical(
            itertools.chain.from_iterable(pi[i - 1] for i in group) for group in coarse
        ))
    return out


# ---------------------------------------------------------------- c_mu

def list_weight(lam: Sequence[int]) -> int:
    """n! / prod_i m_i! where m_i counts parts of size i.

    n! M_lambda = list_weight(lambda) * S_{Pi(lambda)}: a list with equality
    pattern exactly Pi(lambda) determines its multiset, and each multiset of
    type lambda has prod_i m_i! such lists.
    """
    return math.factorial(sum(lam)) // math.prod(math.factorial(m) for m in Counter(lam).values())


def _cmu_collapsed(n: int, weight) -> dict[IntPartition, int]:
    # the upper ideal above Pi(lambda) is walked as P[len(lambda)]
    table: dict[IntPartition, int] = {mu: 0 for mu in all_partitions(n)}
    for lam in all_partitions(n):
        w = weight(lam)
        for coarse in set_partitions(len(lam)):
            sizes = tuple(sorted((sum(lam[i - 1] for i in g) for g in coarse), reverse=True))
            mob = math.prod(_signed_factorial(len(g)) for g in coarse)
            table[sizes] += w * mob
    return table


@lru_cache(maxsize=None)
def c_mu(n: int) -> dict[IntPartition, int]:
    """Coefficients of F_n = sum_mu c_mu [(1-p)(1-q)]^(n-len(mu)) / prod_i [mu_i]_p [mu_i]_q.

    c_mu = sum_lambda w(lambda) sum_{L >= Pi(lambda), type(L) = mu} mu(Pi(lambda), L)
    with w = list_weight.
    """
    return _cmu_collapsed(n, list_weight)


@lru_cache(maxsize=None)
def c_mu_printed(n: int) -> dict[IntPartition, int]:
    """Same sum weighted by lambda! instead of list_weight.

    Agrees with c_mu only for n <= 2; it does not reproduce F_n beyond that.
    """
    return _cmu_collapsed(n, partition_factorial)


def c_mu_lattice(n: int, weight=list_weight) -> dict[IntPartition, int]:
    """c_mu by filtering all of P[n]; slow, kept as an independent cross-check."""
    table: dict[IntPartition, int] = {mu: 0 for mu in all_partitions(n)}
    everything = set_partitions(n)
    for lam in all_partitions(n):
        base = pi_of_lambda(lam)
        w = weight(lam)
        for big in everything:
            if leq(base, big):
                table[type_of(big)] += w * mobius(base, big)
    return table


def encode_cmu_csv(table: dict[IntPartition, int]) -> str:
    lines = ["mu,c"] + [f"{encode_partition(mu)},{c}" for mu, c in table.items()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- Stirling numbers

@lru_cache(maxsize=None)
def stirling_cycles(m: int, j: int) -> int:
    """Unsigned Stirling number of the first kind: permutations of [m] with j cycles."""
    if m < 0 or j < 0:
        raise ValueError("arguments must be nonnegative")
    if m == 0:
        return 1 if j == 0 else 0
    if j == 0 or j > m:
        return 0
    return stirling_cycles(m - 1, j - 1) + (m - 1) * stirling_cycles(m - 1, j)


def block_mobius_terms(lam: Sequence[int], d: int) -> list[int]:
    """mu(Pi(lambda), L) for every L >= Pi(lambda) with n - d blocks, by lattice enumeration."""
    n = sum(lam)
    base = pi_of_lambda(lam)
    return [mobius(base, big) for big in _set_partitions_cached(n)
            if len(big) == n - d and leq(base, big)]


@lru_cache(maxsize=None)
def _set_partitions_cached(n: int) -> tuple[SetPartition, ...]:
    return tuple(set_partitions(n))


def signed_block_sum(lam: Sequence[int], d: int) -> int:
    return sum(block_mobius_terms(lam, d))


def signed_stirling(lam: Sequence[int], d: int) -> int:
    """(-1)^(d-k) c(n-k, n-d) with k = n - len(lambda); zero outside k <= d <= n."""
    n = sum(lam)
    k = n - len(lam)
    if d < k or d > n:
        return 0
    return (-1) ** (d - k) * stirling_cycles(n - k, n - d)


def abs_block_sums(n: int) -> dict[tuple[int, int], int]:
    """(k, d) -> sum over lambda with n - k parts of lambda! * c(n-k, n-d).

    This is the grouped absolute Moebius sum; the per-lambda absolute sum
    depends only on the number of parts, by the collapse isomorphism.
    """
    fact_by_k: dict[int, int] = defaultdict(int)
    for lam in all_partitions(n):
        fact_by_k[n - len(lam)] += partition_factorial(lam)
    return {(k, d): fact_by_k[k] * stirling_cycles(n - k, n - d)
            for k in fact_by_k for d in range(k, n + 1)}


# ---------------------------------------------------------------- generating functions

def r_lambda_series(lam: SetPartition, trunc: int) -> TruncatedSeries:
    """Lists constant on each block: prod_A 1/((1 - p^|A|)(1 - q^|A|))."""
    s = TruncatedSeries.one(trunc, trunc)
    for b in lam:
        s = s.mul_geometric(len(b), "p").mul_geometric(len(b), "q")
    return s


def s_pi_series(pi: SetPartition, trunc: int) -> TruncatedSeries:
    """Lists constant on blocks and distinct across blocks, by Moebius inversion of R."""
    s = TruncatedSeries.zero(trunc, trunc)
    for big in upper_ideal(pi):
        s = s + r_lambda_series(big, trunc) * mobius(pi, big)
    return s


def m_lambda_series(lam: Sequence[int], trunc: int) -> TruncatedSeries:
    """Multisets of points of N^2 of type lambda, enumerated directly.

    A multiset of type lambda assigns distinct points to the parts; parts of
    equal size receive an unordered set of points, which removes the overcount.
    """
    grid = [[0] * (trunc + 1) for _ in range(trunc + 1)]
    points = [(a, b) for a in range(trunc + 1) for b in range(trunc + 1)]
    groups = sorted(Counter(lam).items(), reverse=True)

    def walk(g: int, used: frozenset, wp: int, wq: int) -> None:
        if g == len(groups):
            grid[wp][wq] += 1
            return
        size, mult = groups[g]
        free = [pt for pt in points if pt not in used
                and wp + size * pt[0] <= trunc and wq + size * pt[1] <= trunc]
        for chosen in itertools.combinations(free, mult):
            ap = wp + size * sum(pt[0] for pt in chosen)
            aq = wq + size * sum(pt[1] for pt in chosen)
            if ap <= trunc and aq <= trunc:
                walk(g + 1, used | set(chosen), ap, aq)

    walk(0, frozenset(), 0, 0)
    return TruncatedSeries(grid, trunc, trunc)
