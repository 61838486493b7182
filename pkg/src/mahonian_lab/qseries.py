"""q-analogs and the series route to H_n through Roselle's product.

The z^n coefficient of prod_{a,b>=0} 1/(1 - p^a q^b z) is the complete
homogeneous function h_n of the alphabet {p^a q^b}; it is computed with
Newton's identities n h_n = sum_k P_k h_{n-k}, where the power sum
P_k = 1/((1 - p^k)(1 - q^k)) is applied as two strided running sums.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .exact_core import BivarPoly, TruncatedSeries


def _univariate(coeffs: list[int], var: str) -> BivarPoly:
    if var == "p":
        return BivarPoly([[c] for c in coeffs])
    if var == "q":
        return BivarPoly([coeffs])
    raise ValueError(f"variable must be 'p' or 'q', got {var!r}")


def q_int(c: int, var: str = "p") -> BivarPoly:
    """[c] = 1 + x + ... + x^(c-1)."""
    if c < 1:
        raise ValueError("q_int needs c >= 1")
    return _univariate([1] * c, var)


def q_factorial(n: int, var: str = "p") -> BivarPoly:
    if n < 0:
        raise ValueError("q_factorial needs n >= 0")
    out = BivarPoly.one()
    for c in range(2, n + 1):
        out = out * q_int(c, var)
    return out


def pochhammer(n: int, var: str = "p") -> BivarPoly:
    """(x)_n = (1 - x)(1 - x^2)...(1 - x^n)."""
    if n < 0:
        raise ValueError("pochhammer needs n >= 0")
    out = BivarPoly.one()
    for c in range(1, n + 1):
        out = out * _univariate([1] + [0] * (c - 1) + [-1], var)
    return out


def power_sum_trunc(k: int, trunc_p: int, trunc_q: int) -> TruncatedSeries:
    """sum_{a,b>=0} p^(ka) q^(kb), truncated."""
    if k < 1:
        raise ValueError("power sums are indexed from k = 1")
    return apply_power_sum(TruncatedSeries.one(trunc_p, trunc_q), k)


def apply_power_sum(s: TruncatedSeries, k: int) -> TruncatedSeries:
    return s.mul_geometric(k, "p").mul_geometric(k, "q")


def complete_homog(n: int, trunc_p: int, trunc_q: int) -> list[TruncatedSeries]:
    """[h_0, ..., h_n] of the alphabet {p^a q^b}, via Newton's identities."""
    if trunc_p < 0 or trunc_q < 0:
        raise ValueError("truncation orders must be nonnegative")
    h = [TruncatedSeries.one(trunc_p, trunc_q)]
    for m in range(1, n + 1):
        acc = TruncatedSeries.zero(trunc_p, trunc_q)
        for k in range(1, m + 1):
            acc = acc + apply_power_sum(h[m - k], k)
        try:
            h.append(acc.exact_div(m))
        except ArithmeticError as exc:
            raise ArithmeticError(f"Newton recurrence: m*h_m not divisible by m={m}") from exc
    return h


def roselle_product_direct(n: int, trunc_p: int, trunc_q: int) -> TruncatedSeries:
    """z^n coefficient of prod_{a<=trunc_p, b<=trunc_q} 1/(1 - p^a q^b z), factor by factor."""
    zc = [TruncatedSeries.zero(trunc_p, trunc_q) for _ in range(n + 1)]
    zc[0] = TruncatedSeries.one(trunc_p, trunc_q)
    for a in range(trunc_p + 1):
        for b in range(trunc_q + 1):
            x = TruncatedSeries(BivarPoly.from_terms({(a, b): 1}).coeffs, trunc_p, trunc_q)
            # multiply the z-series by sum_j (x z)^j: new[m] = old[m] + x * new[m-1]
            for m in range(1, n + 1):
                zc[m] = zc[m] + x * zc[m - 1]
    return zc[n]


@lru_cache(maxsize=None)
def roselle_hn(n: int) -> BivarPoly:
    """H_n = (p)_n (q)_n h_n, with h_n truncated at degree binom(n, 2) in each variable."""
    if n < 0:
        raise ValueError("n must be >= 0")
    t = math.comb(n, 2)
    s = complete_homog(n, t, t)[n]
    for c in range(1, n + 1):
        s = s.mul_one_minus(c, "p").mul_one_minus(c, "q")
    return s.to_poly()
