import math

import pytest

from mahonian_lab.exact_core import BivarPoly, TruncatedSeries
from mahonian_lab.perm_stats import joint_table_bruteforce, table_to_poly
from mahonian_lab.qseries import (
    complete_homog,
    pochhammer,
    power_sum_trunc,
    q_factorial,
    q_int,
    roselle_hn,
    roselle_product_direct,
)


def geo(step, trunc, var):
    """Truncated 1/(1 - x^step) written out term by term."""
    coeffs = [1 if e % step == 0 else 0 for e in range(trunc + 1)]
    return BivarPoly([[c] for c in coeffs]) if var == "p" else BivarPoly([coeffs])


def test_q_analogs():
    assert q_int(1) == BivarPoly.one()
    assert q_int(3, "q") == BivarPoly([[1, 1, 1]])
    assert q_factorial(0) == BivarPoly.one()
    assert q_factorial(3) == BivarPoly([[1], [2], [2], [1]])
    assert pochhammer(0, "q") == BivarPoly.one()
    assert pochhammer(2) == BivarPoly([[1], [-1], [-1], [1]])
    with pytest.raises(ValueError):
        q_int(0)


def test_power_sums():
    assert power_sum_trunc(1, 2, 2) == (geo(1, 2, "p") * geo(1, 2, "q")).truncate(2, 2)
    assert power_sum_trunc(2, 3, 3) == BivarPoly([[1, 0, 1], [0, 0, 0], [1, 0, 1]]).truncate(3, 3)
    assert power_sum_trunc(5, 3, 3) == TruncatedSeries.one(3, 3)


def test_complete_homog_small():
    h = complete_homog(2, 1, 1)
    assert h[0] == TruncatedSeries.one(1, 1)
    assert h[1] == BivarPoly([[1, 1], [1, 1]]).truncate(1, 1)
    assert h[2][0, 0] == 1


@pytest.mark.parametrize("n", range(0, 5))
def test_h_series_inverts_product(n):
    # sum_m h_m z^m times prod_{a,b}(1 - p^a q^b z) is 1 mod z^(n+1)
    t = 3
    h = complete_homog(n, t, t)
    series = list(h)
    for a in range(t + 1):
        for b in range(t + 1):
            x = BivarPoly.from_terms({(a, b): 1}).truncate(t, t)
            series = [series[m] - (x * series[m - 1] if m else TruncatedSeries.zero(t, t))
                      for m in range(n + 1)]
    assert series[0] == TruncatedSeries.one(t, t)
    assert all(s == TruncatedSeries.zero(t, t) for s in series[1:])


@pytest.mark.parametrize("n, t", [(0, 2), (1, 2), (2, 2), (3, 3), (4, 2), (5, 3)])
def test_direct_product_matches_newton(n, t):
    assert roselle_product_direct(n, t, t) == complete_homog(n, t, t)[n]


def test_direct_product_n1():
    assert roselle_product_direct(1, 2, 2) == power_sum_trunc(1, 2, 2)
    assert roselle_product_direct(0, 2, 2) == TruncatedSeries.one(2, 2)


def test_roselle_small():
    assert roselle_hn(0) == BivarPoly.one()
    assert roselle_hn(1) == BivarPoly.one()
    assert roselle_hn(2).terms() == {(0, 0): 1, (1, 1): 1}
    assert roselle_hn(3) == table_to_poly(joint_table_bruteforce(3))


@pytest.mark.parametrize("n", range(0, 10))
def test_roselle_equals_bruteforce(n):
    assert roselle_hn(n) == table_to_poly(joint_table_bruteforce(n))


@pytest.mark.parametrize("n", [4, 9, 13, 16])
def test_roselle_properties(n):
    h = roselle_hn(n)
    N = math.comb(n, 2)
    assert (h.deg_p, h.deg_q) == (N, N)
    assert all(c >= 0 for c in h.terms().values())
    assert h.coeff_sum() == math.factorial(n)
    assert h == h.swap()
    assert h.at_p1() == [int(c) for c in q_factorial(n, "q").coeffs[0]]
