"""Moments, the correction factor F_n, characteristic functions and CDF distances.

Numeric evaluation always goes through coefficient grids pre-divided by n!,
so every summand has modulus at most one whatever the size of n!.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .exact_core import BivarPoly, TruncatedSeries, eval_scaled_grid, powers
from .partitions import c_mu, c_mu_printed
from .perm_stats import JointTable, joint_table_bruteforce, poly_to_table
from .qseries import complete_homog, q_factorial, roselle_hn

N_MAX_DEFAULT = 16
N_MAX_OPT_IN = 24

METHOD_LIMITS = {"brute": 12, "roselle": N_MAX_OPT_IN, "cmu": 8}


class DomainError(ValueError):
    """Evaluation point where a q-integer [c] (c <= n) vanishes."""


# ---------------------------------------------------------------- moments

@dataclass(frozen=True)
class Moments:
    n: int
    mu_n: Fraction
    sigma2_n: Fraction

    @property
    def sigma_n(self) -> float:
        return math.sqrt(self.sigma2_n)


def moments(n: int) -> Moments:
    if n < 1:
        raise ValueError("moments need n >= 1")
    return Moments(n, Fraction(n * (n - 1), 4), Fraction(2 * n**3 + 3 * n**2 - 5 * n, 72))


def table_moments(t: JointTable, axis: int = 0) -> tuple[Fraction, Fraction]:
    """Exact mean and variance of inv (axis=0) or maj (axis=1) from a joint table."""
    marg = t.inv_marginal() if axis == 0 else t.maj_marginal()
    total = sum(marg)
    mean = Fraction(sum(i * c for i, c in enumerate(marg)), total)
    second = Fraction(sum(i * i * c for i, c in enumerate(marg)), total)
    return mean, second - mean * mean


# ---------------------------------------------------------------- H_n by route

def hn(n: int, method: str = "roselle", allow_large: bool = False) -> BivarPoly:
    """H_n(p, q) by brute force, Roselle's series, or the c_mu expansion."""
    if method not in METHOD_LIMITS:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(METHOD_LIMITS)}")
    limit = METHOD_LIMITS[method]
    if method == "roselle" and not allow_large:
        limit = N_MAX_DEFAULT
    if n < 0 or n > limit:
        raise ValueError(f"method {method!r} supports 0 <= n <= {limit}, got {n}")
    if method == "brute":
        return BivarPoly(joint_table_bruteforce(n).counts).canonical()
    if method == "roselle":
        return roselle_hn(n)
    return hn_from_cmu(n)


def joint_table(n: int, method: str = "roselle", allow_large: bool = False) -> JointTable:
    return poly_to_table(n, hn(n, method, allow_large))


# ---------------------------------------------------------------- F_n as a series

def fn_series(n: int, trunc: int) -> TruncatedSeries:
    """(1-p)^n (1-q)^n n! h_n, truncated at degree trunc in each variable."""
    s = complete_homog(n, trunc, trunc)[n]
    for _ in range(n):
        s = s.mul_one_minus(1, "p").mul_one_minus(1, "q")
    return s * math.factorial(n)


def fn_series_from_table(n: int, trunc: int, table: dict) -> TruncatedSeries:
    """sum_mu c_mu (1-p)^n (1-q)^n / prod_i (1-p^mu_i)(1-q^mu_i), truncated.

    Each 1/[c] is (1-p)/(1-p^c); the (1-p) factors from the parts combine
    with [(1-p)(1-q)]^d into (1-p)^n (1-q)^n.
    """
    base = TruncatedSeries.one(trunc, trunc)
    for _ in range(n):
        base = base.mul_one_minus(1, "p").mul_one_minus(1, "q")
    total = TruncatedSeries.zero(trunc, trunc)
    for mu, c in table.items():
        if c == 0:
            continue
        term = base * c
        for part in mu:
            term = term.mul_geometric(part, "p").mul_geometric(part, "q")
        total = total + term
    return total


def fn_series_from_cmu(n: int, trunc: int) -> TruncatedSeries:
    return fn_series_from_table(n, trunc, c_mu(n))


def hn_from_cmu(n: int) -> BivarPoly:
    """H_n = [n]_p! [n]_q! F_n / n! with F_n from the c_mu expansion."""
    t = math.comb(n, 2)
    f = fn_series_from_cmu(n, t)
    qf = (q_factorial(n, "p") * q_factorial(n, "q")).truncate(t, t)
    return (f * qf).exact_div(math.factorial(n)).to_poly()


# ---------------------------------------------------------------- numeric evaluation

@dataclass(frozen=True, eq=False)
class _Scaled:
    n: int
    sigma: float
    mu: float
    h: np.ndarray = field(repr=False)       # H_n / n!
    qfac: np.ndarray = field(repr=False)    # [n]_x! / n!, univariate


@lru_cache(maxsize=None)
def _scaled(n: int) -> _Scaled:
    if n < 2:
        raise ValueError("characteristic functions need n >= 2 (sigma_1 = 0)")
    m = moments(n)
    nf = math.factorial(n)
    h = hn(n, "roselle", allow_large=True)
    qf = q_factorial(n, "p")
    return _Scaled(n, m.sigma_n, float(m.mu_n), h.scaled(nf), qf.scaled(nf)[:, 0])


def _unit(x, sigma: float) -> np.ndarray:
    return np.exp(1j * np.asarray(x, dtype=float) / sigma)


def _qfac_scaled(sc: _Scaled, x: np.ndarray) -> np.ndarray:
    return powers(x, len(sc.qfac) - 1) @ sc.qfac


def _check_domain(n: int, x: np.ndarray, tol: float = 1e-12) -> None:
    theta = np.angle(x)
    for c in range(2, n + 1):
        # |[c]_x| = |sin(c theta / 2) / sin(theta / 2)| on the unit circle
        near = np.abs(np.sin(c * theta / 2)) < tol * np.maximum(np.abs(np.sin(theta / 2)), tol)
        bad = near & (np.abs(theta) > tol)
        if np.any(bad):
            raise DomainError(f"[{c}] vanishes at angle {theta[bad][0]!r} for n={n}")


def fn_eval_many(n: int, s: Sequence[float], t: Sequence[float]) -> np.ndarray:
    """F_n(e^{is/sigma_n}, e^{it/sigma_n}) = (H_n/n!) / (([n]_p!/n!) ([n]_q!/n!)) at paired points."""
    sc = _scaled(n)
    p, q = _unit(s, sc.sigma).ravel(), _unit(t, sc.sigma).ravel()
    _check_domain(n, p)
    _check_domain(n, q)
    joint = eval_scaled_grid(sc.h, p, q)
    return joint / (_qfac_scaled(sc, p) * _qfac_scaled(sc, q))


def fn_eval(n: int, s: float, t: float) -> complex:
    return complex(fn_eval_many(n, [s], [t])[0])


def char_marginal_many(n: int, s: Sequence[float]) -> np.ndarray:
    sc = _scaled(n)
    s = np.asarray(s, dtype=float).ravel()
    return np.exp(-1j * sc.mu * s / sc.sigma) * _qfac_scaled(sc, _unit(s, sc.sigma))


def char_marginal(n: int, s: float) -> complex:
    """Characteristic function of (inv - mu_n)/sigma_n; maj has the same one."""
    return complex(char_marginal_many(n, [s])[0])


char_marginal_maj = char_marginal


def char_joint_many(n: int, s: Sequence[float], t: Sequence[float]) -> np.ndarray:
    sc = _scaled(n)
    s = np.asarray(s, dtype=float).ravel()
    t = np.asarray(t, dtype=float).ravel()
    phase = np.exp(-1j * sc.mu * (s + t) / sc.sigma)
    return phase * eval_scaled_grid(sc.h, _unit(s, sc.sigma), _unit(t, sc.sigma))


def char_joint(n: int, s: float, t: float) -> complex:
    return complex(char_joint_many(n, [s], [t])[0])


def factorization_residual_many(n: int, s: Sequence[float], t: Sequence[float]) -> np.ndarray:
    lhs = char_joint_many(n, s, t)
    rhs = char_marginal_many(n, s) * char_marginal_many(n, t) * fn_eval_many(n, s, t)
    return np.abs(lhs - rhs)


def factorization_residual(n: int, s: float, t: float) -> float:
    return float(factorization_residual_many(n, [s], [t])[0])


def gaussian_char(s, t):
    return np.exp(-(np.asarray(s) ** 2) / 2 - np.asarray(t) ** 2 / 2)


def _d1(n: int, s, t, coeff: int) -> np.ndarray:
    sigma = moments(n).sigma_n
    p, q = _unit(s, sigma), _unit(t, sigma)
    return (1 - p) * (1 - q) * coeff / ((1 + p) * (1 + q))


def d1_coefficient(n: int) -> int:
    """c_{(2,1^{n-2})}; equals binom(n, 2)."""
    return c_mu(n)[(2,) + (1,) * (n - 2)] if n >= 2 else 0


def d1_term(n: int, s, t) -> np.ndarray:
    """d = 1 part of F_n - 1: (1-p)(1-q) c_{(2,1^{n-2})} / ([2]_p [2]_q)."""
    return _d1(n, s, t, math.comb(n, 2))


def d1_term_printed(n: int, s, t) -> np.ndarray:
    """Same term with the coefficient 2 - binom(n, 2)."""
    return _d1(n, s, t, 2 - math.comb(n, 2))


# ---------------------------------------------------------------- grids

@dataclass(frozen=True)
class EvalGrid:
    n: int
    function: str
    reference: str
    s: np.ndarray
    t: np.ndarray
    values: np.ndarray
    ref_values: np.ndarray

    @property
    def abs_dev(self) -> np.ndarray:
        return np.abs(self.values - self.ref_values)

    def to_csv(self) -> str:
        lines = [f"# function={self.function} n={self.n} reference={self.reference}",
                 "s,t,re,im,abs_dev"]
        for s, t, v, dev in zip(self.s, self.t, self.values, self.abs_dev):
            lines.append(",".join(repr(float(x)) for x in (s, t, v.real, v.imag, dev)))
        return "\n".join(lines) + "\n"


GRID_FUNCTIONS = ("fn", "char_joint", "char_product", "gaussian")


def square_grid(s_max: float, t_max: float, steps: int) -> tuple[np.ndarray, np.ndarray]:
    if steps < 1:
        raise ValueError("steps must be >= 1")
    ss = np.linspace(-s_max, s_max, steps) if steps > 1 else np.array([0.0])
    tt = np.linspace(-t_max, t_max, steps) if steps > 1 else np.array([0.0])
    S, T = np.meshgrid(ss, tt, indexing="ij")
    return S.ravel(), T.ravel()


def eval_grid(n: int, function: str = "fn", s_max: float = 2.0, t_max: float = 2.0,
              steps: int = 21) -> EvalGrid:
    """Evaluate one of GRID_FUNCTIONS on a square grid with its reference values.

    fn is compared to 1, char_joint to the Gaussian, char_product (the
    factorized right-hand side) to char_joint.
    """
    s, t = square_grid(s_max, t_max, steps)
    if function == "fn":
        vals, ref, name = fn_eval_many(n, s, t), np.ones(len(s), dtype=complex), "one"
    elif function == "char_joint":
        vals, ref, name = char_joint_many(n, s, t), gaussian_char(s, t).astype(complex), "gaussian"
    elif function == "char_product":
        vals = char_marginal_many(n, s) * char_marginal_many(n, t) * fn_eval_many(n, s, t)
        ref, name = char_joint_many(n, s, t), "char_joint"
    elif function == "gaussian":
        vals = gaussian_char(s, t).astype(complex)
        ref, name = vals, "gaussian"
    else:
        raise ValueError(f"unknown grid function {function!r}; choose from {GRID_FUNCTIONS}")
    return EvalGrid(n, function, name, s, t, vals, ref)


def max_fn_deviation(n: int, bound: float = 2.0, steps: int = 21) -> float:
    return float(eval_grid(n, "fn", bound, bound, steps).abs_dev.max())


# ---------------------------------------------------------------- CDFs

def normal_cdf(x: float) -> float:
    if math.isinf(x):
        return 1.0 if x > 0 else 0.0
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


DEFAULT_CDF_GRID = tuple(float(u) for u in range(-2, 3))


def _cutoff(mu: Fraction, sigma: float, u: float, top: int) -> int:
    """Largest integer k with (k - mu)/sigma <= u, clamped to [-1, top]."""
    if math.isinf(u):
        return top if u > 0 else -1
    if u == 0:
        k = math.floor(mu)
    else:
        k = math.floor(float(mu) + u * sigma)
    return max(-1, min(top, k))


def _cumulative(counts: np.ndarray) -> np.ndarray:
    return np.cumsum(np.cumsum(counts, axis=0), axis=1)


def joint_cdf(t: JointTable, u: float, v: float) -> Fraction:
    """P[X_n <= u, Y_n <= v] exactly, from the joint table."""
    m = moments(t.n)
    top = t.counts.shape[0] - 1
    i, j = _cutoff(m.mu_n, m.sigma_n, u, top), _cutoff(m.mu_n, m.sigma_n, v, top)
    if i < 0 or j < 0:
        return Fraction(0)
    return Fraction(int(_cumulative(t.counts)[i, j]), math.factorial(t.n))


def bz_distance(n: int, grid: Iterable[float] = DEFAULT_CDF_GRID,
                table: JointTable | None = None) -> float:
    """max over (u, v) in grid x grid of |P[X_n <= u, Y_n <= v] - Phi(u) Phi(v)|."""
    if n < 2:
        raise ValueError("standardization needs n >= 2")
    t = table if table is not None else joint_table(n, allow_large=True)
    m = moments(n)
    cum = _cumulative(t.counts)
    top = t.counts.shape[0] - 1
    nf = math.factorial(n)
    grid = list(grid)
    worst = 0.0
    for u in grid:
        i = _cutoff(m.mu_n, m.sigma_n, u, top)
        for v in grid:
            j = _cutoff(m.mu_n, m.sigma_n, v, top)
            emp = 0.0 if i < 0 or j < 0 else int(cum[i, j]) / nf
            worst = max(worst, abs(emp - normal_cdf(u) * normal_cdf(v)))
    return worst


def marginal_cdf_distance(n: int, grid: Iterable[float] = DEFAULT_CDF_GRID) -> float:
    """max over u in grid of |P[X_n <= u] - Phi(u)|; inv and maj share the marginal [n]_q!."""
    m = moments(n)
    q = q_factorial(n, "p")
    marg = [int(c) for c in q.coeffs[:, 0]]
    cum = np.cumsum(np.array(marg, dtype=object))
    nf = math.factorial(n)
    worst = 0.0
    for u in grid:
        i = _cutoff(m.mu_n, m.sigma_n, u, len(marg) - 1)
        emp = 0.0 if i < 0 else int(cum[i]) / nf
        worst = max(worst, abs(emp - normal_cdf(u)))
    return worst
