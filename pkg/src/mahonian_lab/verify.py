"""One-shot invariant suite across all modules, plus H_n cache handling."""

from __future__ import annotations

import math
import re
from pathlib import Path

from . import bounds, clt
from .exact_core import BivarPoly
from .partitions import all_partitions, c_mu, signed_block_sum, signed_stirling
from .perm_stats import joint_table_bruteforce, table_to_poly
from .qseries import q_factorial, roselle_hn

CACHE_TAG = "mahonian-lab v1"
_CACHE_NAME = re.compile(r"^Hn_(\d+)\.csv$")

CONVERGENCE_FN = (6, 10, 14, 16)
CONVERGENCE_CDF = (4, 8, 12)


class CacheError(Exception):
    """A cached H_n file that fails shape or checksum validation."""


# ---------------------------------------------------------------- cache

def cache_path(cache_dir: Path, n: int) -> Path:
    return Path(cache_dir) / f"Hn_{n}.csv"


def cache_header(n: int) -> str:
    return f"# {CACHE_TAG} n={n}"


def validate_hn(n: int, h: BivarPoly) -> None:
    """Raise CacheError unless h looks like H_n: support, total n!, symmetry, MacMahon marginal."""
    top = math.comb(n, 2)
    if h.deg_p > top or h.deg_q > top:
        raise CacheError(f"degree exceeds binom({n},2)={top}")
    if any(c < 0 for c in h.terms().values()):
        raise CacheError("negative coefficient")
    if h.coeff_sum() != math.factorial(n):
        raise CacheError(f"coefficients sum to {h.coeff_sum()}, expected {n}!")
    if h != h.swap():
        raise CacheError("not symmetric in p and q")
    if h.at_p1() != [int(c) for c in q_factorial(n, "q").coeffs[0]]:
        raise CacheError("p=1 specialization differs from [n]_q!")


def read_cache(cache_dir: Path, n: int) -> BivarPoly | None:
    path = cache_path(cache_dir, n)
    if not path.exists():
        return None
    text = path.read_text()
    first = text.splitlines()[0] if text else ""
    if first.strip() != cache_header(n):
        raise CacheError(f"{path.name}: bad header {first!r}")
    try:
        h = BivarPoly.from_csv(text)
    except ValueError as exc:
        raise CacheError(f"{path.name}: {exc}") from exc
    try:
        validate_hn(n, h)
    except CacheError as exc:
        raise CacheError(f"{path.name}: {exc}") from exc
    return h


def write_cache(cache_dir: Path, n: int, h: BivarPoly) -> None:
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    tmp = cache_path(cache_dir, n).with_suffix(".tmp")
    tmp.write_text(h.to_csv(header=cache_header(n)))
    tmp.replace(cache_path(cache_dir, n))


def scan_cache(cache_dir: Path | None) -> list[tuple[str, bool, str]]:
    if cache_dir is None or not Path(cache_dir).is_dir():
        return []
    out = []
    for path in sorted(Path(cache_dir).iterdir()):
        m = _CACHE_NAME.match(path.name)
        if not m:
            continue
        try:
            read_cache(cache_dir, int(m.group(1)))
            out.append((f"cache:{path.name}", True, "valid"))
        except CacheError as exc:
            out.append((f"cache:{path.name}", False, str(exc)))
    return out


# ---------------------------------------------------------------- suite

def _check(results: list, name: str, ok: bool, detail: str = "") -> None:
    results.append({"check": name, "status": "pass" if ok else "fail", "detail": detail})


def run_verify(n_max: int = 9, cache_dir: Path | None = None, workers: int | None = None) -> dict:
    """Run every module's invariant suite up to n_max; deterministic output."""
    results: list[dict] = []
    for name, ok, detail in scan_cache(cache_dir):
        _check(results, name, ok, detail)

    for n in range(0, n_max + 1):
        h = roselle_hn(n)
        if n <= 9:
            brute = table_to_poly(joint_table_bruteforce(n, workers=workers))
            _check(results, f"route_brute_roselle[n={n}]", brute == h)
        _check(results, f"symmetry[n={n}]", h == h.swap())
        _check(results, f"macmahon[n={n}]",
               h.at_p1() == [int(c) for c in q_factorial(n, "q").coeffs[0]]
               and h.at_q1() == [int(c) for c in q_factorial(n, "p").coeffs[:, 0]])
        _check(results, f"total[n={n}]", h.coeff_sum() == math.factorial(n))
        if n >= 1:
            t = clt.joint_table(n, allow_large=True)
            mean, var = clt.table_moments(t)
            m = clt.moments(n)
            _check(results, f"moments[n={n}]", (mean, var) == (m.mu_n, m.sigma2_n),
                   f"mean={mean} var={var}")
        if 1 <= n <= 8:
            tab = c_mu(n)
            _check(results, f"c_mu_ones[n={n}]", tab[(1,) * n] == 1)
            _check(results, f"route_cmu[n={n}]", clt.hn_from_cmu(n) == h)
            trunc = math.comb(n, 2)
            _check(results, f"fn_series_cmu[n={n}]",
                   clt.fn_series(n, trunc) == clt.fn_series_from_cmu(n, trunc))
            ok = all(signed_block_sum(lam, d) == signed_stirling(lam, d)
                     for lam in all_partitions(n) for d in range(n + 1))
            _check(results, f"block_sums[n={n}]", ok)
        if 2 <= n <= 12:
            s, t_ = clt.square_grid(3.0, 3.0, 21)
            res = float(clt.factorization_residual_many(n, s, t_).max())
            _check(results, f"factorization[n={n}]", res <= 1e-9, f"max_residual={res:.3e}")

    report = bounds.bound_checks(min(n_max, 8), total_n_max=max(n_max, 8))
    bad = bounds.failures(report)
    thr = next(r for r in report if r["check_id"] == "total_abs_threshold")
    _check(results, "bounds", not bad, f"{len(report)} instances, {len(bad)} failing; "
           f"total-abs threshold n0={thr['lhs']}")

    devs = [clt.max_fn_deviation(n) for n in CONVERGENCE_FN]
    scaled = [n * d for n, d in zip(CONVERGENCE_FN, devs)]
    _check(results, "fn_decreasing", all(a > b for a, b in zip(devs, devs[1:])),
           " ".join(f"n={n}:{d:.6f}" for n, d in zip(CONVERGENCE_FN, devs)))
    _check(results, "fn_theta_1_over_n", max(scaled) <= 3 * min(scaled),
           f"n*max|F_n-1| in [{min(scaled):.4f}, {max(scaled):.4f}]")
    bz = [clt.bz_distance(n) for n in CONVERGENCE_CDF]
    _check(results, "bz_decreasing", all(a > b for a, b in zip(bz, bz[1:])),
           " ".join(f"n={n}:{d:.6f}" for n, d in zip(CONVERGENCE_CDF, bz)))
    marg = [clt.marginal_cdf_distance(n) for n in CONVERGENCE_CDF]
    _check(results, "marginal_cdf_decreasing", all(a > b for a, b in zip(marg, marg[1:])),
           " ".join(f"n={n}:{d:.6f}" for n, d in zip(CONVERGENCE_CDF, marg)))
    cj = [abs(clt.char_joint(n, 1.0, 1.0) - float(clt.gaussian_char(1.0, 1.0)))
          for n in CONVERGENCE_CDF]
    _check(results, "char_joint_to_gaussian", all(a > b for a, b in zip(cj, cj[1:])),
           " ".join(f"n={n}:{d:.6f}" for n, d in zip(CONVERGENCE_CDF, cj)))

    failed = [r["check"] for r in results if r["status"] == "fail"]
    return {
        "tool": CACHE_TAG,
        "n_max": n_max,
        "passed": not failed,
        "failed": failed,
        "bz_distance_n12": bz[-1],
        "checks": results,
    }

