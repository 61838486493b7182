"""Command-line interface.

Exit codes: 0 success, 1 a check or validation failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import bounds, clt
from .partitions import c_mu, c_mu_printed, encode_cmu_csv, encode_partition
from .perm_stats import joint_table_bruteforce, poly_to_table, table_to_poly
from .verify import CacheError, read_cache, run_verify, write_cache

CACHE_ENV = "MAHONIAN_LAB_CACHE"
THREADS_ENV = "MAHONIAN_THREADS"


class UsageFailure(Exception):
    pass


class CheckFailure(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int | None = None
    n_max: int | None = None
    method: str = "roselle"
    s_max: float = 2.0
    t_max: float = 2.0
    steps: int = 21
    cache_dir: Path | None = None
    use_cache: bool = True
    out: Path | None = None
    fmt: str = "csv"
    threads: int | None = None
    allow_large: bool = False
    function: str = "char_joint"
    formula: str = "corrected"
    grid: tuple[float, ...] = clt.DEFAULT_CDF_GRID

    def validate(self) -> None:
        if self.n is not None and self.n < 0:
            raise UsageFailure("--n must be >= 0")
        if self.n_max is not None and self.n_max < 0:
            raise UsageFailure("--n-max must be >= 0")
        if self.steps < 1:
            raise UsageFailure("--steps must be >= 1")
        if self.s_max < 0 or self.t_max < 0:
            raise UsageFailure("--s-max/--t-max must be >= 0")
        if self.threads is not None and self.threads < 1:
            raise UsageFailure("--threads must be >= 1")
        if self.command == "hn":
            limit = clt.METHOD_LIMITS[self.method]
            if self.method == "roselle" and not self.allow_large:
                limit = clt.N_MAX_DEFAULT
            if self.n > limit:
                hint = " (pass --allow-large for up to 24)" if self.method == "roselle" else ""
                raise UsageFailure(f"--method {self.method} supports n <= {limit}{hint}")
        if self.command in ("fn-grid", "charfn"):
            limit = clt.N_MAX_OPT_IN if self.allow_large else clt.N_MAX_DEFAULT
            if not 2 <= self.n <= limit:
                raise UsageFailure(f"--n must be in [2, {limit}]")
        if self.command == "cdf-compare" and not 2 <= self.n <= 12:
            raise UsageFailure("--n must be in [2, 12]")
        if self.command == "cmu" and not 1 <= self.n <= 8:
            raise UsageFailure("--n must be in [1, 8]")
        if self.command == "bounds" and self.n_max > 16:
            raise UsageFailure("--n-max must be <= 16")


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.parent.mkdir(parents=True, exist_ok=True)
        cfg.out.write_text(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _rows_json(header: list[str], rows: list[list]) -> str:
    return _json([dict(zip(header, r)) for r in rows])


# ---------------------------------------------------------------- subcommands

def cmd_hn(cfg: RunConfig) -> str:
    h = None
    if cfg.use_cache and cfg.cache_dir is not None:
        try:
            h = read_cache(cfg.cache_dir, cfg.n)
        except CacheError as exc:
            raise CheckFailure(f"cache validation failed: {exc}") from exc
    if h is None:
        if cfg.method == "brute":
            h = table_to_poly(joint_table_bruteforce(cfg.n, workers=cfg.threads))
        else:
            h = clt.hn(cfg.n, cfg.method, allow_large=cfg.allow_large)
        if cfg.use_cache and cfg.cache_dir is not None:
            write_cache(cfg.cache_dir, cfg.n, h)
    table = poly_to_table(cfg.n, h)
    if cfg.fmt == "json":
        rows = [[i, j, int(c)] for (i, j), c in sorted(h.terms().items())]
        return _rows_json(["inv", "maj", "count"], rows)
    return table.to_csv()


def cmd_verify(cfg: RunConfig) -> tuple[str, bool]:
    report = run_verify(cfg.n_max, cache_dir=cfg.cache_dir, workers=cfg.threads)
    return _json(report), report["passed"]


def _grid_out(cfg: RunConfig, grid: clt.EvalGrid) -> str:
    if cfg.fmt == "json":
        rows = [[float(s), float(t), float(v.real), float(v.imag), float(dv)]
                for s, t, v, dv in zip(grid.s, grid.t, grid.values, grid.abs_dev)]
        return _json({"function": grid.function, "n": grid.n, "reference": grid.reference,
                      "rows": [dict(zip(["s", "t", "re", "im", "abs_dev"], r)) for r in rows]})
    return grid.to_csv()


def cmd_fn_grid(cfg: RunConfig) -> str:
    return _grid_out(cfg, clt.eval_grid(cfg.n, "fn", cfg.s_max, cfg.t_max, cfg.steps))


def cmd_charfn(cfg: RunConfig) -> str:
    grid = clt.eval_grid(cfg.n, cfg.function, cfg.s_max, cfg.t_max, cfg.steps)
    if cfg.function == "char_product" and grid.abs_dev.max() > 1e-9:
        raise CheckFailure(f"factorization residual {grid.abs_dev.max():.3e} exceeds 1e-9")
    return _grid_out(cfg, grid)


def cmd_cdf_compare(cfg: RunConfig) -> str:
    table = clt.joint_table(cfg.n)
    rows = []
    for u in cfg.grid:
        for v in cfg.grid:
            emp = clt.joint_cdf(table, u, v)
            ref = clt.normal_cdf(u) * clt.normal_cdf(v)
            rows.append([u, v, float(emp), ref, abs(float(emp) - ref)])
    header = ["u", "v", "empirical", "normal", "abs_diff"]
    if cfg.fmt == "json":
        return _json({"n": cfg.n, "bz_distance": max(r[4] for r in rows),
                      "rows": [dict(zip(header, r)) for r in rows]})
    lines = [",".join(header)] + [",".join(repr(x) for x in r) for r in rows]
    return "\n".join(lines) + "\n"


def cmd_bounds(cfg: RunConfig) -> tuple[str, bool]:
    report = bounds.bound_checks(cfg.n_max)
    return _json(report), not bounds.failures(report)


def cmd_cmu(cfg: RunConfig) -> str:
    table = c_mu(cfg.n) if cfg.formula == "corrected" else c_mu_printed(cfg.n)
    if cfg.fmt == "json":
        return _json([{"mu": encode_partition(mu), "c": c} for mu, c in table.items()])
    return encode_cmu_csv(table)


# ---------------------------------------------------------------- parsing

def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="output file (default: stdout)")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default=None)
    common.add_argument("--threads", type=int, default=None, help="cap on worker processes")
    common.add_argument("--cache-dir", type=Path, default=None,
                        help=f"H_n cache directory (default: ${CACHE_ENV})")
    common.add_argument("--no-cache", dest="use_cache", action="store_false")

    ap = argparse.ArgumentParser(prog="mahonian-lab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hn", parents=[common], help="joint (inv, maj) table of S_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("brute", "roselle", "cmu"), default="roselle")
    p.add_argument("--allow-large", action="store_true")

    p = sub.add_parser("verify", parents=[common], help="run every invariant suite")
    p.add_argument("--n-max", type=int, default=9)

    def grid_args(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--s-max", type=float, default=2.0)
        p.add_argument("--t-max", type=float, default=None, help="defaults to --s-max")
        p.add_argument("--steps", type=int, default=21)
        p.add_argument("--allow-large", action="store_true")

    p = sub.add_parser("fn-grid", parents=[common], help="F_n on an (s, t) grid")
    grid_args(p)
    p = sub.add_parser("charfn", parents=[common], help="characteristic functions on a grid")
    grid_args(p)
    p.add_argument("--function", choices=("char_joint", "char_product", "gaussian"),
                   default="char_joint")

    p = sub.add_parser("cdf-compare", parents=[common], help="exact joint CDF vs Phi(u)Phi(v)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--grid", type=_float_list, default=clt.DEFAULT_CDF_GRID)

    p = sub.add_parser("bounds", parents=[common], help="inequality instances as JSON")
    p.add_argument("--n-max", type=int, default=8)

    p = sub.add_parser("cmu", parents=[common], help="c_mu table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--formula", choices=("corrected", "printed"), default="corrected",
                   help="printed: lambda!-weighted sum (does not reproduce F_n for n >= 3)")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cache = ns.cache_dir
    if cache is None and os.environ.get(CACHE_ENV):
        cache = Path(os.environ[CACHE_ENV])
    threads = ns.threads
    if threads is None and os.environ.get(THREADS_ENV):
        threads = int(os.environ[THREADS_ENV])
    default_fmt = "json" if ns.command in ("verify", "bounds") else "csv"
    s_max = getattr(ns, "s_max", 2.0)
    t_max = getattr(ns, "t_max", None)
    return RunConfig(
        command=ns.command,
        n=getattr(ns, "n", None),
        n_max=getattr(ns, "n_max", None),
        method=getattr(ns, "method", "roselle"),
        s_max=s_max,
        t_max=s_max if t_max is None else t_max,
        steps=getattr(ns, "steps", 21),
        cache_dir=cache,
        use_cache=ns.use_cache,
        out=ns.out,
        fmt=ns.fmt or default_fmt,
        threads=threads,
        allow_large=getattr(ns, "allow_large", False),
        function=getattr(ns, "function", "char_joint"),
        formula=getattr(ns, "formula", "corrected"),
        grid=getattr(ns, "grid", clt.DEFAULT_CDF_GRID),
    )


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(ns)
        cfg.validate()
        ok = True
        if cfg.command == "hn":
            text = cmd_hn(cfg)
        elif cfg.command == "verify":
            text, ok = cmd_verify(cfg)
        elif cfg.command == "fn-grid":
            text = cmd_fn_grid(cfg)
        elif cfg.command == "charfn":
            text = cmd_charfn(cfg)
        elif cfg.command == "cdf-compare":
            text = cmd_cdf_compare(cfg)
        elif cfg.command == "bounds":
            text, ok = cmd_bounds(cfg)
        else:
            text = cmd_cmu(cfg)
    except UsageFailure as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (CheckFailure, clt.DomainError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    _emit(cfg, text)
    if cfg.out is not None:
        print(f"{cfg.command}: wrote {cfg.out}" + ("" if ok else " (checks FAILED)"))
    if not ok:
        print(f"{cfg.command}: one or more checks failed", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
