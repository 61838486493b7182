"""Write F_n and the joint characteristic function on square grids as CSV files, for plotting.

    python scripts/export_fn_grids.py --out grids/ --n 6 10 16
"""

import argparse
from pathlib import Path

from mahonian_lab import clt


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("grids"))
    ap.add_argument("--n", type=int, nargs="+", default=[6, 10, 16])
    ap.add_argument("--bound", type=float, default=2.0)
    ap.add_argument("--steps", type=int, default=41)
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    for n in args.n:
        for function in ("fn", "char_joint"):
            grid = clt.eval_grid(n, function, args.bound, args.bound, args.steps)
            path = args.out / f"{function}_n{n}.csv"
            path.write_text(grid.to_csv())
            print(f"{path}: max abs_dev {grid.abs_dev.max():.4g}")


if __name__ == "__main__":
    main()
