"""Print how F_n, the joint CDF and the joint characteristic function approach their limits.

    python scripts/convergence_table.py --n 4 6 8 10 12 14 16
"""

import argparse
import csv
import sys

import numpy as np

from mahonian_lab import clt


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[4, 6, 8, 10, 12, 14, 16])
    ap.add_argument("--bound", type=float, default=2.0, help="box half-width for F_n")
    args = ap.parse_args()

    w = csv.writer(sys.stdout)
    w.writerow(["n", "sigma_n", "max_abs_fn_minus_1", "n_times_max", "d1_residual_ratio",
                "bz_distance", "char_joint_11_gap"])
    s, t = clt.square_grid(args.bound, args.bound, 21)
    for n in args.n:
        dev = clt.fn_eval_many(n, s, t) - 1
        worst = float(np.abs(dev).max())
        ratio = float(np.abs(dev - clt.d1_term(n, s, t)).max()) / worst
        bz = clt.bz_distance(n) if n <= 12 else float("nan")
        gap = abs(clt.char_joint(n, 1.0, 1.0) - float(clt.gaussian_char(1.0, 1.0)))
        w.writerow([n, f"{clt.moments(n).sigma_n:.6f}", f"{worst:.6f}", f"{n * worst:.4f}",
                    f"{ratio:.4f}", f"{bz:.6f}", f"{gap:.6f}"])


if __name__ == "__main__":
    main()
