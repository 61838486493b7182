"""Compare the two weightings of the c_mu sum against the exact F_n series.

For each n the script reports whether each coefficient table reproduces
F_n to degree binom(n, 2), together with the (2, 1^(n-2)) coefficient.
"""

import argparse
import math

from mahonian_lab import clt
from mahonian_lab.partitions import c_mu, c_mu_printed


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=8)
    args = ap.parse_args()

    print("n  list_weight_ok  lambda!_ok  c21_list  c21_lambda!")
    for n in range(2, args.n_max + 1):
        t = math.comb(n, 2)
        exact = clt.fn_series(n, t)
        a, b = c_mu(n), c_mu_printed(n)
        key = (2,) + (1,) * (n - 2)
        ok_a = clt.fn_series_from_table(n, t, a) == exact
        ok_b = clt.fn_series_from_table(n, t, b) == exact
        print(f"{n:<2} {ok_a!s:<15} {ok_b!s:<11} {a[key]:<9} {b[key]}")


if __name__ == "__main__":
    main()
