#!/usr/bin/env python3
"""Deviation of empirical second moments versus sample count.

Sweeps d for the scaled-basis ensemble and prints the mean/max deviation
next to the comparison scale sqrt(log(d)/d) * sqrt(n).  The knee of the
curve sits near d = n log n: below it some basis direction is missed almost
surely and the deviation stays pinned near 1.
"""

import argparse
import math

from matsketch import lln_deviation, scaled_basis_ensemble


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=256)
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    ensemble = scaled_basis_ensemble(args.n)
    knee = math.ceil(args.n * math.log(args.n))
    ds = sorted({args.n, 2 * args.n, knee, 2 * knee, 4 * knee, 16 * knee})
    print(f"scaled-basis ensemble, n={args.n}, trials={args.trials} (n log n ~ {knee})")
    print(f"{'d':>8} {'mean dev':>10} {'max dev':>10} {'a = sqrt(log d / d) M':>22}")
    for d in ds:
        stats = lln_deviation(ensemble, d, args.trials, seed=args.seed)
        print(f"{d:>8} {stats.mean:>10.4f} {stats.max:>10.4f} {stats.a_value:>22.4f}")


if __name__ == "__main__":
    main()
