"""Payload-fraction sweep over all six partitioners on synthetic data.

Writes one CSV row per (fraction, algorithm) with k, payload stddev,
boundary ratio and partitioning time.

    python3 scripts/ladder_sweep.py --n 100000 --mode clustered --out sweep.csv
"""
import argparse
import csv
import sys

from tilecraft.cli import FRACTION_LADDER, SWEEP_COLUMNS, run_sweep
from tilecraft.partitioners import ALGORITHMS
from tilecraft.synth import GenSpec, generate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--mode", choices=("uniform", "clustered"), default="uniform")
    ap.add_argument("--size-min", type=float, default=1e-3)
    ap.add_argument("--size-max", type=float, default=1e-3)
    ap.add_argument("--algos", nargs="+", default=list(ALGORITHMS))
    ap.add_argument("--fractions", nargs="+", type=float, default=list(FRACTION_LADDER))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    data = generate(GenSpec(args.n, args.mode, size_min=args.size_min,
                            size_max=args.size_max, seed=args.seed))
    rows = run_sweep(data, args.algos, args.fractions)
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
