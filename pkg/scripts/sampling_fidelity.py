"""Sampled vs full-data partitioning: partition count and boundary ratio."""
import argparse

from tilecraft.masj import masj_assign
from tilecraft.metrics import quality_report
from tilecraft.partitioners import partition
from tilecraft.sampling import SamplingConfig, sample_partition
from tilecraft.synth import GenSpec, generate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--mode", choices=("uniform", "clustered"), default="uniform")
    ap.add_argument("--payload", type=int, default=1000)
    ap.add_argument("--gammas", type=float, nargs="+", default=[0.01, 0.05, 0.1, 0.5, 1.0])
    ap.add_argument("--algos", nargs="+", default=["BSP", "SLC", "BOS"])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    data = generate(GenSpec(args.n, args.mode, seed=args.seed))
    print("algo\tgamma\tk\tlambda\tstddev")
    for algo in args.algos:
        full = partition(data, algo, args.payload)
        rep = quality_report(full, masj_assign(data, full), len(data))
        print(f"{algo}\tfull\t{rep.k}\t{rep.boundary_ratio_lambda:.4f}\t{rep.payload_stddev:.1f}")
        for g in args.gammas:
            layout = sample_partition(data, SamplingConfig(g, args.seed + 1, algo), args.payload)
            rep = quality_report(layout, masj_assign(data, layout), len(data))
            print(f"{algo}\t{g}\t{rep.k}\t{rep.boundary_ratio_lambda:.4f}\t{rep.payload_stddev:.1f}")


if __name__ == "__main__":
    main()
