"""Wall time of two-level parallel partitioning against worker count."""
import argparse
import os
import time

from tilecraft.parallel import ParallelConfig, parallel_partition
from tilecraft.synth import GenSpec, generate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1_000_000)
    ap.add_argument("--algo", default="BOS")
    ap.add_argument("--coarse-payload", type=int, default=62_500)
    ap.add_argument("--payload", type=int, default=1000)
    ap.add_argument("--workers", type=int, nargs="+", default=[1, 2, 4, 8])
    ap.add_argument("--repeat", type=int, default=1)
    args = ap.parse_args()

    data = generate(GenSpec(args.n, seed=0))
    print(f"# cpus available: {len(os.sched_getaffinity(0))}")
    print("workers\tseconds\tk")
    base = None
    for w in args.workers:
        cfg = ParallelConfig(args.coarse_payload, args.payload, args.algo, workers=w)
        best = float("inf")
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            layout = parallel_partition(data, cfg)
            best = min(best, time.perf_counter() - t0)
        base = base or best
        print(f"{w}\t{best:.3f}\t{layout.k}\t(x{base / best:.2f})")


if __name__ == "__main__":
    main()
