"""Command-line front end: ``tilecraft <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import io
from .join import brute_join, copartition, join_layout, tile_join
from .masj import masj_assign
from .metrics import quality_report
from .parallel import DEFAULT_ANCHOR_SAMPLE, ParallelConfig, default_workers, parallel_partition
from .partitioners import ALGORITHMS, PartitionLayout, partition
from .sampling import SamplingConfig, round_half_up, sample_partition
from .synth import GenSpec, generate

log = logging.getLogger("tilecraft")

# payload fractions swept by default (the ladder is quoted in units of 1e-2)
FRACTION_LADDER = tuple(f * 1e-2 for f in
                        (0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 5.0))


def payload_for(n: int, payload: int | None, fraction: float | None) -> int:
    if (payload is None) == (fraction is None):
        raise ValueError("give exactly one of --payload or --fraction")
    if payload is not None:
        if payload < 1:
            raise ValueError("--payload must be positive")
        return payload
    if fraction <= 0:
        raise ValueError("--fraction must be positive")
    return max(1, round_half_up(fraction * n))


def _dump_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_partition_outputs(out: Path, data, layout: PartitionLayout, t_load: float,
                             t_part: float, extra: dict | None = None) -> dict:
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    assignment = masj_assign(data, layout)
    t_assign = time.perf_counter() - t0
    report = quality_report(layout, assignment, len(data)).to_dict()
    report.update(algorithm=layout.algorithm_tag, payload_target=layout.payload_target,
                  n=len(data), replicas=assignment.replica_count,
                  warnings=list(layout.warnings), provenance=layout.provenance)
    if extra:
        report.update(extra)
    report["timing"] = {"load_s": t_load, "partition_s": t_part, "assign_s": t_assign}
    io.write_layout(layout, out / "layout.tsv")
    io.write_assignment(assignment, out / "assignment.tsv")
    _dump_json(report, out / "report.json")
    return report


def _load(path, fmt):
    t0 = time.perf_counter()
    data = io.ingest(path, fmt)
    return data, time.perf_counter() - t0


def cmd_synth(args) -> int:
    spec = GenSpec(n=args.n, mode=args.mode, hotspots=args.hotspots,
                   cluster_spread=args.spread, size_min=args.size_min,
                   size_max=args.size_max if args.size_max is not None else args.size_min,
                   seed=args.seed)
    io.write_dataset(generate(spec), args.out)
    return 0


def cmd_partition(args) -> int:
    data, t_load = _load(args.input, args.format)
    b = payload_for(len(data), args.payload, args.fraction)
    t0 = time.perf_counter()
    layout = partition(data, args.algo, b, dim=args.dim)
    t_part = time.perf_counter() - t0
    _write_partition_outputs(Path(args.out), data, layout, t_load, t_part)
    return 0


def cmd_sample_partition(args) -> int:
    data, t_load = _load(args.input, args.format)
    b = payload_for(len(data), args.payload, args.fraction)
    cfg = SamplingConfig(gamma=args.gamma, seed=args.seed, algorithm=args.algo)
    t0 = time.perf_counter()
    layout = sample_partition(data, cfg, b, dim=args.dim)
    t_part = time.perf_counter() - t0
    _write_partition_outputs(Path(args.out), data, layout, t_load, t_part,
                             {"gamma": args.gamma, "seed": args.seed})
    return 0


def cmd_parallel_partition(args) -> int:
    data, t_load = _load(args.input, args.format)
    b = payload_for(len(data), args.payload, args.fraction)
    cfg = ParallelConfig(coarse_payload=args.coarse_payload, fine_payload=b,
                         fine_algorithm=args.algo, anchor_sample_size=args.anchor_sample,
                         workers=args.workers, seed=args.seed, dim=args.dim)
    t0 = time.perf_counter()
    layout = parallel_partition(data, cfg)
    t_part = time.perf_counter() - t0
    _write_partition_outputs(Path(args.out), data, layout, t_load, t_part,
                             {"coarse_payload": args.coarse_payload, "seed": args.seed})
    return 0


def run_sweep(data, algorithms, fractions, dim="x"):
    """One row per (fraction, algorithm); failures are recorded, not raised."""
    rows = []
    for f in fractions:
        for algo in algorithms:
            row = {"fraction": f, "algorithm": algo.upper()}
            try:
                b = payload_for(len(data), None, f)
                t0 = time.perf_counter()
                layout = partition(data, algo, b, dim=dim)
                elapsed = time.perf_counter() - t0
                rep = quality_report(layout, masj_assign(data, layout), len(data))
                row.update(payload=b, k=rep.k, stddev=rep.payload_stddev,
                           **{"lambda": rep.boundary_ratio_lambda}, time_s=elapsed,
                           status="ok")
            except Exception as exc:  # noqa: BLE001 - a failed cell must not stop the sweep
                log.warning("sweep cell f=%s %s failed: %s", f, algo, exc)
                row.update(payload="", k="", stddev="", **{"lambda": ""}, time_s="",
                           status=f"error: {exc}")
            rows.append(row)
    return rows


SWEEP_COLUMNS = ("fraction", "algorithm", "payload", "k", "stddev", "lambda", "time_s", "status")


def cmd_sweep(args) -> int:
    data, _ = _load(args.input, args.format)
    fractions = args.fractions or FRACTION_LADDER
    rows = run_sweep(data, args.algos, fractions, args.dim)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return 0 if all(r["status"] == "ok" for r in rows) else 1


def cmd_join(args) -> int:
    r, _ = _load(args.inputs[0], args.format)
    s, _ = _load(args.inputs[1], args.format)
    b = payload_for(len(r) + len(s), args.payload, args.fraction)
    layout = join_layout(r, s, args.algo, b, dim=args.dim)
    result = tile_join(copartition(r, s, layout), workers=args.workers)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    io.write_pairs(result.pairs, out / "pairs.tsv")
    summary = {"algorithm": layout.algorithm_tag, "payload_target": b, "k": layout.k,
               "pairs": len(result.pairs), "dedup_removed": result.dedup_removed,
               "per_tile_pair_counts": list(result.per_tile_pair_counts)}
    if args.oracle:
        summary["oracle_match"] = set(result.pairs) == brute_join(r, s)
    _dump_json(summary, out / "summary.json")
    if args.oracle and not summary["oracle_match"]:
        log.error("join result differs from the brute-force oracle")
        return 1
    return 0


def cmd_stats(args) -> int:
    """Recompute the quality report from a partition output directory."""
    d = Path(args.dir)
    layout = io.read_layout(d / "layout.tsv")
    assignment = io.read_assignment(d / "assignment.tsv")
    n = len(np.unique(assignment.object_ids))
    json.dump(quality_report(layout, assignment, n).to_dict(), sys.stdout, indent=2,
              sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _add_common(p, *, payload=True):
    p.add_argument("--format", choices=io.FORMATS, default="tsv-mbr")
    p.add_argument("--dim", choices=("x", "y"), default="x", help="strip axis for SLC")
    if payload:
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--payload", type=int, help="absolute payload b")
        g.add_argument("--fraction", type=float, help="payload as a fraction of |R|")


def build_parser() -> argparse.ArgumentParser:
    algos = [a.lower() for a in ALGORITHMS]
    parser = argparse.ArgumentParser(prog="tilecraft", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a synthetic tsv-mbr dataset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("uniform", "clustered"), default="uniform")
    p.add_argument("--hotspots", type=int, default=5)
    p.add_argument("--spread", type=float, default=0.01)
    p.add_argument("--size-min", type=float, default=1e-3)
    p.add_argument("--size-max", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("partition", help="partition one dataset")
    p.add_argument("input")
    p.add_argument("--algo", choices=algos, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("sample-partition", help="partition a uniform sample")
    p.add_argument("input")
    p.add_argument("--algo", choices=("bsp", "slc", "bos"), required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_sample_partition)

    p = sub.add_parser("parallel-partition", help="two-level parallel partitioning")
    p.add_argument("input")
    p.add_argument("--algo", choices=algos, required=True)
    p.add_argument("--coarse-payload", type=int, required=True)
    p.add_argument("--anchor-sample", type=int, default=DEFAULT_ANCHOR_SAMPLE)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_parallel_partition)

    p = sub.add_parser("sweep", help="quality/time over a ladder of payload fractions")
    p.add_argument("input")
    p.add_argument("--algos", nargs="+", choices=algos, default=algos)
    p.add_argument("--fractions", nargs="+", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="CSV path")
    _add_common(p, payload=False)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("join", help="tile-parallel MBR join of two datasets")
    p.add_argument("inputs", nargs=2)
    p.add_argument("--algo", choices=algos, required=True)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--oracle", action="store_true", help="check against brute force")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_join)

    p = sub.add_parser("stats", help="recompute the report of a partition output dir")
    p.add_argument("dir")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "workers", 1) is None:
        args.workers = default_workers()
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
