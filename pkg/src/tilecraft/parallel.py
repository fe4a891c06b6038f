"""Two-level parallel partitioning.

Objects are bucketed by the Hilbert rank of their centroid against sampled
rank quantiles (anchors), then every bucket is partitioned independently on
a process pool. Bucket layouts are concatenated in bucket order, so the
result does not depend on the number of workers.
"""
from __future__ import annotations

import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from ._rng import Stream
from .geom import HILBERT_ORDER, Dataset, Rect, SpatialObject, centroid, hilbert_ranks
from .partitioners import (ALGORITHMS, OVERLAPPING, PartitionLayout,
                           PartitionWarning, partition)

DEFAULT_ANCHOR_SAMPLE = 10_000


@dataclass(frozen=True)
class ParallelConfig:
    coarse_payload: int
    fine_payload: int
    fine_algorithm: str = "BSP"
    anchor_sample_size: int = DEFAULT_ANCHOR_SAMPLE
    workers: int = 1
    seed: int = 0
    dim: str = "x"

    def __post_init__(self):
        for name in ("coarse_payload", "fine_payload", "anchor_sample_size", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.fine_algorithm.upper() not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.fine_algorithm!r}")
        object.__setattr__(self, "fine_algorithm", self.fine_algorithm.upper())


@dataclass(frozen=True)
class AnchorList:
    anchors: tuple[int, ...]
    coarse_payload: int
    universe: Rect

    @property
    def bucket_count(self) -> int:
        return len(self.anchors) + 1


def build_anchors(data: Dataset, cfg: ParallelConfig) -> AnchorList:
    """Equally spaced Hilbert-rank quantiles of a seeded sample."""
    n = len(data)
    buckets = -(-n // cfg.coarse_payload)
    size = min(cfg.anchor_sample_size, n)
    if size < buckets:
        raise ValueError(f"anchor sample of {size} cannot separate {buckets} buckets")
    if buckets == 1:
        return AnchorList((), cfg.coarse_payload, data.universe)
    picked = Stream(cfg.seed).choose(n, size)
    cx, cy = data.centroids()
    ranks = np.sort(hilbert_ranks(cx[picked], cy[picked], data.universe, HILBERT_ORDER))
    if ranks[0] == ranks[-1]:
        warnings.warn("all sampled Hilbert ranks are equal; using a single bucket",
                      PartitionWarning, stacklevel=2)
        return AnchorList((), cfg.coarse_payload, data.universe)
    cuts = ranks[[j * size // buckets for j in range(1, buckets)]]
    return AnchorList(tuple(int(a) for a in np.unique(cuts)), cfg.coarse_payload,
                      data.universe)


def coarse_assign(obj: SpatialObject, anchors: AnchorList, universe: Rect | None = None) -> int:
    """Bucket of one object; buckets are left-closed rank intervals."""
    cx, cy = centroid(obj.mbr)
    rank = hilbert_ranks(np.array([cx]), np.array([cy]), universe or anchors.universe)
    return int(coarse_assign_many(rank, anchors)[0])


def coarse_assign_many(ranks: np.ndarray, anchors: AnchorList) -> np.ndarray:
    cut = np.array(anchors.anchors, dtype=np.uint64)
    return np.searchsorted(cut, ranks, side="right").astype(np.int64)


def bucket_indices(data: Dataset, anchors: AnchorList) -> list[np.ndarray]:
    """Object positions per bucket, in dataset order."""
    cx, cy = data.centroids()
    buckets = coarse_assign_many(hilbert_ranks(cx, cy, anchors.universe), anchors)
    order = np.argsort(buckets, kind="stable")
    bounds = np.searchsorted(buckets[order], np.arange(anchors.bucket_count + 1))
    return [order[bounds[i]:bounds[i + 1]] for i in range(anchors.bucket_count)]


def _partition_bucket(args):
    ids, boxes, algorithm, b, dim = args
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PartitionWarning)
        layout = partition(Dataset(ids, boxes, validate=False), algorithm, b, dim=dim)
    return layout


def default_workers() -> int:
    return int(os.environ.get("TILECRAFT_WORKERS", "1"))


def parallel_partition(data: Dataset, cfg: ParallelConfig) -> PartitionLayout:
    anchors = build_anchors(data, cfg)
    jobs = [(data.ids[idx], data.boxes[idx], cfg.fine_algorithm, cfg.fine_payload, cfg.dim)
            for idx in bucket_indices(data, anchors) if len(idx)]
    workers = min(cfg.workers, len(jobs))
    if workers <= 1:
        layouts = [_partition_bucket(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            layouts = list(pool.map(_partition_bucket, jobs))

    parts, member_ids, member_pids, warns = [], [], [], []
    for layout in layouts:
        offset = len(parts)
        parts.extend(replace(p, id=p.id + offset) for p in layout.partitions)
        member_ids.append(layout.member_ids)
        member_pids.append(layout.member_pids + offset)
        warns.extend(layout.warnings)
    for w in warns:
        warnings.warn(w, PartitionWarning, stacklevel=2)
    return PartitionLayout(
        tuple(parts), cfg.fine_algorithm, cfg.fine_payload,
        overlapping=cfg.fine_algorithm in OVERLAPPING or len(layouts) > 1,
        member_ids=np.concatenate(member_ids), member_pids=np.concatenate(member_pids),
        warnings=tuple(warns),
        provenance="" if len(layouts) == 1 else f"parallel buckets={len(layouts)}",
    )
