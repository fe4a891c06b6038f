"""Partition a uniform sample, then stretch the layout over the full data."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from ._rng import Stream
from .geom import Dataset, Rect
from .partitioners import Partition, PartitionLayout, partition

SAMPLED_ALGORITHMS = ("BSP", "SLC", "BOS")


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


@dataclass(frozen=True)
class SamplingConfig:
    gamma: float
    seed: int = 0
    algorithm: str = "BSP"

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise ValueError("gamma must lie in (0, 1]")
        if self.algorithm.upper() not in SAMPLED_ALGORITHMS:
            raise ValueError(f"sampled partitioning supports {SAMPLED_ALGORITHMS} only, "
                             f"got {self.algorithm!r}")
        object.__setattr__(self, "algorithm", self.algorithm.upper())


def uniform_sample(data: Dataset, cfg: SamplingConfig) -> Dataset:
    """``round(gamma * n)`` objects without replacement, original order kept.

    Selection keys come from the raw PCG64 stream seeded with ``cfg.seed``.
    """
    k = round_half_up(cfg.gamma * len(data))
    if k == 0:
        raise ValueError("sample too small")
    if k == len(data):
        return data
    return data.subset(Stream(cfg.seed).choose(len(data), k))


def scaled_payload(gamma: float, b: int) -> int:
    return max(1, round_half_up(gamma * b))


def expand_layout(layout: PartitionLayout, inner: Rect, outer: Rect) -> PartitionLayout:
    """Push every partition edge lying on ``inner``'s border out to ``outer``.

    Applied as a coordinate map, so zero-width strips sitting on the inner
    border move with their neighbours instead of swallowing them.
    """
    def move(v, lo, hi, new_lo, new_hi, prefer_hi):
        if v == lo and v == hi:
            return new_hi if prefer_hi else new_lo
        return new_lo if v == lo else new_hi if v == hi else v

    def stretch(p: Partition) -> Partition:
        r = p.boundary
        xs = (inner.min_x, inner.max_x, outer.min_x, outer.max_x)
        ys = (inner.min_y, inner.max_y, outer.min_y, outer.max_y)
        return replace(p, boundary=Rect(move(r.min_x, *xs, False), move(r.min_y, *ys, False),
                                        move(r.max_x, *xs, True), move(r.max_y, *ys, True)))
    return replace(layout, partitions=tuple(stretch(p) for p in layout.partitions))


def sample_partition(data: Dataset, cfg: SamplingConfig, b: int, *,
                     dim: str = "x") -> PartitionLayout:
    if b < 1:
        raise ValueError("payload b must be positive")
    sample = uniform_sample(data, cfg)
    layout = partition(sample, cfg.algorithm, scaled_payload(cfg.gamma, b), dim=dim)
    layout = expand_layout(layout, sample.universe, data.universe)
    return layout.with_provenance(f"sample gamma={cfg.gamma!r} seed={cfg.seed}")
