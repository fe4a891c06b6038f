"""Synthetic datasets on the unit square.

``uniform`` spreads small objects evenly; ``clustered`` packs objects of
widely varying size around a few hotspots.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import Stream
from .geom import Dataset


@dataclass(frozen=True)
class GenSpec:
    n: int
    mode: str = "uniform"
    hotspots: int = 5
    cluster_spread: float = 0.01
    size_min: float = 1e-3
    size_max: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.mode not in ("uniform", "clustered"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 0 < self.size_min <= self.size_max:
            raise ValueError("need 0 < size_min <= size_max")
        if self.mode == "clustered" and self.hotspots < 1:
            raise ValueError("clustered mode needs at least one hotspot")
        if self.cluster_spread < 0:
            raise ValueError("cluster_spread must be non-negative")


def _log_uniform(stream: Stream, n: int, lo: float, hi: float) -> np.ndarray:
    if lo == hi:
        return np.full(n, lo)
    return np.exp(np.log(lo) + stream.uniform(n) * (np.log(hi) - np.log(lo)))


def generate(spec: GenSpec) -> Dataset:
    stream = Stream(spec.seed)
    n = spec.n
    if spec.mode == "uniform":
        cx, cy = stream.uniform(n), stream.uniform(n)
    else:
        centers = stream.uniform(2 * spec.hotspots).reshape(spec.hotspots, 2)
        which = stream.integers(n, spec.hotspots)
        cx = centers[which, 0] + spec.cluster_spread * stream.normal(n)
        cy = centers[which, 1] + spec.cluster_spread * stream.normal(n)
        cx, cy = np.clip(cx, 0.0, 1.0), np.clip(cy, 0.0, 1.0)
    w = _log_uniform(stream, n, spec.size_min, spec.size_max)
    h = _log_uniform(stream, n, spec.size_min, spec.size_max)
    boxes = np.column_stack([cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2])
    np.clip(boxes, 0.0, 1.0, out=boxes)
    return Dataset(np.arange(n, dtype=np.int64), boxes, validate=False)
