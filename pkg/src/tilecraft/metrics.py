"""Partition quality statistics and the analytical join cost model."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .masj import Assignment
from .partitioners import PartitionLayout


@dataclass(frozen=True)
class CostModel:
    alpha: float
    beta: float
    k: int

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be non-negative")
        if self.k < 1:
            raise ValueError("k must be at least 1")


@dataclass(frozen=True)
class QualityReport:
    k: int
    payloads: tuple[int, ...]
    build_counts: tuple[int, ...]
    payload_stddev: float
    boundary_ratio_lambda: float
    max_payload: int
    min_payload: int
    mean_payload: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["payloads"] = list(self.payloads)
        d["build_counts"] = list(self.build_counts)
        return d


def payload_stddev(payloads: Sequence[int]) -> float:
    """Population standard deviation."""
    p = np.asarray(payloads, dtype=np.float64)
    if p.size == 0:
        raise ValueError("no payloads")
    return float(np.sqrt(np.mean((p - p.mean()) ** 2)))


def boundary_ratio(total_assigned: int, n: int) -> float:
    if n < 1:
        raise ValueError("n must be positive")
    if total_assigned < n:
        raise ValueError("missing assignments")
    # (total - n) / n rather than total / n - 1: exact in integers before the divide
    return (total_assigned - n) / n


def estimated_join_cost(n_r: int, n_s: int, model: CostModel) -> float:
    """``(1 + alpha)**2 * |R| * |S| / k + beta * (|R| + |S|)``."""
    return (1 + model.alpha) ** 2 * n_r * n_s / model.k + model.beta * (n_r + n_s)


def quality_report(layout: PartitionLayout, assignment: Assignment, n: int) -> QualityReport:
    payloads = assignment.payloads(layout.k)
    if len(payloads) > layout.k:
        raise ValueError("assignment references partitions outside the layout")
    total = int(payloads.sum())
    return QualityReport(
        k=layout.k,
        payloads=tuple(int(p) for p in payloads),
        build_counts=tuple(layout.build_counts()),
        payload_stddev=payload_stddev(payloads),
        boundary_ratio_lambda=boundary_ratio(total, n),
        max_payload=int(payloads.max()),
        min_payload=int(payloads.min()),
        mean_payload=total / layout.k,
    )

