"""Multi-assignment replication of objects onto a partition layout."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geom import Dataset, intersecting_pairs
from .partitioners import PartitionLayout


class CoverageViolation(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Assignment:
    """``(partition_id, object_id, is_replica)`` rows sorted by partition, object."""

    partition_ids: np.ndarray
    object_ids: np.ndarray
    is_replica: np.ndarray
    source_layout_tag: str = ""

    def __len__(self) -> int:
        return len(self.partition_ids)

    @property
    def entries(self) -> list[tuple[int, int, bool]]:
        return list(zip(self.partition_ids.tolist(), self.object_ids.tolist(),
                        self.is_replica.tolist()))

    @property
    def replica_count(self) -> int:
        return int(np.count_nonzero(self.is_replica))

    def payloads(self, k: int) -> np.ndarray:
        return np.bincount(self.partition_ids, minlength=k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Assignment):
            return NotImplemented
        return (np.array_equal(self.partition_ids, other.partition_ids)
                and np.array_equal(self.object_ids, other.object_ids)
                and np.array_equal(self.is_replica, other.is_replica))


def _first_per_object(obj: np.ndarray, candidate: np.ndarray, n: int) -> np.ndarray:
    """Lowest partition among rows with ``candidate`` set, per object; -1 if none.

    ``obj`` must be sorted ascending with partitions ascending within each object.
    """
    home = np.full(n, -1, np.int64)
    rows = np.flatnonzero(candidate)
    first = rows[np.unique(obj[rows], return_index=True)[1]]
    home[obj[first]] = first
    return home


def masj_assign(data: Dataset, layout: PartitionLayout) -> Assignment:
    """Assign each object to every partition its MBR intersects.

    The home (non-replica) entry is the lowest-id partition containing the
    object's centroid. For overlapping layouts the partition the object was
    grouped into at build time is preferred when it is known.
    """
    n = len(data)
    pboxes = layout.boxes()
    obj, pid = intersecting_pairs(data.boxes, pboxes)
    hit = np.bincount(obj, minlength=n)
    if n and (hit == 0).any():
        missing = int(data.ids[np.argmax(hit == 0)])
        raise CoverageViolation(f"coverage violation: object {missing} intersects no partition")

    cx, cy = data.centroids()
    pb = pboxes[pid]
    holds = ((pb[:, 0] <= cx[obj]) & (cx[obj] <= pb[:, 2])
             & (pb[:, 1] <= cy[obj]) & (cy[obj] <= pb[:, 3]))
    home_row = _first_per_object(obj, holds, n)

    if layout.overlapping and len(layout.member_ids):
        sorter = np.argsort(layout.member_ids, kind="stable")
        pos = np.searchsorted(layout.member_ids, data.ids, sorter=sorter)
        pos = np.minimum(pos, len(sorter) - 1)
        known = layout.member_ids[sorter[pos]] == data.ids
        build_pid = np.where(known, layout.member_pids[sorter[pos]], -1)
        grouped = _first_per_object(obj, pid == build_pid[obj], n)
        home_row = np.where(grouped >= 0, grouped, home_row)
    if layout.overlapping:
        # overlapping layouts need not contain the centroid; fall back to
        # the lowest intersecting partition
        fallback = _first_per_object(obj, np.ones(len(obj), bool), n)
        home_row = np.where(home_row >= 0, home_row, fallback)
    elif n and (home_row < 0).any():
        missing = int(data.ids[np.argmax(home_row < 0)])
        raise CoverageViolation(
            f"coverage violation: centroid of object {missing} lies in no partition")

    replica = np.ones(len(obj), bool)
    replica[home_row] = False
    order = np.lexsort((data.ids[obj], pid))
    return Assignment(pid[order].astype(np.int64), data.ids[obj][order],
                      replica[order], layout.algorithm_tag)


def replica_fraction(a: Assignment, n: int) -> float:
    if n < 1:
        raise ValueError("n must be positive")
    return (len(a) - n) / n
