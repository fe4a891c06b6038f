"""The six partitioning algorithms: FG, BSP, SLC, BOS, HC and STR.

Every partitioner takes a :class:`~tilecraft.geom.Dataset` and a payload
bound ``b`` and returns a :class:`PartitionLayout`. Objects are attributed
to partitions by centroid while a layout is built; replication of boundary
objects happens later in :mod:`tilecraft.masj`.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .geom import HILBERT_ORDER, Dataset, Rect, hilbert_ranks

ALGORITHMS = ("FG", "BSP", "SLC", "BOS", "HC", "STR")
OVERLAPPING = frozenset({"HC", "STR"})


class PartitionWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Partition:
    id: int
    boundary: Rect
    build_count: int


@dataclass(frozen=True, eq=False)
class PartitionLayout:
    """Ordered partitions plus the build-time object grouping.

    ``member_ids[i]`` was grouped into partition ``member_pids[i]`` when the
    layout was built. Overlapping layouts use this grouping to pick each
    object's home partition.
    """

    partitions: tuple[Partition, ...]
    algorithm_tag: str
    payload_target: int
    overlapping: bool = False
    member_ids: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int64))
    member_pids: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int64))
    warnings: tuple[str, ...] = ()
    provenance: str = ""

    def __post_init__(self):
        if not self.partitions:
            raise ValueError("layout has no partitions")
        for i, p in enumerate(self.partitions):
            if p.id != i:
                raise ValueError("partition ids must be 0..k-1 in order")

    @property
    def k(self) -> int:
        return len(self.partitions)

    def boxes(self) -> np.ndarray:
        return np.array([p.boundary.as_tuple() for p in self.partitions],
                        dtype=np.float64).reshape(-1, 4)

    def build_counts(self) -> list[int]:
        return [p.build_count for p in self.partitions]

    def same_partitions(self, other: "PartitionLayout") -> bool:
        """Boundaries and build counts equal, ignoring tags and provenance."""
        return self.partitions == other.partitions

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartitionLayout):
            return NotImplemented
        return (self.partitions == other.partitions
                and self.algorithm_tag == other.algorithm_tag
                and self.payload_target == other.payload_target
                and self.overlapping == other.overlapping
                and np.array_equal(self.member_ids, other.member_ids)
                and np.array_equal(self.member_pids, other.member_pids)
                and self.warnings == other.warnings
                and self.provenance == other.provenance)

    def __hash__(self):
        return hash(self.partitions)

    def with_provenance(self, provenance: str) -> "PartitionLayout":
        return replace(self, provenance=provenance)


def _check(data: Dataset, b: int) -> None:
    if not isinstance(b, (int, np.integer)) or b < 1:
        raise ValueError(f"payload b must be a positive integer, got {b!r}")
    if len(data) == 0:
        raise ValueError("empty dataset")


def grid_side(n: int, b: int) -> int:
    """``ceil(sqrt(n / b))`` in exact integer arithmetic."""
    m = math.isqrt(n // b)
    while m * m * b < n:
        m += 1
    return max(m, 1)


def _layout(data, tag, b, boxes, groups, overlapping, warns=()):
    """Assemble a layout from per-partition boxes and a group index per object."""
    counts = np.bincount(groups, minlength=len(boxes))
    parts = tuple(Partition(i, Rect(*map(float, bx)), int(c))
                  for i, (bx, c) in enumerate(zip(boxes, counts)))
    for w in warns:
        warnings.warn(w, PartitionWarning, stacklevel=3)
    return PartitionLayout(parts, tag, int(b), overlapping,
                           data.ids.copy(), np.asarray(groups, np.int64), tuple(warns))


def _sorted_order(key: np.ndarray, ids: np.ndarray) -> np.ndarray:
    return np.lexsort((ids, key))


def _group_mbrs(boxes: np.ndarray, order: np.ndarray, sizes) -> tuple[np.ndarray, np.ndarray]:
    """MBR per consecutive run of ``order``; returns (mbrs, group index per object)."""
    sizes = np.asarray(sizes, np.int64)
    starts = np.concatenate(([0], np.cumsum(sizes)[:-1]))
    ob = boxes[order]
    mbrs = np.column_stack([
        np.minimum.reduceat(ob[:, 0], starts),
        np.minimum.reduceat(ob[:, 1], starts),
        np.maximum.reduceat(ob[:, 2], starts),
        np.maximum.reduceat(ob[:, 3], starts),
    ])
    groups = np.empty(len(order), np.int64)
    groups[order] = np.repeat(np.arange(len(sizes)), sizes)
    return mbrs, groups


# -- FG ------------------------------------------------------------------------

def partition_fg(data: Dataset, b: int) -> PartitionLayout:
    """Fixed grid: an m-by-m grid over the universe, empty cells included.

    Partition ids run row-major from the bottom-left cell.
    """
    _check(data, b)
    m = grid_side(len(data), b)
    u = data.universe
    xs = [u.min_x + u.width * i / m for i in range(m)] + [u.max_x]
    ys = [u.min_y + u.height * i / m for i in range(m)] + [u.max_y]
    boxes = np.array([(xs[c], ys[r], xs[c + 1], ys[r + 1])
                      for r in range(m) for c in range(m)], dtype=np.float64)
    cx, cy = data.centroids()
    col = np.searchsorted(np.array(xs[1:-1]), cx, side="right")
    row = np.searchsorted(np.array(ys[1:-1]), cy, side="right")
    return _layout(data, "FG", b, boxes, row * m + col, False)


# -- BSP -----------------------------------------------------------------------

def _median_cut(values: np.ndarray):
    """Cut position and left-side size for an already sorted coordinate array.

    The left child takes the lower half (median included for odd counts) and
    the cut sits midway between the last left and first right centroid. If
    those coincide, the nearest separable position is used instead. Returns
    None when every value is equal.
    """
    c = len(values)
    h = (c + 1) // 2
    gaps = np.flatnonzero(values[1:] > values[:-1]) + 1
    if len(gaps) == 0:
        return None
    h = int(gaps[np.argmin(np.abs(gaps - h))])
    return (values[h - 1] + values[h]) / 2, h


def partition_bsp(data: Dataset, b: int) -> PartitionLayout:
    """Binary split: recursively cut regions holding more than b centroids.

    Each split evaluates the median cut in x and in y and keeps the one with
    the larger product of child areas (ties go to x). Leaves are emitted in
    depth-first order, lower child first.
    """
    _check(data, b)
    cx, cy = data.centroids()
    ids = data.ids
    u = data.universe
    boxes, members, warns = [], [], []
    stack = [(u.as_tuple(), np.arange(len(data)))]
    while stack:
        region, idx = stack.pop()
        if len(idx) <= b:
            boxes.append(region)
            members.append(idx)
            continue
        x0, y0, x1, y1 = region
        best = None
        for axis, coord in ((0, cx), (1, cy)):
            order = idx[_sorted_order(coord[idx], ids[idx])]
            found = _median_cut(coord[order])
            if found is None:
                continue
            cut, h = found
            if axis == 0:
                product = (cut - x0) * (y1 - y0) * (x1 - cut) * (y1 - y0)
                lo, hi = (x0, y0, cut, y1), (cut, y0, x1, y1)
            else:
                product = (x1 - x0) * (cut - y0) * (x1 - x0) * (y1 - cut)
                lo, hi = (x0, y0, x1, cut), (x0, cut, x1, y1)
            if best is None or product > best[0]:
                best = (product, lo, hi, order[:h], order[h:])
        if best is None:
            warns.append(f"BSP: {len(idx)} coincident centroids exceed payload {b}; "
                         "emitting an oversized leaf")
            boxes.append(region)
            members.append(idx)
            continue
        _, lo, hi, left, right = best
        stack.append((hi, right))
        stack.append((lo, left))
    groups = np.empty(len(data), np.int64)
    for pid, idx in enumerate(members):
        groups[idx] = pid
    return _layout(data, "BSP", b, np.array(boxes, np.float64), groups, False, warns)


# -- SLC / BOS ------------------------------------------------------------------

def _strip_sizes(n: int, b: int) -> list[int]:
    return [b] * (n // b) + ([n % b] if n % b else [])


def partition_slc(data: Dataset, b: int, dim: str = "x") -> PartitionLayout:
    """Strips along ``dim``, each holding the next b centroids in sort order.

    Cuts sit midway between the last centroid of one strip and the first of
    the next; strips span the universe in the other dimension.
    """
    _check(data, b)
    if dim not in ("x", "y"):
        raise ValueError(f"dim must be 'x' or 'y', got {dim!r}")
    axis = 0 if dim == "x" else 1
    cx, cy = data.centroids()
    coord = cx if axis == 0 else cy
    order = _sorted_order(coord, data.ids)
    sc = coord[order]
    sizes = _strip_sizes(len(data), b)
    ends = np.cumsum(sizes)[:-1]
    cuts = (sc[ends - 1] + sc[ends]) / 2
    u = data.universe
    lo_edge, hi_edge = (u.min_x, u.max_x) if axis == 0 else (u.min_y, u.max_y)
    edges = [lo_edge, *cuts.tolist(), hi_edge]
    if axis == 0:
        boxes = [(edges[i], u.min_y, edges[i + 1], u.max_y) for i in range(len(sizes))]
    else:
        boxes = [(u.min_x, edges[i], u.max_x, edges[i + 1]) for i in range(len(sizes))]
    groups = np.empty(len(data), np.int64)
    groups[order] = np.repeat(np.arange(len(sizes)), sizes)
    return _layout(data, "SLC", b, np.array(boxes, np.float64), groups, False)


class _AxisQueue:
    """Objects sorted along one axis, with lazy removal."""

    def __init__(self, coord: np.ndarray, ids: np.ndarray):
        self.order = _sorted_order(coord, ids)
        self.sorted = coord[self.order]
        self.head = 0

    def take(self, alive: np.ndarray, count: int) -> np.ndarray:
        """Positions (into ``order``) of the first ``count`` live objects."""
        n = len(self.order)
        while self.head < n and not alive[self.order[self.head]]:
            self.head += 1
        found, pos, chunk = [], self.head, max(2 * count, 64)
        need = count
        while need > 0 and pos < n:
            window = np.arange(pos, min(n, pos + chunk))
            live = window[alive[self.order[window]]]
            found.append(live[:need])
            need -= len(found[-1])
            pos += chunk
            chunk *= 2
        return np.concatenate(found) if found else np.zeros(0, np.int64)


class _CrossingCounter:
    """Counts live objects whose extent along one axis strictly straddles a line.

    For objects with ``lo < hi``, ``lo < c < hi`` holds exactly when
    ``lo < c`` and not ``hi <= c``, so two prefix counts over live flags kept
    in ``lo`` order and ``hi`` order suffice.
    """

    def __init__(self, lo: np.ndarray, hi: np.ndarray):
        ext = np.flatnonzero(hi > lo)
        self.by_lo = ext[np.argsort(lo[ext], kind="stable")]
        self.by_hi = ext[np.argsort(hi[ext], kind="stable")]
        self.lo_sorted, self.hi_sorted = lo[self.by_lo], hi[self.by_hi]
        n = len(lo)
        self.pos_lo = np.full(n, -1, np.int64)
        self.pos_hi = np.full(n, -1, np.int64)
        self.pos_lo[self.by_lo] = np.arange(len(ext))
        self.pos_hi[self.by_hi] = np.arange(len(ext))
        self.live_lo = np.ones(len(ext), bool)
        self.live_hi = np.ones(len(ext), bool)

    def remove(self, objs: np.ndarray) -> None:
        p = self.pos_lo[objs]
        self.live_lo[p[p >= 0]] = False
        p = self.pos_hi[objs]
        self.live_hi[p[p >= 0]] = False

    def crossing(self, cut: float) -> int:
        below = np.count_nonzero(self.live_lo[:np.searchsorted(self.lo_sorted, cut, "left")])
        ended = np.count_nonzero(self.live_hi[:np.searchsorted(self.hi_sorted, cut, "right")])
        return int(below - ended)


def partition_bos(data: Dataset, b: int) -> PartitionLayout:
    """Boundary-optimized strips: before each cut, pick the axis whose cut
    line would be crossed by fewer remaining object MBRs (ties go to x)."""
    _check(data, b)
    boxes_in = data.boxes
    cx, cy = data.centroids()
    n = len(data)
    alive = np.ones(n, bool)
    queues = (_AxisQueue(cx, data.ids), _AxisQueue(cy, data.ids))
    counters = (_CrossingCounter(boxes_in[:, 0], boxes_in[:, 2]),
                _CrossingCounter(boxes_in[:, 1], boxes_in[:, 3]))
    region = list(data.universe.as_tuple())
    out_boxes, groups = [], np.empty(n, np.int64)
    remaining = n
    while remaining > 0:
        pid = len(out_boxes)
        if remaining <= b:
            out_boxes.append(tuple(region))
            groups[alive] = pid
            break
        candidates = []
        for axis in (0, 1):
            q = queues[axis]
            pos = q.take(alive, b + 1)
            cut = (q.sorted[pos[b - 1]] + q.sorted[pos[b]]) / 2
            candidates.append((counters[axis].crossing(cut), cut, q.order[pos[:b]]))
        axis = 0 if candidates[0][0] <= candidates[1][0] else 1
        _, cut, taken = candidates[axis]
        if axis == 0:
            out_boxes.append((region[0], region[1], cut, region[3]))
            region[0] = cut
        else:
            out_boxes.append((region[0], region[1], region[2], cut))
            region[1] = cut
        alive[taken] = False
        for c in counters:
            c.remove(taken)
        groups[taken] = pid
        remaining -= b
    return _layout(data, "BOS", b, np.array(out_boxes, np.float64), groups, False)


# -- HC / STR -------------------------------------------------------------------

def hc_order(data: Dataset, order: int = HILBERT_ORDER) -> np.ndarray:
    """Object positions sorted by Hilbert rank of the centroid, ties by id."""
    cx, cy = data.centroids()
    ranks = hilbert_ranks(cx, cy, data.universe, order)
    return np.lexsort((data.ids, ranks))


def partition_hc(data: Dataset, b: int, order: int = HILBERT_ORDER) -> PartitionLayout:
    """Consecutive runs of b objects along the Hilbert curve; each partition
    is the MBR of its members."""
    _check(data, b)
    hc = hc_order(data, order)
    sizes = _strip_sizes(len(data), b)
    mbrs, groups = _group_mbrs(data.boxes, hc, sizes)
    return _layout(data, "HC", b, mbrs, groups, True)


def partition_str(data: Dataset, b: int) -> PartitionLayout:
    """Sort-tile-recursive packing: m vertical slabs, then runs of at most b
    objects along y inside each slab."""
    _check(data, b)
    n = len(data)
    m = grid_side(n, b)
    slab = -(-n // m)
    cx, cy = data.centroids()
    by_x = _sorted_order(cx, data.ids)
    order_parts, sizes = [], []
    for start in range(0, n, slab):
        members = by_x[start:start + slab]
        order_parts.append(members[_sorted_order(cy[members], data.ids[members])])
        sizes.extend(_strip_sizes(len(members), b))
    mbrs, groups = _group_mbrs(data.boxes, np.concatenate(order_parts), sizes)
    return _layout(data, "STR", b, mbrs, groups, True)


def partition(data: Dataset, algorithm: str, b: int, *, dim: str = "x") -> PartitionLayout:
    """Dispatch by algorithm tag (case-insensitive)."""
    tag = algorithm.upper()
    if tag == "FG":
        return partition_fg(data, b)
    if tag == "BSP":
        return partition_bsp(data, b)
    if tag == "SLC":
        return partition_slc(data, b, dim)
    if tag == "BOS":
        return partition_bos(data, b)
    if tag == "HC":
        return partition_hc(data, b)
    if tag == "STR":
        return partition_str(data, b)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
