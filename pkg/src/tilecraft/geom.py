"""Rectangles, datasets and the Hilbert ordering used by every partitioner.

All predicates use closed-rectangle semantics: touching edges or corners
count as intersecting, and a rectangle contains itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

HILBERT_ORDER = 16
MAX_HILBERT_ORDER = 31


@dataclass(frozen=True)
class Rect:
    min_x: float
    min_y: float
    max_x: float
    max_y: float

    def __post_init__(self):
        coords = (self.min_x, self.min_y, self.max_x, self.max_y)
        if not all(math.isfinite(c) for c in coords):
            raise ValueError(f"non-finite rectangle coordinates: {coords}")
        if self.min_x > self.max_x or self.min_y > self.max_y:
            raise ValueError(f"inverted rectangle: {coords}")

    @property
    def width(self) -> float:
        return self.max_x - self.min_x

    @property
    def height(self) -> float:
        return self.max_y - self.min_y

    @property
    def area(self) -> float:
        return self.width * self.height

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.min_x, self.min_y, self.max_x, self.max_y)


@dataclass(frozen=True)
class SpatialObject:
    id: int
    mbr: Rect
    payload_text: str = ""


def rect_intersects(a: Rect, b: Rect) -> bool:
    return (a.min_x <= b.max_x and b.min_x <= a.max_x
            and a.min_y <= b.max_y and b.min_y <= a.max_y)


def rect_contains(outer: Rect, inner: Rect) -> bool:
    return (outer.min_x <= inner.min_x and inner.max_x <= outer.max_x
            and outer.min_y <= inner.min_y and inner.max_y <= outer.max_y)


def centroid(r: Rect) -> tuple[float, float]:
    return ((r.min_x + r.max_x) / 2, (r.min_y + r.max_y) / 2)


def spatial_universe(objects: Iterable[SpatialObject]) -> Rect:
    """Smallest rectangle containing every object's MBR."""
    objects = list(objects)
    if not objects:
        raise ValueError("empty dataset")
    return Rect(
        min(o.mbr.min_x for o in objects),
        min(o.mbr.min_y for o in objects),
        max(o.mbr.max_x for o in objects),
        max(o.mbr.max_y for o in objects),
    )


def boxes_universe(boxes: np.ndarray) -> Rect:
    if len(boxes) == 0:
        raise ValueError("empty dataset")
    return Rect(float(boxes[:, 0].min()), float(boxes[:, 1].min()),
                float(boxes[:, 2].max()), float(boxes[:, 3].max()))


def box_centroids(boxes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return (boxes[:, 0] + boxes[:, 2]) / 2, (boxes[:, 1] + boxes[:, 3]) / 2


class Dataset:
    """A set of spatial objects stored column-wise.

    ``ids`` is an int64 array, ``boxes`` an ``(n, 4)`` float64 array of
    ``min_x, min_y, max_x, max_y`` rows, and ``texts`` the opaque payload
    strings (``None`` when no object carries one).

    ``universe`` defaults to the MBR of all boxes. An explicit universe is
    accepted as long as it contains every box.
    """

    __slots__ = ("ids", "boxes", "texts", "_universe")

    def __init__(self, ids, boxes, texts: Sequence[str] | None = None,
                 universe: Rect | None = None, *, validate: bool = True):
        ids = np.ascontiguousarray(ids, dtype=np.int64)
        boxes = np.ascontiguousarray(boxes, dtype=np.float64).reshape(-1, 4)
        if len(ids) != len(boxes):
            raise ValueError("ids and boxes differ in length")
        if texts is not None and len(texts) != len(ids):
            raise ValueError("texts and ids differ in length")
        if validate and len(ids):
            if not np.isfinite(boxes).all():
                raise ValueError("non-finite coordinates in dataset")
            if ((boxes[:, 0] > boxes[:, 2]) | (boxes[:, 1] > boxes[:, 3])).any():
                raise ValueError("inverted rectangle in dataset")
            if (ids < 0).any():
                raise ValueError("object ids must be non-negative")
            if len(np.unique(ids)) != len(ids):
                raise ValueError("duplicate object ids in dataset")
        self.ids = ids
        self.boxes = boxes
        self.texts = None if texts is None else list(texts)
        if universe is not None and len(ids):
            tight = boxes_universe(boxes)
            if not rect_contains(universe, tight):
                raise ValueError("universe does not contain every object")
        self._universe = universe

    @classmethod
    def from_objects(cls, objects: Iterable[SpatialObject]) -> "Dataset":
        objects = list(objects)
        ids = [o.id for o in objects]
        boxes = [o.mbr.as_tuple() for o in objects]
        texts = [o.payload_text for o in objects]
        if not any(texts):
            texts = None
        return cls(ids, np.array(boxes, dtype=np.float64).reshape(-1, 4), texts)

    def __len__(self) -> int:
        return len(self.ids)

    def __getstate__(self):
        return (self.ids, self.boxes, self.texts, self._universe)

    def __setstate__(self, state):
        self.ids, self.boxes, self.texts, self._universe = state

    @property
    def universe(self) -> Rect:
        if self._universe is None:
            self._universe = boxes_universe(self.boxes)
        return self._universe

    def centroids(self) -> tuple[np.ndarray, np.ndarray]:
        return box_centroids(self.boxes)

    def subset(self, index, universe: Rect | None = None) -> "Dataset":
        index = np.asarray(index)
        if index.dtype == bool:
            index = np.flatnonzero(index)
        texts = None if self.texts is None else [self.texts[i] for i in index]
        return Dataset(self.ids[index], self.boxes[index], texts, universe,
                       validate=False)

    def object(self, i: int) -> SpatialObject:
        b = self.boxes[i]
        text = "" if self.texts is None else self.texts[i]
        return SpatialObject(int(self.ids[i]), Rect(*map(float, b)), text)

    @property
    def objects(self) -> list[SpatialObject]:
        return [self.object(i) for i in range(len(self))]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (np.array_equal(self.ids, other.ids)
                and np.array_equal(self.boxes, other.boxes)
                and (self.texts or None) == (other.texts or None))

    def __repr__(self) -> str:
        return f"Dataset(n={len(self)})"


# -- Hilbert curve ---------------------------------------------------------

def _cell_coords(xs, ys, universe: Rect, order: int):
    side = 1 << order
    cells = []
    for vals, lo, extent in ((xs, universe.min_x, universe.width),
                             (ys, universe.min_y, universe.height)):
        if extent > 0:
            c = np.floor((np.asarray(vals, np.float64) - lo) / extent * side)
        else:
            c = np.zeros(np.shape(vals))
        cells.append(np.clip(c, 0, side - 1).astype(np.uint64))
    return cells[0], cells[1]


def hilbert_rank_cells(cx: np.ndarray, cy: np.ndarray, order: int) -> np.ndarray:
    """Curve rank of integer grid cells on a ``2**order`` square grid.

    Base case: (0,0) -> 0, (0,1) -> 1, (1,1) -> 2, (1,0) -> 3.
    """
    x = np.array(cx, dtype=np.uint64, copy=True)
    y = np.array(cy, dtype=np.uint64, copy=True)
    n = np.uint64((1 << order) - 1)
    d = np.zeros(x.shape, dtype=np.uint64)
    one, three = np.uint64(1), np.uint64(3)
    for level in range(order - 1, -1, -1):
        s = np.uint64(1 << level)
        rx = (x >> np.uint64(level)) & one
        ry = (y >> np.uint64(level)) & one
        d += s * s * ((three * rx) ^ ry)
        flip = (ry == 0) & (rx == 1)
        x = np.where(flip, n - x, x)
        y = np.where(flip, n - y, y)
        swap = ry == 0
        x, y = np.where(swap, y, x), np.where(swap, x, y)
    return d


def hilbert_ranks(xs, ys, universe: Rect, order: int = HILBERT_ORDER) -> np.ndarray:
    """Vectorized :func:`hilbert_index` without the outside-universe check."""
    if not 1 <= order <= MAX_HILBERT_ORDER:
        raise ValueError(f"order must be in [1, {MAX_HILBERT_ORDER}]")
    cx, cy = _cell_coords(xs, ys, universe, order)
    return hilbert_rank_cells(cx, cy, order)


def hilbert_index(p: tuple[float, float], universe: Rect,
                  order: int = HILBERT_ORDER) -> int:
    x, y = p
    if not (universe.min_x <= x <= universe.max_x
            and universe.min_y <= y <= universe.max_y):
        raise ValueError("point outside universe")
    return int(hilbert_ranks(np.array([x]), np.array([y]), universe, order)[0])


# -- bulk rectangle intersection ---------------------------------------------

_LEAF_PAIRS = 1 << 14
_CHUNK_PAIRS = 1 << 22


def _brute_pairs(a, b, ia, ib):
    """Closed-box intersection over all of ``ia x ib``, chunked along ``ia``."""
    out_a, out_b = [], []
    B = b[ib]
    step = max(1, _CHUNK_PAIRS // max(1, len(ib)))
    for lo in range(0, len(ia), step):
        A = a[ia[lo:lo + step]]
        hit = ((A[:, None, 0] <= B[None, :, 2]) & (B[None, :, 0] <= A[:, None, 2])
               & (A[:, None, 1] <= B[None, :, 3]) & (B[None, :, 1] <= A[:, None, 3]))
        i, j = np.nonzero(hit)
        out_a.append(ia[lo:lo + step][i])
        out_b.append(ib[j])
    return out_a, out_b


def intersecting_pairs(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All ``(i, j)`` with box ``a[i]`` intersecting box ``b[j]`` (closed).

    Recursively halves the problem at the median box center along whichever
    axis sends fewer boxes to both sides. A box goes left when its low edge
    is at or below the cut and right when its high edge is at or above it,
    so every intersecting pair meets in at least one half. Once halving stops
    shrinking the problem, the rest is compared exhaustively. Output is
    sorted by ``(i, j)`` without duplicates.
    """
    a = np.asarray(a, np.float64).reshape(-1, 4)
    b = np.asarray(b, np.float64).reshape(-1, 4)
    out_a, out_b = [], []
    stack = [(np.arange(len(a)), np.arange(len(b)))]
    while stack:
        ia, ib = stack.pop()
        if len(ia) == 0 or len(ib) == 0:
            continue
        if len(ia) * len(ib) <= _LEAF_PAIRS:
            pa, pb = _brute_pairs(a, b, ia, ib)
            out_a += pa
            out_b += pb
            continue
        best = None
        for axis in (0, 1):
            lo_a, hi_a = a[ia, axis], a[ia, axis + 2]
            lo_b, hi_b = b[ib, axis], b[ib, axis + 2]
            cut = np.median(np.concatenate([lo_a + hi_a, lo_b + hi_b])) / 2
            split = (lo_a <= cut, hi_a >= cut, lo_b <= cut, hi_b >= cut)
            left = int(split[0].sum()) * int(split[2].sum())
            right = int(split[1].sum()) * int(split[3].sum())
            if best is None or left + right < best[0]:
                best = (left + right, max(left, right), split)
        total, largest, (la, ra, lb, rb) = best
        if largest > 0.8 * len(ia) * len(ib):
            pa, pb = _brute_pairs(a, b, ia, ib)
            out_a += pa
            out_b += pb
            continue
        stack.append((ia[ra], ib[rb]))
        stack.append((ia[la], ib[lb]))
    if not out_a:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    code = np.unique(np.concatenate(out_a).astype(np.int64) * max(1, len(b))
                     + np.concatenate(out_b))
    return code // max(1, len(b)), code % max(1, len(b))
