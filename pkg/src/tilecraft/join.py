"""Tile-parallel MBR spatial join with global de-duplication."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .geom import Dataset, intersecting_pairs
from .masj import Assignment, masj_assign
from .partitioners import PartitionLayout, partition


@dataclass(frozen=True)
class Tile:
    r_ids: np.ndarray
    r_boxes: np.ndarray
    s_ids: np.ndarray
    s_boxes: np.ndarray


@dataclass(frozen=True, eq=False)
class CoPartition:
    tiles: tuple[Tile, ...]
    r_assignment: Assignment
    s_assignment: Assignment


@dataclass(frozen=True)
class JoinResult:
    pairs: frozenset
    per_tile_pair_counts: tuple[int, ...]
    dedup_removed: int

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)


def merge_datasets(r: Dataset, s: Dataset) -> Dataset:
    """R followed by S, renumbered 0..|R|+|S|-1, for building a shared layout."""
    boxes = np.concatenate([r.boxes, s.boxes])
    return Dataset(np.arange(len(r) + len(s)), boxes, validate=False)


def join_layout(r: Dataset, s: Dataset, algorithm: str, b: int, **kw) -> PartitionLayout:
    """Partition the merged datasets so one layout serves both sides."""
    return partition(merge_datasets(r, s), algorithm, b, **kw)


def _side(a: Assignment, mask, ids, boxes, k: int):
    pid, pos, rep = a.partition_ids[mask], a.object_ids[mask], a.is_replica[mask]
    order = np.lexsort((ids[pos], pid))
    pid, pos, rep = pid[order], pos[order], rep[order]
    bounds = np.searchsorted(pid, np.arange(k + 1))
    lists = [(ids[pos[lo:hi]], boxes[pos[lo:hi]]) for lo, hi in zip(bounds[:-1], bounds[1:])]
    return Assignment(pid, ids[pos], rep, a.source_layout_tag), lists


def copartition(r: Dataset, s: Dataset, layout: PartitionLayout) -> CoPartition:
    """MASJ-assign both datasets against one layout; per-tile lists sorted by id.

    Both sides are assigned as one merged dataset (R first, then S), which is
    the numbering :func:`join_layout` builds layouts under.
    """
    merged = merge_datasets(r, s)
    a = masj_assign(merged, layout)
    ids = np.concatenate([r.ids, s.ids])
    in_r = a.object_ids < len(r)
    ra, r_lists = _side(a, in_r, ids, merged.boxes, layout.k)
    sa, s_lists = _side(a, ~in_r, ids, merged.boxes, layout.k)
    tiles = tuple(Tile(ri, rb, si, sb) for (ri, rb), (si, sb) in zip(r_lists, s_lists))
    return CoPartition(tiles, ra, sa)


def _join_tile(tile: Tile) -> np.ndarray:
    if len(tile.r_ids) == 0 or len(tile.s_ids) == 0:
        return np.zeros((0, 2), np.int64)
    i, j = intersecting_pairs(tile.r_boxes, tile.s_boxes)
    return np.column_stack([tile.r_ids[i], tile.s_ids[j]])


def tile_join(tiles: CoPartition | tuple[Tile, ...], workers: int = 1) -> JoinResult:
    """Join every tile independently, then collapse pairs found in several tiles."""
    if isinstance(tiles, CoPartition):
        tiles = tiles.tiles
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            found = list(pool.map(_join_tile, tiles))
    else:
        found = [_join_tile(t) for t in tiles]
    counts = tuple(len(f) for f in found)
    everything = np.concatenate(found) if found else np.zeros((0, 2), np.int64)
    pairs = frozenset(map(tuple, np.unique(everything, axis=0).tolist()))
    return JoinResult(pairs, counts, sum(counts) - len(pairs))


def brute_join(r: Dataset, s: Dataset) -> set[tuple[int, int]]:
    """Exhaustive all-pairs MBR intersection, for checking :func:`tile_join`."""
    out = set()
    if len(r) == 0 or len(s) == 0:
        return out
    sb = s.boxes
    for rid, (x0, y0, x1, y1) in zip(r.ids.tolist(), r.boxes):
        hit = (sb[:, 0] <= x1) & (x0 <= sb[:, 2]) & (sb[:, 1] <= y1) & (y0 <= sb[:, 3])
        out.update((rid, sid) for sid in s.ids[hit].tolist())
    return out


def spatial_join(r: Dataset, s: Dataset, layout: PartitionLayout,
                 workers: int = 1) -> JoinResult:
    return tile_join(copartition(r, s, layout), workers)
