"""Flat tab-separated file formats.

tsv-mbr     ``id  min_x  min_y  max_x  max_y``
tsv-wkt     ``id  WKT`` (only coordinate extrema are read)
layout      ``pid  min_x  min_y  max_x  max_y  build_count``
assignment  ``pid  oid  replica_flag``
pairs       ``r_id  s_id``
"""
from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .geom import Dataset, Rect
from .masj import Assignment
from .partitioners import Partition, PartitionLayout

FORMATS = ("tsv-mbr", "tsv-wkt")
WKT_TYPES = ("POINT", "LINESTRING", "POLYGON", "MULTIPOLYGON")

_WKT_HEAD = re.compile(r"^\s*([A-Za-z]+)\s*(.*)$", re.S)


class FormatError(ValueError):
    pass


def fmt(x: float) -> str:
    """Shortest round-trip decimal; integral values drop the trailing ``.0``."""
    x = float(x)
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def wkt_extent(text: str) -> Rect:
    m = _WKT_HEAD.match(text)
    if not m or m.group(1).upper() not in WKT_TYPES:
        raise FormatError(f"unsupported geometry: {text[:40]!r}")
    body = m.group(2).strip()
    if not body.startswith("(") or not body.endswith(")"):
        raise FormatError(f"malformed geometry: {text[:40]!r}")
    xs, ys = [], []
    for chunk in re.split(r"[(),]", body):
        parts = chunk.split()
        if not parts:
            continue
        if len(parts) < 2:
            raise FormatError(f"malformed coordinate {chunk.strip()!r}")
        try:
            xs.append(float(parts[0]))
            ys.append(float(parts[1]))
        except ValueError:
            raise FormatError(f"malformed coordinate {chunk.strip()!r}") from None
    if not xs:
        raise FormatError("geometry has no coordinates")
    return Rect(min(xs), min(ys), max(xs), max(ys))


def ingest(path, format: str = "tsv-mbr") -> Dataset:
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    ids, boxes, texts, seen = [], [], [], {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            try:
                oid = int(fields[0])
                if format == "tsv-mbr":
                    if len(fields) != 5:
                        raise ValueError("expected 5 fields")
                    box = Rect(*(float(f) for f in fields[1:]))
                    text = ""
                else:
                    if len(fields) != 2:
                        raise ValueError("expected 2 fields")
                    box = wkt_extent(fields[1])
                    text = fields[1]
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from None
            if oid < 0:
                raise FormatError(f"{path}:{lineno}: negative id {oid}")
            if oid in seen:
                raise FormatError(f"{path}:{lineno}: duplicate id {oid} "
                                  f"(first on line {seen[oid]})")
            seen[oid] = lineno
            ids.append(oid)
            boxes.append(box.as_tuple())
            texts.append(text)
    if not ids:
        raise FormatError(f"{path}: no objects")
    return Dataset(ids, np.array(boxes, np.float64),
                   texts if format == "tsv-wkt" else None)


def write_dataset(data: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for oid, box in zip(data.ids.tolist(), data.boxes.tolist()):
            fh.write(f"{oid}\t" + "\t".join(fmt(v) for v in box) + "\n")


def write_layout(layout: PartitionLayout, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for p in layout.partitions:
            b = p.boundary
            fh.write(f"{p.id}\t{fmt(b.min_x)}\t{fmt(b.min_y)}\t{fmt(b.max_x)}\t"
                     f"{fmt(b.max_y)}\t{p.build_count}\n")


def read_layout(path, algorithm_tag: str = "", payload_target: int = 1) -> PartitionLayout:
    parts = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        f = line.split("\t")
        parts.append(Partition(int(f[0]), Rect(*map(float, f[1:5])), int(f[5])))
    return PartitionLayout(tuple(parts), algorithm_tag, payload_target)


def write_assignment(a: Assignment, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pid, oid, rep in zip(a.partition_ids.tolist(), a.object_ids.tolist(),
                                 a.is_replica.tolist()):
            fh.write(f"{pid}\t{oid}\t{int(rep)}\n")


def read_assignment(path) -> Assignment:
    rows = np.loadtxt(path, dtype=np.int64, delimiter="\t", ndmin=2)
    if rows.size == 0:
        z = np.zeros(0, np.int64)
        return Assignment(z, z, np.zeros(0, bool))
    return Assignment(rows[:, 0], rows[:, 1], rows[:, 2].astype(bool))


def write_pairs(pairs, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r, s in sorted(pairs):
            fh.write(f"{r}\t{s}\n")
