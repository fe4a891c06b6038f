import numpy as np
import pytest

from tilecraft.geom import Dataset

ACCEPTANCE_LINES = {}


def pytest_addoption(parser):
    parser.addoption("--run-benchmarks", action="store_true", default=False,
                     help="run timing benchmarks (non-gating)")


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(num, title): numbered acceptance criterion")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-benchmarks"):
        return
    skip = pytest.mark.skip(reason="benchmark; pass --run-benchmarks to run")
    for item in items:
        if "benchmark" in item.keywords:
            item.add_marker(skip)
            mark = item.get_closest_marker("acceptance")
            if mark:
                num, title = mark.args
                ACCEPTANCE_LINES[num] = (f"criterion {num:2d} SKIP  {title}: "
                                         "benchmark, run with --run-benchmarks")


def record(num: int, title: str, ok: bool, detail: str) -> None:
    """Store the summary line for one criterion, then fail the test if needed."""
    ACCEPTANCE_LINES[num] = f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    assert ok, detail


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


def points(coords, ids=None):
    coords = np.asarray(coords, dtype=float).reshape(-1, 2)
    ids = np.arange(len(coords)) if ids is None else ids
    return Dataset(ids, np.column_stack([coords, coords]))


def boxes(rows, ids=None, universe=None):
    rows = np.asarray(rows, dtype=float).reshape(-1, 4)
    ids = np.arange(len(rows)) if ids is None else ids
    return Dataset(ids, rows, universe=universe)


def random_dataset(rng, n, *, mode=None, dup_fraction=0.0):
    """Mixed-regime random dataset used by property tests."""
    mode = mode or rng.choice(["uniform", "clustered", "grid"])
    if mode == "uniform":
        c = rng.random((n, 2))
    elif mode == "clustered":
        centers = rng.random((3, 2))
        c = np.clip(centers[rng.integers(0, 3, n)] + 0.02 * rng.standard_normal((n, 2)), 0, 1)
    else:
        c = rng.integers(0, 8, (n, 2)) / 8.0
    if dup_fraction:
        k = int(n * dup_fraction)
        c[:k] = c[0]
    half = rng.random((n, 2)) * rng.choice([0.0, 0.001, 0.02])
    return Dataset(np.arange(n) * 3 + 1, np.column_stack([c - half, c + half]))
