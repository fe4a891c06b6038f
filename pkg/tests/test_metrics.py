import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_dataset
from tilecraft.geom import Rect
from tilecraft.masj import Assignment, masj_assign, replica_fraction
from tilecraft.metrics import (CostModel, boundary_ratio, estimated_join_cost,
                               payload_stddev, quality_report)
from tilecraft.partitioners import Partition, PartitionLayout, partition_fg


def textbook_stddev(xs):
    mean = sum(xs) / len(xs)
    return math.sqrt(sum((x - mean) ** 2 for x in xs) / len(xs))


def test_payload_stddev_examples():
    assert payload_stddev([5, 5, 5, 5]) == 0.0
    assert payload_stddev([2, 4]) == 1.0
    with pytest.raises(ValueError):
        payload_stddev([])


def test_payload_stddev_on_clustered_fg():
    d = random_dataset(np.random.default_rng(5), 5000, mode="clustered")
    layout = partition_fg(d, 50)
    payloads = masj_assign(d, layout).payloads(layout.k).tolist()
    assert payload_stddev(payloads) == pytest.approx(textbook_stddev(payloads), rel=1e-12)


@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=50))
def test_payload_stddev_textbook(xs):
    assert payload_stddev(xs) == pytest.approx(textbook_stddev(xs), rel=1e-9, abs=1e-9)
    assert payload_stddev(xs) >= 0


def test_boundary_ratio_examples():
    assert boundary_ratio(12, 12) == 0.0
    assert boundary_ratio(24, 12) == 1.0
    with pytest.raises(ValueError, match="missing assignments"):
        boundary_ratio(11, 12)


def test_cost_model_examples():
    assert estimated_join_cost(10, 10, CostModel(0, 0, 1)) == 100
    assert estimated_join_cost(10, 10, CostModel(1, 0, 4)) == 100
    beta = 0.7
    c1 = estimated_join_cost(30, 40, CostModel(0.5, beta, 1)) - beta * 70
    c2 = estimated_join_cost(30, 40, CostModel(0.5, beta, 2)) - beta * 70
    assert c2 == pytest.approx(c1 / 2)
    for bad in ((-1, 0, 1), (0, -1, 1), (0, 0, 0)):
        with pytest.raises(ValueError):
            CostModel(*bad)


def layout_of(k):
    parts = tuple(Partition(i, Rect(i, 0, i + 1, 1), 0) for i in range(k))
    return PartitionLayout(parts, "manual", 1)


def test_quality_report_single_partition():
    a = Assignment(np.zeros(4, np.int64), np.arange(4), np.zeros(4, bool))
    rep = quality_report(layout_of(1), a, 4)
    assert (rep.k, rep.payload_stddev, rep.boundary_ratio_lambda) == (1, 0.0, 0.0)


def test_quality_report_two_partitions():
    pid = np.array([0, 0, 0, 1, 1, 1, 1, 1])
    oid = np.array([0, 1, 2, 2, 3, 4, 5, 6])
    rep = quality_report(layout_of(2), Assignment(pid, oid, oid == 2), 7)
    assert rep.payloads == (3, 5)
    assert rep.boundary_ratio_lambda == pytest.approx(1 / 7)
    assert rep.payload_stddev == 1.0
    assert (rep.max_payload, rep.min_payload, rep.mean_payload) == (5, 3, 4.0)


def test_report_matches_assignment_and_is_order_invariant():
    d = random_dataset(np.random.default_rng(2), 3000)
    layout = partition_fg(d, 40)
    a = masj_assign(d, layout)
    rep = quality_report(layout, a, len(d))
    assert sum(rep.payloads) == len(a)
    assert rep.boundary_ratio_lambda == replica_fraction(a, len(d))
    perm = np.random.default_rng(0).permutation(len(a))
    shuffled = Assignment(a.partition_ids[perm], a.object_ids[perm], a.is_replica[perm])
    assert quality_report(layout, shuffled, len(d)) == rep
