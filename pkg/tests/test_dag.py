from __future__ import annotations

import pytest

import tracelens as tl
from tracelens.dag import dumps, loads


def _dag(labels, edges, times=None):
    times = times or list(range(len(labels)))
    vertices = [
        tl.Vertex(label=lab, t_first=float(t), t_last=float(t), tag=f"t{i}")
        for i, (lab, t) in enumerate(zip(labels, times))
    ]
    return tl.LabeledDag(vertices, edges)


def test_single_vertex_is_valid():
    report = tl.validate_dag(_dag([5], []))
    assert report.ok
    assert report.cycle is None
    assert not report.duplicate_edges


def test_two_cycle_detected():
    report = tl.validate_dag(_dag([1, 2], [(0, 1), (1, 0)]))
    assert not report.ok
    assert report.cycle is not None
    # the witness is a closed walk
    assert report.cycle[0] == report.cycle[-1]
    assert set(report.cycle) <= {0, 1}


def test_self_loop_is_a_cycle():
    report = tl.validate_dag(_dag([1], [(0, 0)]))
    assert not report.ok
    assert report.cycle == [0, 0]


def test_duplicate_edge_reported():
    report = tl.validate_dag(_dag([1, 2], [(0, 1), (0, 1)]))
    assert not report.ok
    assert (0, 1) in report.duplicate_edges


def test_skip_graph_16_has_42_edges_and_validates():
    g = tl.skip_graph(16, {1, 2, 3})
    assert g.edge_count == 15 + 14 + 13
    assert tl.validate_dag(g).ok


def test_out_edges_sorted_by_target_start_time():
    # edge insertion order scrambled; canonical order is by target t_first
    vertices = [
        tl.Vertex(label=i, t_first=float(t), t_last=float(t), tag="x")
        for i, t in enumerate([0, 30, 10, 20])
    ]
    g = tl.LabeledDag(vertices, [(0, 1), (0, 3), (0, 2)])
    assert g.out_edges[0] == (2, 3, 1)


def test_roundtrip_exact(browsing_dag):
    text = dumps(browsing_dag)
    again = loads(text)
    assert again == browsing_dag
    assert dumps(again) == text


def test_roundtrip_fractional_times():
    g = _dag([3, 4], [(0, 1)], times=[0.5, 1.25])
    assert loads(dumps(g)) == g


def test_loads_rejects_bad_ids():
    with pytest.raises(tl.DagFormatError):
        loads("v 0 1 0 0 a\ne 0 7\n")
    with pytest.raises(tl.DagFormatError):
        loads("v 1 1 0 0 a\n")  # ids must start at 0


def test_loads_rejects_garbage():
    with pytest.raises(tl.DagFormatError):
        loads("q 1 2 3\n")


def test_vertex_rejects_inverted_range():
    with pytest.raises(ValueError):
        tl.Vertex(label=0, t_first=2.0, t_last=1.0, tag="a")


def test_topological_order_children_after_parents():
    g = tl.skip_graph(6, {1, 2})
    order = tl.topological_order(g)
    pos = {v: i for i, v in enumerate(order)}
    for u, v in g.iter_edges():
        assert pos[u] < pos[v]


def test_topological_order_raises_on_cycle():
    with pytest.raises(tl.CycleError):
        tl.topological_order(_dag([1, 2, 3], [(0, 1), (1, 2), (2, 0)]))


def test_generated_families_always_validate():
    for seed in range(25):
        g = tl.random_dag(10, 0.3, seed)
        assert tl.validate_dag(g).ok
    for n, skips in [(1, set()), (5, {1}), (16, {1, 2, 3}), (9, {2, 4})]:
        assert tl.validate_dag(tl.skip_graph(n, skips)).ok


def test_stable_out_edge_order_across_reloads(browsing_dag):
    text = dumps(browsing_dag)
    assert loads(text).out_edges == loads(text).out_edges == browsing_dag.out_edges
