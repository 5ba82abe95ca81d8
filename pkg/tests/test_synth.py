from __future__ import annotations

import math

import pytest

import tracelens as tl


def test_skip_graph_chain():
    g = tl.skip_graph(3, {1})
    assert g.edge_count == 2
    assert tl.validate_dag(g).ok


def test_skip_graph_edge_count():
    assert tl.skip_graph(16, {1, 2, 3}).edge_count == 42


def test_skip_graph_no_skips_isolated():
    g = tl.skip_graph(7, set())
    assert g.edge_count == 0
    for m in (1, 3):
        assert tl.total_traces(tl.count_traces(g, m)) == 7


def test_skip_graph_alphabet_cycles_labels():
    g = tl.skip_graph(6, {1}, alphabet=2)
    assert g.labels() == (0, 1, 0, 1, 0, 1)


def test_random_dag_seed_deterministic():
    a = tl.random_dag(15, 0.3, 42)
    b = tl.random_dag(15, 0.3, 42)
    assert a == b
    assert a != tl.random_dag(15, 0.3, 43)


def test_planted_trivial_single_label():
    spec = tl.PlantedSpec(
        trace=(9,), multiplicity=1, background_vertices=0, alphabet=1, seed=0
    )
    dag, truth = tl.planted_dag(spec)
    assert truth == {(9,): 1}
    assert dag.n == 1


def test_planted_multiplicity_exact():
    spec = tl.PlantedSpec(
        trace=(5, 9, 2), multiplicity=100, background_vertices=200, alphabet=6, seed=8
    )
    dag, truth = tl.planted_dag(spec)
    freqs = tl.exact_frequencies(dag, 3)
    assert freqs[(5, 9, 2)] == 100
    assert abs(freqs[(5, 9, 2)] - truth[(5, 9, 2)]) <= 10  # within 10% of target
    assert tl.validate_dag(dag).ok


def test_two_disjoint_plants_confirmed_independently():
    d1, t1 = tl.planted_dag(
        tl.PlantedSpec(trace=(1, 2), multiplicity=50, background_vertices=0,
                       alphabet=1, seed=1)
    )
    d2, t2 = tl.planted_dag(
        tl.PlantedSpec(trace=(8, 9), multiplicity=30, background_vertices=0,
                       alphabet=1, seed=1)
    )
    merged = tl.disjoint_union([d1, d2])
    freqs = tl.exact_frequencies(merged, 2)
    assert freqs[(1, 2)] == 50
    assert freqs[(8, 9)] == 30


def test_planted_generation_deterministic():
    spec = tl.PlantedSpec(
        trace=(3, 4), multiplicity=60, background_vertices=100, alphabet=5, seed=77
    )
    assert tl.planted_dag(spec)[0] == tl.planted_dag(spec)[0]


def test_planted_infeasible():
    with pytest.raises(tl.InfeasibleSpecError):
        tl.planted_dag(
            tl.PlantedSpec(trace=(), multiplicity=5, background_vertices=0,
                           alphabet=1, seed=0)
        )


# -------------------------------------------------------------------- bench


def test_bench_ratio_one_at_p_one():
    g = tl.skip_graph(8, {1, 2})
    total = tl.total_traces(tl.count_traces(g, 4))
    report, _ = tl.bench_compare(g, 4, float(total), float(total), seed=3)
    assert report.p == 1.0
    assert report.sampled_items == report.enumerated_items == total
    assert report.items_ratio == 1.0


def test_bench_sample_count_within_3_sigma():
    g = tl.skip_graph(24, {1, 2, 3}, alphabet=2)
    m, C = 8, 10
    freqs = tl.exact_frequencies(g, m)
    epsilon = sorted(freqs.values(), reverse=True)[9]  # 10th most frequent
    report, _ = tl.bench_compare(g, m, float(epsilon), C, seed=17)
    p = C / epsilon
    sigma = math.sqrt(report.total_traces * p * (1 - p))
    assert abs(report.sampled_items - p * report.total_traces) <= 3 * sigma
    assert report.items_ratio >= 10


def test_bench_trend_sample_count_tracks_threshold_not_size():
    # growing the line grows the trace multiset far faster than the edge set,
    # while the expected sample count stays pinned to C * total / epsilon
    C = 10
    previous_total = 0
    for n in (16, 20, 24):
        g = tl.skip_graph(n, {1, 2, 3}, alphabet=2)
        counts = tl.count_traces(g, 8)
        total = tl.total_traces(counts)
        assert total > previous_total
        assert total > 20 * g.edge_count
        epsilon = total / 50
        report, _ = tl.bench_compare(g, 8, epsilon, C, seed=n)
        expected = C / epsilon * total  # = 50 C regardless of n
        assert abs(report.sampled_items - expected) <= 3 * math.sqrt(expected)
        previous_total = total


def test_bench_guards_enumeration():
    g = tl.skip_graph(40, {1, 2, 3}, alphabet=2)
    with pytest.raises(tl.TooManyTracesError):
        tl.bench_compare(g, 12, 100.0, 10, seed=0, limit=10_000)
