from __future__ import annotations

import math
import random
from collections import Counter

import pytest

import tracelens as tl
from tracelens.heavyhitters import CounterTable, exact_second_pass
from tracelens.sampling import prepare_plan


def _zipf_stream(rng, n, alphabet=200, s=1.2):
    weights = [1 / (r + 1) ** s for r in range(alphabet)]
    total = sum(weights)
    cdf = []
    acc = 0.0
    for w in weights:
        acc += w / total
        cdf.append(acc)
    out = []
    for _ in range(n):
        u = rng.random()
        lo = 0
        while cdf[lo] < u:
            lo += 1
        out.append(lo)
    return out


# ------------------------------------------------------------- counter table


def test_update_examples():
    table = CounterTable(2)
    for item in ["a", "a", "b"]:
        table.update(item)
    assert table.entries == {"a": 2, "b": 1}
    assert table.n == 3


def test_forced_eviction():
    table = CounterTable(1)
    table.update("a")
    table.update("b")
    assert table.entries == {}
    assert table.n == 2


def test_stream_of_one_item():
    table = CounterTable(3)
    for _ in range(50):
        table.update("x")
    assert table.candidates()["x"][0] == 50


def test_empty_stream():
    assert CounterTable(4).candidates() == {}


def test_zipf_superset_guarantee():
    rng = random.Random(13)
    stream = _zipf_stream(rng, 100_000)
    k = 3
    table = CounterTable(k)
    truth = Counter()
    for item in stream:
        table.update(item)
        truth[item] += 1
    survivors = set(table.candidates())
    for item, count in truth.items():
        if count > len(stream) / k:
            assert item in survivors, item
    # counters undershoot by at most n/k
    for item, (low, _) in table.candidates().items():
        assert truth[item] >= low >= truth[item] - len(stream) / k


def test_adversarial_superset():
    k = 10
    n = 1000
    heavy = n // k + 1
    stream = ["hot"] * heavy + [f"cold{i}" for i in range(n - heavy)]
    rng = random.Random(3)
    rng.shuffle(stream)
    table = CounterTable(k)
    for item in stream:
        table.update(item)
    assert "hot" in table.candidates()


def test_capacity_never_exceeded_property():
    rng = random.Random(29)
    for trial in range(30):
        k = rng.randrange(1, 8)
        table = CounterTable(k)
        truth = Counter()
        for _ in range(rng.randrange(10, 2000)):
            item = rng.randrange(40)
            table.update(item)
            truth[item] += 1
            assert len(table.entries) <= k
        for item, count in truth.items():
            if count > table.n / k:
                assert item in table.entries


# ---------------------------------------------------------- exact second pass


def _planted_pipeline(multiplicity=100, C=10, seed=5):
    spec = tl.PlantedSpec(
        trace=(2, 4), multiplicity=multiplicity, background_vertices=50,
        alphabet=4, seed=7,
    )
    dag, _ = tl.planted_dag(spec)
    counts = tl.count_traces(dag, 2)
    p = tl.choose_p(multiplicity, C)
    plan = prepare_plan(dag, counts, p)
    return dag, counts, plan, p


def test_regenerate_counts_equal_buffered_stream():
    dag, counts, plan, _ = _planted_pipeline()
    fp = tl.Fingerprinter.from_seed(42)
    buffered = Counter()
    tl.sample_traces_exact(
        dag, counts, plan, 42, lambda t, key: buffered.update([key]),
        fingerprinter=fp,
    )
    wanted = list(buffered)[:5]
    got = exact_second_pass(
        wanted, dag, counts, plan, 42, mode="regenerate", fingerprinter=fp
    )
    for key in wanted:
        assert got[key] == buffered[key]


def test_fresh_mode_is_independent_but_unbiased():
    C = 20
    dag, counts, plan, p = _planted_pipeline(multiplicity=200, C=C)
    fp = tl.Fingerprinter.from_seed(1)
    target_key = fp.key_of((2, 4))
    trials = 120
    fresh_counts = []
    for seed in range(trials):
        got = exact_second_pass(
            [target_key], dag, counts, plan, seed, mode="fresh", fingerprinter=fp
        )
        fresh_counts.append(got[target_key])
    mean = sum(fresh_counts) / trials
    sd_mean = math.sqrt(C / trials)  # Poisson-ish variance
    assert abs(mean - C) <= 3 * sd_mean


def test_second_pass_empty_candidates():
    dag, counts, plan, _ = _planted_pipeline()
    fp = tl.Fingerprinter.from_seed(0)
    assert exact_second_pass(
        [], dag, counts, plan, 3, mode="regenerate", fingerprinter=fp
    ) == {}


def test_second_pass_rejects_unknown_mode():
    dag, counts, plan, _ = _planted_pipeline()
    fp = tl.Fingerprinter.from_seed(0)
    with pytest.raises(ValueError):
        exact_second_pass([], dag, counts, plan, 3, mode="nope", fingerprinter=fp)


# -------------------------------------------------------------- mine_frequent


def test_mine_degenerate_single_vertex(single7):
    result = tl.mine_frequent(single7, 1, 1, 1, seed=0)
    assert [c.trace for c in result.candidates] == [(7,)]
    assert result.p == 1.0


def test_mine_reports_planted_trace():
    spec = tl.PlantedSpec(
        trace=(3, 1, 4), multiplicity=144, background_vertices=120,
        alphabet=5, seed=11,
    )
    dag, _ = tl.planted_dag(spec)
    result = tl.mine_frequent(dag, 3, 144, 10, seed=4)
    assert (3, 1, 4) in [c.trace for c in result.candidates]
    row = next(c for c in result.candidates if c.trace == (3, 1, 4))
    assert row.est_frequency == row.sample_count / result.p
    assert row.sample_count > 5


def test_mine_never_reports_below_threshold():
    # no unverified positives in regenerate mode
    for seed in range(20):
        g = tl.random_dag(12, 0.4, seed)
        result = tl.mine_frequent(g, 3, 8, 4, seed=seed)
        for cand in result.candidates:
            assert cand.sample_count > 2  # floor(4/2)


def test_mine_candidate_counts_are_exact_sample_counts():
    g = tl.random_dag(12, 0.45, 3)
    result = tl.mine_frequent(g, 4, 20, 5, seed=9)
    counts = tl.count_traces(g, 4)
    plan = prepare_plan(g, counts, result.p)
    stream = Counter(
        t for t in tl.sample_to_list(g, counts, plan, seed=9, sampler="exact")
    )
    for cand in result.candidates:
        assert stream[cand.trace] == cand.sample_count


def test_capacity_independent_of_distinct_traces():
    # same p * |S_m| / C gives the same table size even when the number of
    # distinct traces differs by an order of magnitude
    g_many = tl.skip_graph(24, {1, 2, 3})  # all labels distinct
    g_few = tl.skip_graph(24, {1, 2, 3}, alphabet=2)
    m = 6
    total = tl.total_traces(tl.count_traces(g_many, m))
    assert total == tl.total_traces(tl.count_traces(g_few, m))
    distinct_many = len(tl.exact_frequencies(g_many, m))
    distinct_few = len(tl.exact_frequencies(g_few, m))
    assert distinct_many > 10 * distinct_few
    res_many = tl.mine_frequent(g_many, m, total / 10, 10, seed=1)
    res_few = tl.mine_frequent(g_few, m, total / 10, 10, seed=1)
    assert res_many.capacity == res_few.capacity
    assert res_many.capacity == math.ceil(2 * res_many.p * total / 10)


def test_mine_threshold_too_small():
    g = tl.skip_graph(4, {1})
    with pytest.raises(tl.ThresholdTooSmallError):
        tl.mine_frequent(g, 2, 2, 10, seed=0)


# --------------------------------------------------------------------- top-k


def test_top_k_finds_planted():
    spec = tl.PlantedSpec(
        trace=(6, 2), multiplicity=400, background_vertices=80, alphabet=4, seed=3
    )
    dag, _ = tl.planted_dag(spec)
    result = tl.top_k(dag, 2, 1, 10, seed=21)
    assert result.candidates[0].trace == (6, 2)


def test_top_k_exhaustive_boundary():
    g = tl.skip_graph(4, {1})  # distinct labels, every trace has count 1
    freqs = tl.exact_frequencies(g, 3)
    k = len(freqs)
    result = tl.top_k(g, 3, k, 1, seed=2)
    assert sorted(c.trace for c in result.candidates) == sorted(freqs)


def test_top_k_matches_oracle_ranking():
    plants = [((5, 9), 240), ((6, 8), 120), ((4, 7), 60)]
    parts = []
    for trace, mult in plants:
        parts.append(
            tl.planted_dag(
                tl.PlantedSpec(
                    trace=trace, multiplicity=mult, background_vertices=0,
                    alphabet=1, seed=1,
                )
            )[0]
        )
    dag = tl.disjoint_union(parts)
    freqs = tl.exact_frequencies(dag, 2)
    oracle_top = sorted(freqs.items(), key=lambda kv: -kv[1])[:3]
    result = tl.top_k(dag, 2, 3, 10, seed=6)
    got = [(c.trace, None) for c in result.candidates]
    assert [t for t, _ in got] == [t for t, _ in oracle_top]


def test_top_k_budget_exceeded():
    g = tl.skip_graph(2, {1})  # 3 traces, all count 1
    with pytest.raises(tl.BudgetExceededError):
        tl.top_k(g, 2, 3, 2, seed=0)
