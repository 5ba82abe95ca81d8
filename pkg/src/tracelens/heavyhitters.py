"""Streaming heavy hitters over the sampled trace stream, plus the end-to-end
miner.

The first pass feeds fingerprints through a bounded counter table (k counters:
hits increment, misses either claim a free slot or decrement everything). Any
item occurring more than n/k times is guaranteed to survive, so the table is a
small candidate superset. A second pass then counts candidates exactly, either
by regenerating the identical sample from the same seed or by drawing a fresh
one, and only candidates whose exact sample count clears floor(C/2) are
reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .counting import PathCounts, count_traces, total_traces
from .dag import LabeledDag, Trace
from .enumeration import Fingerprinter
from .errors import BudgetExceededError
from .rng import mix_seed
from .sampling import SAMPLERS, SamplingPlan, choose_p, prepare_plan

_FRESH_PASS_SALT = 0x2ECC71


@dataclass
class CounterTable:
    """Bounded frequent-items summary of a stream.

    At most `capacity` entries are held; each stores a counter that
    underestimates the item's true count by at most n/capacity. Items with
    true count above n/capacity are always present when the stream ends.
    """

    capacity: int
    entries: dict = field(default_factory=dict)
    payloads: dict = field(default_factory=dict)
    n: int = 0

    def __post_init__(self) -> None:
        if self.capacity < 1:
            raise ValueError("capacity must be >= 1")

    def update(self, item, payload=None) -> None:
        """Consume one stream item; `payload` is retained on first insertion
        (used to keep the readable trace next to its fingerprint)."""
        self.n += 1
        entries = self.entries
        if item in entries:
            entries[item] += 1
        elif len(entries) < self.capacity:
            entries[item] = 1
            if payload is not None:
                self.payloads[item] = payload
        else:
            dead = []
            for key in entries:
                entries[key] -= 1
                if entries[key] == 0:
                    dead.append(key)
            for key in dead:
                del entries[key]
                self.payloads.pop(key, None)
        assert len(entries) <= self.capacity

    def candidates(self) -> dict:
        """Surviving items mapped to (lower-bound count, payload)."""
        return {
            item: (count, self.payloads.get(item))
            for item, count in self.entries.items()
        }


def mg_update(table: CounterTable, item, payload=None) -> None:
    table.update(item, payload)


def mg_candidates(table: CounterTable) -> dict:
    return table.candidates()


def exact_second_pass(
    candidates: Iterable,
    dag: LabeledDag,
    counts: PathCounts,
    plan: SamplingPlan,
    seed: int,
    *,
    mode: str = "regenerate",
    sampler: str = "exact",
    fingerprinter: Fingerprinter,
    threads: int = 1,
) -> dict:
    """Exact per-candidate counts from a second sampling pass.

    `regenerate` replays the identical stream (same seed), so counts are the
    true counts of the first pass. `fresh` derives a new seed; counts then
    come from an independent sample, roughly doubling the false-negative rate
    (compensate with a slightly larger C).
    """
    if mode not in ("regenerate", "fresh"):
        raise ValueError(f"unknown second-pass mode {mode!r}")
    wanted = set(candidates)
    second_seed = seed if mode == "regenerate" else mix_seed(seed, _FRESH_PASS_SALT)
    hits = {key: 0 for key in wanted}

    def sink(trace: Trace, key) -> None:
        if key in hits:
            hits[key] += 1

    SAMPLERS[sampler](
        dag,
        counts,
        plan,
        second_seed,
        sink,
        fingerprinter=fingerprinter,
        threads=threads,
    )
    return hits


@dataclass(frozen=True)
class CandidateReport:
    trace: Trace
    sample_count: int
    est_frequency: float


@dataclass(frozen=True)
class MineResult:
    """Pipeline output plus the run parameters needed to reproduce it."""

    m: int
    epsilon: float
    oversampling: float
    seed: int
    mode: str
    sampler: str
    vertices: int
    edges: int
    total_traces: int
    p: float
    capacity: int
    n_sampled: int
    candidates: tuple[CandidateReport, ...]

    def to_json_dict(self) -> dict:
        return {
            "params": {
                "m": self.m,
                "epsilon": self.epsilon,
                "C": self.oversampling,
                "seed": self.seed,
                "mode": self.mode,
                "sampler": self.sampler,
            },
            "vertices": self.vertices,
            "edges": self.edges,
            "total_traces": self.total_traces,
            "p": self.p,
            "k": self.capacity,
            "n_sampled": self.n_sampled,
            "candidates": [
                {
                    "trace": "-".join(map(str, c.trace)),
                    "sample_count": c.sample_count,
                    "est_frequency": c.est_frequency,
                }
                for c in self.candidates
            ],
        }


def _mine_with_counts(
    dag: LabeledDag,
    counts: PathCounts,
    total: int,
    epsilon: float,
    oversampling: float,
    seed: int,
    *,
    mode: str,
    sampler: str,
    threads: int,
) -> MineResult:
    p = choose_p(epsilon, oversampling)
    plan = prepare_plan(dag, counts, p)
    # Capacity from the expected stream length p * |S_m|, known up front from
    # the counting phase; the observed length only deviates by O(sqrt(n)).
    capacity = max(1, math.ceil(2.0 * p * total / oversampling))
    fingerprinter = Fingerprinter.from_seed(seed)
    table = CounterTable(capacity)
    SAMPLERS[sampler](
        dag,
        counts,
        plan,
        seed,
        lambda trace, key: table.update(key, trace),
        fingerprinter=fingerprinter,
        threads=threads,
    )
    survivors = table.candidates()
    exact = exact_second_pass(
        survivors.keys(),
        dag,
        counts,
        plan,
        seed,
        mode=mode,
        sampler=sampler,
        fingerprinter=fingerprinter,
        threads=threads,
    )
    threshold = math.floor(oversampling / 2.0)
    rows = [
        CandidateReport(
            trace=survivors[key][1],
            sample_count=exact[key],
            est_frequency=exact[key] / p,
        )
        for key in survivors
        if exact[key] > threshold
    ]
    rows.sort(key=lambda r: (-r.sample_count, r.trace))
    return MineResult(
        m=counts.m,
        epsilon=epsilon,
        oversampling=oversampling,
        seed=seed,
        mode=mode,
        sampler=sampler,
        vertices=dag.n,
        edges=dag.edge_count,
        total_traces=total,
        p=p,
        capacity=capacity,
        n_sampled=table.n,
        candidates=tuple(rows),
    )


def mine_frequent(
    dag: LabeledDag,
    m: int,
    epsilon: float,
    oversampling: float,
    seed: int,
    *,
    mode: str = "regenerate",
    sampler: str = "exact",
    threads: int = 1,
) -> MineResult:
    """Full pipeline: count, plan, sample into the counter table, verify with
    a second pass, report candidates whose exact sample count exceeds
    floor(C/2) together with the frequency estimate count/p."""
    counts = count_traces(dag, m)
    total = total_traces(counts)
    return _mine_with_counts(
        dag,
        counts,
        total,
        epsilon,
        oversampling,
        seed,
        mode=mode,
        sampler=sampler,
        threads=threads,
    )


@dataclass(frozen=True)
class TopKResult:
    k: int
    epsilon_used: float
    attempts: int
    mine: MineResult

    @property
    def candidates(self) -> Sequence[CandidateReport]:
        return self.mine.candidates[: self.k]

    def to_json_dict(self) -> dict:
        data = self.mine.to_json_dict()
        data["params"]["k"] = self.k
        data["params"]["epsilon_used"] = self.epsilon_used
        data["params"]["attempts"] = self.attempts
        data["candidates"] = data["candidates"][: self.k]
        return data


def top_k(
    dag: LabeledDag,
    m: int,
    k: int,
    oversampling: float,
    seed: int,
    *,
    sampler: str = "exact",
    threads: int = 1,
) -> TopKResult:
    """Top-k by threshold search: start the threshold at half the multiset
    size and halve (clamping at C, the floor where p reaches 1) until at
    least k traces are reported; return the k best by estimated frequency,
    ties broken arbitrarily."""
    if k < 1:
        raise ValueError("k must be >= 1")
    counts = count_traces(dag, m)
    total = total_traces(counts)
    epsilon = max(float(oversampling), total / 2.0)
    attempts = 0
    while True:
        result = _mine_with_counts(
            dag,
            counts,
            total,
            epsilon,
            oversampling,
            mix_seed(seed, attempts),
            mode="regenerate",
            sampler=sampler,
            threads=threads,
        )
        attempts += 1
        if len(result.candidates) >= k:
            return TopKResult(
                k=k, epsilon_used=epsilon, attempts=attempts, mine=result
            )
        if epsilon <= oversampling:
            raise BudgetExceededError(
                f"threshold search hit the floor epsilon={epsilon} with only "
                f"{len(result.candidates)} of {k} requested traces"
            )
        epsilon = max(float(oversampling), epsilon / 2.0)
