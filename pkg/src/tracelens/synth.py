"""Synthetic DAG families and the enumeration-vs-sampling benchmark harness.

The planted family embeds a label sequence with an exactly controlled
multiplicity (a layered gadget whose layer widths multiply to the target)
inside a sparse random background drawn over a disjoint label alphabet, so
ground truth survives by construction and is re-verified by enumeration.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from .counting import count_traces, total_traces
from .dag import LabeledDag, Trace, Vertex
from .enumeration import all_traces, exact_frequencies
from .errors import InfeasibleSpecError, TooManyTracesError
from .heavyhitters import MineResult, mine_frequent
from .rng import mix_seed


def skip_graph(
    n: int,
    skips: Iterable[int],
    *,
    alphabet: int | None = None,
    tag: str = "s",
) -> LabeledDag:
    """Line of n vertices with an edge i -> i+s for every skip s.

    Labels are the vertex indices by default; with `alphabet` they cycle
    through 0..alphabet-1, which makes traces repeat and gives the family its
    many-paths-few-distinct-traces character.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    skips = sorted(set(skips))
    if any(s < 1 for s in skips):
        raise ValueError("skips must be positive")
    vertices = [
        Vertex(
            label=(i % alphabet) if alphabet else i,
            t_first=float(i),
            t_last=float(i),
            tag=tag,
        )
        for i in range(n)
    ]
    edges = [(i, i + s) for i in range(n) for s in skips if i + s < n]
    return LabeledDag(vertices, edges)


def random_dag(
    n: int,
    edge_prob: float,
    seed: int,
    *,
    alphabet: int = 4,
    tag: str = "r",
) -> LabeledDag:
    """Random forward graph: each pair (i, j), i < j, is an edge with the
    given probability; labels drawn uniformly from a small alphabet."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(mix_seed(seed, 0xDA6))
    vertices = [
        Vertex(
            label=rng.randrange(alphabet),
            t_first=float(i),
            t_last=float(i),
            tag=tag,
        )
        for i in range(n)
    ]
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < edge_prob
    ]
    return LabeledDag(vertices, edges)


@dataclass(frozen=True)
class PlantedSpec:
    """Request for a DAG containing one trace at a known multiplicity."""

    trace: Trace
    multiplicity: int
    background_vertices: int
    alphabet: int
    seed: int
    edge_window: int = 4
    edge_prob: float = 0.35
    zipf_exponent: float = 1.2


def _balanced_factors(target: int) -> tuple[int, int]:
    for a in range(math.isqrt(target), 0, -1):
        if target % a == 0:
            return a, target // a
    return 1, target


def _zipf_labels(rng: random.Random, alphabet: int, count: int, s: float) -> list[int]:
    weights = [1.0 / (r + 1) ** s for r in range(alphabet)]
    total = sum(weights)
    cdf = []
    acc = 0.0
    for w in weights:
        acc += w / total
        cdf.append(acc)
    out = []
    for _ in range(count):
        u = rng.random()
        lo = 0
        while cdf[lo] < u:
            lo += 1
        out.append(lo)
    return out


def planted_dag(spec: PlantedSpec) -> tuple[LabeledDag, dict[Trace, int]]:
    """Build the planted fixture and return it with its ground truth.

    The gadget gives the planted trace multiplicity exactly equal to the
    target; the background uses labels strictly above the plant's, so it can
    never contribute occurrences. The claimed multiplicity is re-verified by
    full enumeration and an InfeasibleSpecError raised on any mismatch.
    """
    if spec.multiplicity < 1 or not spec.trace:
        raise InfeasibleSpecError("plant needs a non-empty trace and multiplicity >= 1")
    length = len(spec.trace)
    widths = [1] * length
    if length == 1:
        widths[0] = spec.multiplicity
    else:
        widths[0], widths[1] = _balanced_factors(spec.multiplicity)
    vertices: list[Vertex] = []
    edges: list[tuple[int, int]] = []
    layers: list[list[int]] = []
    for depth, (lab, width) in enumerate(zip(spec.trace, widths)):
        layer = []
        for _ in range(width):
            layer.append(len(vertices))
            vertices.append(
                Vertex(label=lab, t_first=float(depth), t_last=float(depth), tag="plant")
            )
        layers.append(layer)
    for a, b in zip(layers, layers[1:]):
        edges.extend((u, w) for u in a for w in b)

    background_base = max(spec.trace) + 1
    rng = random.Random(mix_seed(spec.seed, 0x9A3E))
    labels = _zipf_labels(
        rng, spec.alphabet, spec.background_vertices, spec.zipf_exponent
    )
    offset = len(vertices)
    for i, lab in enumerate(labels):
        vertices.append(
            Vertex(
                label=background_base + lab,
                t_first=float(i),
                t_last=float(i),
                tag="bg",
            )
        )
    for i in range(spec.background_vertices):
        for j in range(i + 1, min(spec.background_vertices, i + 1 + spec.edge_window)):
            if rng.random() < spec.edge_prob:
                edges.append((offset + i, offset + j))

    dag = LabeledDag(vertices, edges)
    observed = exact_frequencies(dag, length, limit=50_000_000)[tuple(spec.trace)]
    if observed != spec.multiplicity:
        raise InfeasibleSpecError(
            f"planted trace has multiplicity {observed}, wanted {spec.multiplicity}"
        )
    return dag, {tuple(spec.trace): spec.multiplicity}


def disjoint_union(parts: Sequence[LabeledDag]) -> LabeledDag:
    """Combine DAGs over disjoint vertex sets (labels are the caller's
    responsibility; keep alphabets apart when ground truth must not mix)."""
    vertices: list[Vertex] = []
    edges: list[tuple[int, int]] = []
    for part in parts:
        offset = len(vertices)
        vertices.extend(part.vertices)
        edges.extend((u + offset, v + offset) for u, v in part.iter_edges())
    return LabeledDag(vertices, edges)


@dataclass(frozen=True)
class BenchReport:
    """Cost comparison between full enumeration and the mining pipeline."""

    vertices: int
    edges: int
    m: int
    epsilon: float
    oversampling: float
    p: float
    total_traces: int
    enumerated_items: int
    enumeration_seconds: float
    sampled_items: int
    sampling_seconds: float
    items_ratio: float
    expected_samples: float
    candidates_reported: int

    def to_json_dict(self) -> dict:
        return {
            "vertices": self.vertices,
            "edges": self.edges,
            "m": self.m,
            "epsilon": self.epsilon,
            "C": self.oversampling,
            "p": self.p,
            "total_traces": self.total_traces,
            "enumeration": {
                "items": self.enumerated_items,
                "seconds": self.enumeration_seconds,
            },
            "sampling": {
                "items": self.sampled_items,
                "seconds": self.sampling_seconds,
            },
            "items_ratio": self.items_ratio,
            "expected_samples": self.expected_samples,
            "candidates_reported": self.candidates_reported,
        }


def bench_compare(
    dag: LabeledDag,
    m: int,
    epsilon: float,
    oversampling: float,
    seed: int,
    *,
    sampler: str = "exact",
    threads: int = 1,
    limit: int = 5_000_000,
) -> tuple[BenchReport, MineResult]:
    """Measure emitted items and wall time for enumeration vs mining."""
    counts = count_traces(dag, m)
    total = total_traces(counts)
    if total > limit:
        raise TooManyTracesError(total, limit)

    sink_count = 0

    def sink(_trace):
        nonlocal sink_count
        sink_count += 1

    t0 = time.perf_counter()
    all_traces(dag, m, sink)
    enum_seconds = time.perf_counter() - t0

    t0 = time.perf_counter()
    result = mine_frequent(
        dag, m, epsilon, oversampling, seed, sampler=sampler, threads=threads
    )
    sample_seconds = time.perf_counter() - t0
    report = BenchReport(
        vertices=dag.n,
        edges=dag.edge_count,
        m=m,
        epsilon=epsilon,
        oversampling=oversampling,
        p=result.p,
        total_traces=total,
        enumerated_items=sink_count,
        enumeration_seconds=enum_seconds,
        sampled_items=result.n_sampled,
        sampling_seconds=sample_seconds,
        items_ratio=sink_count / result.n_sampled if result.n_sampled else math.inf,
        expected_samples=result.p * total,
        candidates_reported=len(result.candidates),
    )
    return report, result
