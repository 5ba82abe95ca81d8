"""Independent per-trace sampling without enumeration.

Every trace in the length-at-most-m multiset should survive into the sample
independently with probability p. Enumerating and coin-flipping would cost
time proportional to the multiset size, so instead the sampler walks the DAG
top-down: a subtree holding c traces is entered only when at least one of its
c coins came up, an event of probability 1 - (1-p)^c that can be decided in
O(1) using the counting table.

Two tree-descent rules are provided:

* `sample_traces_exact` conditions sequentially. At a node whose subtree is
  known to hold at least one sampled trace, children are examined in order
  while tracking how many traces are still undecided; the first committed
  child is chosen with the correctly renormalized probability, every child
  after a commitment with its unconditional probability, and the node's own
  length-terminating trace is kept with probability p (or forced when nothing
  else committed). This reproduces independent Bernoulli(p) marginals exactly.
* `sample_traces_paper` applies the simpler published acceptance test, which
  reuses one fixed per-child ratio regardless of sibling outcomes. Its output
  distribution deviates from independent sampling; it is retained so the two
  variants can be compared side by side.

All (1-p)^c terms live in log space: c can be in the hundreds of millions, so
direct powering would underflow. Child selection binary-searches precomputed
prefix products of skip probabilities, and each top-level vertex draws from
its own seed-derived generator so results are reproducible under any worker
count.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from .counting import PathCounts
from .dag import LabeledDag, Trace
from .enumeration import Fingerprinter
from .errors import ThresholdTooSmallError
from .rng import mix_seed

_NEG_INF = float("-inf")
_LN_HALF = math.log(0.5)


def choose_p(epsilon: float, oversampling: float, *, clamp: bool = False) -> float:
    """Sampling probability for an absolute occurrence threshold.

    p = C/epsilon, so a trace occurring epsilon' times is expected to appear
    C*epsilon'/epsilon times in the sample. Requires epsilon >= C; pass
    clamp=True to degrade to p=1 (full enumeration) instead of raising.
    """
    if oversampling < 1:
        raise ValueError(f"oversampling parameter must be >= 1, got {oversampling}")
    if epsilon < oversampling:
        if clamp:
            return 1.0
        raise ThresholdTooSmallError(epsilon, oversampling)
    return oversampling / epsilon


def _log1mexp(x: float) -> float:
    """log(1 - exp(x)) for x <= 0, stable at both ends."""
    if x == 0.0:
        return _NEG_INF
    if x == _NEG_INF:
        return 0.0
    if x < _LN_HALF:
        return math.log1p(-math.exp(x))
    return math.log(-math.expm1(x))


@dataclass(frozen=True)
class PlanEntry:
    """Per (vertex, depth) precomputation for child selection.

    log_q_uncond[j] is the log probability that none of the first j children
    receives a visit under unconditional per-child entry probabilities
    1-(1-p)^{c_j}. log_q_first[j] is the same prefix product under the
    renormalized probabilities used while no trace has committed yet.
    skip_ratio[j] is the raw acceptance ratio of the simpler published test
    (linear space; may exceed 1, in which case that child is never entered).
    """

    children: tuple[int, ...]
    log_q_uncond: tuple[float, ...]
    log_q_first: tuple[float, ...]
    skip_ratio: tuple[float, ...]


@dataclass(frozen=True)
class SamplingPlan:
    """Immutable per-(vertex, depth) tables driving both samplers."""

    p: float
    log1mp: float
    m: int
    entries: tuple[tuple[PlanEntry | None, ...], ...]  # [vertex][depth]
    log_no_sample: tuple[tuple[float, ...], ...]  # [vertex][depth]


def _log_pow_1mp(log1mp: float, c: int) -> float:
    # c * log(1-p) with the 0 * -inf corner pinned to log(1) = 0.
    if c == 0:
        return 0.0
    return c * log1mp


def prepare_plan(dag: LabeledDag, counts: PathCounts, p: float) -> SamplingPlan:
    """Precompute, for every vertex and depth, the log-space prefix products
    over children plus the vertex's no-sample mass (1-p)^{c[v][i]}.

    Time and space are O(|E| m). The plan is a pure function of
    (dag, counts, p) and is safe to share between threads.
    """
    if not (0.0 < p <= 1.0):
        raise ValueError(f"p must be in (0, 1], got {p}")
    if counts.m < 1:
        raise ValueError("counts table is empty")
    m = counts.m
    log1mp = math.log1p(-p) if p < 1.0 else _NEG_INF
    entries: list[tuple[PlanEntry | None, ...]] = []
    masses: list[tuple[float, ...]] = []
    for v in range(dag.n):
        row_counts = counts.per_vertex[v]
        masses.append(
            tuple(_log_pow_1mp(log1mp, row_counts[i]) for i in range(m + 1))
        )
        children = dag.out_edges[v]
        row: list[PlanEntry | None] = [None, None]  # depths 0 and 1: no descent
        for i in range(2, m + 1):
            c_total = row_counts[i]
            log_denom = _log1mexp(_log_pow_1mp(log1mp, c_total))
            lq_u = [0.0]
            lq_nc = [0.0]
            ratios = []
            prefix = 0
            for w in children:
                c_child = counts.per_vertex[w][i - 1]
                prefix += c_child
                lq_u.append(_log_pow_1mp(log1mp, prefix))
                remaining = c_total - prefix  # still-undecided traces, incl. terminal
                lq_nc.append(
                    _log_pow_1mp(log1mp, prefix)
                    + _log1mexp(_log_pow_1mp(log1mp, remaining))
                    - log_denom
                )
                ratios.append(math.exp(_log_pow_1mp(log1mp, c_child) - log_denom))
            row.append(
                PlanEntry(
                    children=children,
                    log_q_uncond=tuple(lq_u),
                    log_q_first=tuple(lq_nc),
                    skip_ratio=tuple(ratios),
                )
            )
        entries.append(tuple(row))
    return SamplingPlan(
        p=p,
        log1mp=log1mp,
        m=m,
        entries=tuple(entries),
        log_no_sample=tuple(masses),
    )


def _log_unit(rng: random.Random) -> float:
    # log of a uniform draw from (0, 1]; never log(0).
    return math.log(1.0 - rng.random())


def _first_below(log_q: Sequence[float], log_r: float, start: int) -> int | None:
    """Smallest position in (start, d] whose log_q is strictly below log_r.

    log_q is non-increasing, so the predicate is monotone and a plain binary
    search applies.
    """
    lo, hi = start + 1, len(log_q)
    while lo < hi:
        mid = (lo + hi) // 2
        if log_q[mid] < log_r:
            hi = mid
        else:
            lo = mid + 1
    return lo if lo < len(log_q) else None


def select_children(
    log_q: Sequence[float], rng: random.Random, start: int = 0
) -> list[int]:
    """Indices of children receiving a visit, distributed exactly as
    independent per-child coin flips with the probabilities encoded by the
    prefix products q_j = prod_{j' <= j} (1 - p_{j'}).

    One uniform draw finds the first visited child by binary search over the
    q sequence; the draw is then rescaled into [0, q_j] to find the next, and
    so on. A q of exactly zero only occurs when every remaining child is
    visited with probability 1, so the tail is emitted wholesale.
    """
    picks: list[int] = []
    d = len(log_q) - 1
    pos = start
    while pos < d:
        if log_q[pos] == _NEG_INF:
            picks.extend(range(pos, d))
            break
        log_r = _log_unit(rng) + log_q[pos]
        nxt = _first_below(log_q, log_r, pos)
        if nxt is None:
            break
        picks.append(nxt - 1)
        if log_q[nxt] == _NEG_INF:
            picks.extend(range(nxt, d))
            break
        pos = nxt
    return picks


def _emitters(
    sink: Callable, fingerprinter: Fingerprinter | None
) -> tuple[Callable, bool]:
    if fingerprinter is None:
        return (lambda trace, key: sink(trace)), False
    return sink, True


def _sample_vertex_exact(
    dag: LabeledDag,
    plan: SamplingPlan,
    v: int,
    seed: int,
    fingerprinter: Fingerprinter | None,
) -> list:
    """Sample the subtree rooted at one top-level vertex; returns emissions."""
    rng = random.Random(mix_seed(seed, v))
    if _log_unit(rng) <= plan.log_no_sample[v][plan.m]:
        return []
    out: list = []
    labels = dag.labels()
    fp = fingerprinter
    p = plan.p

    def descend(u: int, i: int, prefix: list[int], key: int) -> None:
        # Invariant: at least one trace below (u, i) is in the sample.
        prefix.append(labels[u])
        if fp is not None:
            key = fp.extend(key, labels[u])
        selected: list[int] = []
        if i >= 2:
            entry = plan.entries[u][i]
            assert entry is not None
            first = _first_below(entry.log_q_first, _log_unit(rng), 0)
            if first is not None:
                selected.append(first - 1)
                selected.extend(select_children(entry.log_q_uncond, rng, start=first))
            for j in selected:
                descend(entry.children[j], i - 1, prefix, key)
        if not selected:
            out.append((tuple(prefix), key))  # last undecided trace: forced
        elif rng.random() < p:
            out.append((tuple(prefix), key))
        prefix.pop()

    descend(v, plan.m, [], Fingerprinter.EMPTY_KEY)
    return out


def _sample_vertex_paper(
    dag: LabeledDag,
    plan: SamplingPlan,
    v: int,
    seed: int,
    fingerprinter: Fingerprinter | None,
) -> list:
    """Published acceptance-test variant for one top-level vertex."""
    rng = random.Random(mix_seed(seed, v))
    if _log_unit(rng) <= plan.log_no_sample[v][plan.m]:
        return []
    out: list = []
    labels = dag.labels()
    fp = fingerprinter
    p = plan.p

    def descend(u: int, i: int, prefix: list[int], key: int) -> None:
        prefix.append(labels[u])
        if fp is not None:
            key = fp.extend(key, labels[u])
        visited_child = False
        if i >= 2:
            entry = plan.entries[u][i]
            assert entry is not None
            for j, ratio in enumerate(entry.skip_ratio):
                if rng.random() > ratio:
                    descend(entry.children[j], i - 1, prefix, key)
                    visited_child = True
        if not visited_child or rng.random() < p:
            out.append((tuple(prefix), key))
        prefix.pop()

    descend(v, plan.m, [], Fingerprinter.EMPTY_KEY)
    return out


def _run_sampler(
    per_vertex: Callable,
    dag: LabeledDag,
    counts: PathCounts,
    plan: SamplingPlan,
    seed: int,
    sink: Callable,
    fingerprinter: Fingerprinter | None,
    threads: int,
) -> int:
    if counts.m != plan.m:
        raise ValueError("plan and counts were built for different m")
    emit, _ = _emitters(sink, fingerprinter)
    emitted = 0
    if threads > 1:
        # Top-level subtrees are independent given derived seeds; merge their
        # emissions back in vertex-index order to keep output deterministic.
        with ThreadPoolExecutor(max_workers=threads) as pool:
            batches = pool.map(
                lambda v: per_vertex(dag, plan, v, seed, fingerprinter), range(dag.n)
            )
            for batch in batches:
                for trace, key in batch:
                    emit(trace, key)
                emitted += len(batch)
    else:
        for v in range(dag.n):
            batch = per_vertex(dag, plan, v, seed, fingerprinter)
            for trace, key in batch:
                emit(trace, key)
            emitted += len(batch)
    return emitted


def sample_traces_exact(
    dag: LabeledDag,
    counts: PathCounts,
    plan: SamplingPlan,
    seed: int,
    sink: Callable,
    *,
    fingerprinter: Fingerprinter | None = None,
    threads: int = 1,
) -> int:
    """Emit each trace of the multiset independently with probability plan.p.

    A top-level vertex is entered with probability 1-(1-p)^{c[v][m]}; inside,
    sequential conditioning keeps every per-trace marginal exactly p. The sink
    receives trace tuples (or (trace, key) with a fingerprinter). Identical
    (dag, counts, p, seed) produce an identical emission sequence.
    """
    return _run_sampler(
        _sample_vertex_exact, dag, counts, plan, seed, sink, fingerprinter, threads
    )


def sample_traces_paper(
    dag: LabeledDag,
    counts: PathCounts,
    plan: SamplingPlan,
    seed: int,
    sink: Callable,
    *,
    fingerprinter: Fingerprinter | None = None,
    threads: int = 1,
) -> int:
    """Variant sampler using the fixed per-child acceptance ratio.

    Each entered subtree still emits at least one trace, but the joint child
    acceptances ignore sibling outcomes, so per-trace marginals drift from p
    (measurably on small fixtures). Kept for comparison runs and reports.
    """
    return _run_sampler(
        _sample_vertex_paper, dag, counts, plan, seed, sink, fingerprinter, threads
    )


SAMPLERS: dict[str, Callable] = {
    "exact": sample_traces_exact,
    "paper": sample_traces_paper,
}


def sample_to_list(
    dag: LabeledDag,
    counts: PathCounts,
    plan: SamplingPlan,
    seed: int,
    *,
    sampler: str = "exact",
    fingerprinter: Fingerprinter | None = None,
    threads: int = 1,
) -> list:
    """Convenience wrapper collecting the emitted traces into a list."""
    out: list = []
    if fingerprinter is None:
        sink: Callable = out.append
    else:
        sink = lambda trace, key: out.append((trace, key))  # noqa: E731
    SAMPLERS[sampler](
        dag, counts, plan, seed, sink, fingerprinter=fingerprinter, threads=threads
    )
    return out
