"""Path-count table: c[v][i] = number of traces of length at most i starting
at v, i.e. 1 for v's own length-1 trace plus the counts of all children one
step shorter.

Evaluated iteratively in reverse topological order (children before parents)
so arbitrarily long chains cannot hit recursion limits. Counts are exact
Python integers checked against the unsigned 64-bit range; an excursion past
it is reported as an error, never wrapped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dag import LabeledDag, topological_order
from .errors import CountOverflowError

_U64_MAX = (1 << 64) - 1


@dataclass(frozen=True)
class PathCounts:
    """Per-vertex table of trace counts by maximum length 0..m."""

    per_vertex: tuple[tuple[int, ...], ...]
    m: int

    def count(self, vertex: int, i: int) -> int:
        return self.per_vertex[vertex][i]


def count_traces(dag: LabeledDag, m: int) -> PathCounts:
    """Fill the table bottom-up; time O(|E| m), space O(|V| m)."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    order = topological_order(dag)
    table: list[tuple[int, ...]] = [()] * dag.n
    for v in reversed(order):
        row = [0] * (m + 1)
        children = dag.out_edges[v]
        for i in range(1, m + 1):
            total = 1
            for w in children:
                total += table[w][i - 1]
            if total > _U64_MAX:
                raise CountOverflowError(v, i)
            row[i] = total
        table[v] = tuple(row)
    return PathCounts(per_vertex=tuple(table), m=m)


def total_traces(counts: PathCounts) -> int:
    """Size of the full trace multiset: sum of c[v][m] over all start vertices."""
    return sum(row[counts.m] for row in counts.per_vertex)
