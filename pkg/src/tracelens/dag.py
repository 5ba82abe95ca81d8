"""Labeled DAG model: vertices carry an integer label, a time range, and a tag.

The graph is immutable after construction. Out-edges are stored in a canonical
order (target start time, then target index) so that every seeded downstream
stage is byte-reproducible across repeated loads of the same input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CycleError, DagFormatError

Trace = tuple[int, ...]


@dataclass(frozen=True)
class Vertex:
    """One event vertex: integer label, time range in minutes, source tag."""

    label: int
    t_first: float
    t_last: float
    tag: str

    def __post_init__(self) -> None:
        if self.t_first > self.t_last:
            raise ValueError(
                f"vertex time range inverted: {self.t_first} > {self.t_last}"
            )
        if not self.tag or any(c.isspace() for c in self.tag):
            raise ValueError(f"tag must be a non-empty identifier, got {self.tag!r}")


class LabeledDag:
    """Directed graph over Vertex records with canonically ordered out-edges.

    Construction keeps whatever edges it is given (including duplicates or
    cycles, which `validate_dag` then reports); it only normalizes edge order
    and rejects structurally impossible input such as out-of-range indices.
    """

    __slots__ = ("vertices", "out_edges", "_labels")

    def __init__(self, vertices: Sequence[Vertex], edges: Iterable[tuple[int, int]]):
        self.vertices: tuple[Vertex, ...] = tuple(vertices)
        n = len(self.vertices)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references a missing vertex")
            adj[u].append(v)
        for u in range(n):
            adj[u].sort(key=lambda w: (self.vertices[w].t_first, w))
        self.out_edges: tuple[tuple[int, ...], ...] = tuple(tuple(a) for a in adj)
        self._labels: tuple[int, ...] = tuple(v.label for v in self.vertices)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.out_edges)

    def labels(self) -> tuple[int, ...]:
        return self._labels

    def iter_edges(self) -> Iterator[tuple[int, int]]:
        for u, targets in enumerate(self.out_edges):
            for v in targets:
                yield u, v

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledDag):
            return NotImplemented
        return self.vertices == other.vertices and self.out_edges == other.out_edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.out_edges))

    def __repr__(self) -> str:
        return f"LabeledDag(n={self.n}, edges={self.edge_count})"


@dataclass
class DagDiagnostics:
    """Result of validate_dag: ok iff acyclic and duplicate-free."""

    ok: bool
    cycle: list[int] | None
    duplicate_edges: list[tuple[int, int]]
    messages: list[str]


def find_cycle(dag: LabeledDag) -> list[int] | None:
    """Return one cycle as a vertex list [w, ..., u, w], or None if acyclic."""
    n = dag.n
    color = [0] * n  # 0 unvisited, 1 on stack, 2 done
    parent = [-1] * n
    for s in range(n):
        if color[s]:
            continue
        color[s] = 1
        stack: list[tuple[int, Iterator[int]]] = [(s, iter(dag.out_edges[s]))]
        while stack:
            u, it = stack[-1]
            advanced = False
            for w in it:
                if color[w] == 0:
                    color[w] = 1
                    parent[w] = u
                    stack.append((w, iter(dag.out_edges[w])))
                    advanced = True
                    break
                if color[w] == 1:
                    cyc = [u]
                    x = u
                    while x != w:
                        x = parent[x]
                        cyc.append(x)
                    cyc.reverse()
                    cyc.append(w)
                    return cyc
            if not advanced:
                color[u] = 2
                stack.pop()
    return None


def validate_dag(dag: LabeledDag) -> DagDiagnostics:
    """Check the edge relation: acyclic, no self-loops, no duplicate edges."""
    messages: list[str] = []
    duplicates: list[tuple[int, int]] = []
    for u, targets in enumerate(dag.out_edges):
        for a, b in zip(targets, targets[1:]):
            if a == b:
                duplicates.append((u, a))
    if duplicates:
        messages.append(f"duplicate edges: {sorted(set(duplicates))}")
    cycle = find_cycle(dag)
    if cycle is not None:
        messages.append("cycle: " + " -> ".join(map(str, cycle)))
    for i, v in enumerate(dag.vertices):
        if v.t_first > v.t_last:
            messages.append(f"vertex {i} has inverted time range")
    ok = cycle is None and not duplicates
    return DagDiagnostics(ok=ok, cycle=cycle, duplicate_edges=duplicates, messages=messages)


def topological_order(dag: LabeledDag) -> list[int]:
    """Kahn order, ties broken by vertex index; raises CycleError on a cycle."""
    n = dag.n
    indeg = [0] * n
    for _, v in dag.iter_edges():
        indeg[v] += 1
    from collections import deque

    queue = deque(v for v in range(n) if indeg[v] == 0)
    order: list[int] = []
    while queue:
        u = queue.popleft()
        order.append(u)
        for w in dag.out_edges[u]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if len(order) != n:
        cycle = find_cycle(dag)
        raise CycleError(cycle if cycle is not None else [])
    return order


def _format_time(t: float) -> str:
    # repr() of a float round-trips exactly; integers stay compact.
    if float(t).is_integer():
        return str(int(t))
    return repr(float(t))


def dumps(dag: LabeledDag) -> str:
    """Serialize to the line format `v <id> <label> <t_first> <t_last> <tag>`
    followed by `e <src> <dst>` lines; loads(dumps(dag)) == dag."""
    lines = []
    for i, v in enumerate(dag.vertices):
        lines.append(
            f"v {i} {v.label} {_format_time(v.t_first)} {_format_time(v.t_last)} {v.tag}"
        )
    for u, w in dag.iter_edges():
        lines.append(f"e {u} {w}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> LabeledDag:
    """Parse the text format produced by dumps; vertex ids must be 0..n-1."""
    vertex_rows: dict[int, Vertex] = {}
    edges: list[tuple[int, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "v":
                if len(parts) != 6:
                    raise ValueError("expected `v <id> <label> <t_first> <t_last> <tag>`")
                idx = int(parts[1])
                if idx in vertex_rows:
                    raise ValueError(f"vertex id {idx} repeated")
                vertex_rows[idx] = Vertex(
                    label=int(parts[2]),
                    t_first=float(parts[3]),
                    t_last=float(parts[4]),
                    tag=parts[5],
                )
            elif parts[0] == "e":
                if len(parts) != 3:
                    raise ValueError("expected `e <src> <dst>`")
                edges.append((int(parts[1]), int(parts[2])))
            else:
                raise ValueError(f"unknown record type {parts[0]!r}")
        except (ValueError, IndexError) as exc:
            raise DagFormatError(f"line {line_no}: {exc}") from exc
    n = len(vertex_rows)
    if set(vertex_rows) != set(range(n)):
        raise DagFormatError("vertex ids must cover 0..n-1 exactly once")
    vertices = [vertex_rows[i] for i in range(n)]
    try:
        return LabeledDag(vertices, edges)
    except ValueError as exc:
        raise DagFormatError(str(exc)) from exc


def load_file(path: str) -> LabeledDag:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def save_file(dag: LabeledDag, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(dag))
