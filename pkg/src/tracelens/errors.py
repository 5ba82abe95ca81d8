"""Exception hierarchy shared across the package.

Everything raised on bad data or infeasible parameters derives from
TracelensError so the CLI can map it to a single exit code.
"""

from __future__ import annotations


class TracelensError(Exception):
    """Base class for data and parameter errors."""


class CycleError(TracelensError):
    """The edge relation contains a cycle; one witness cycle is attached."""

    def __init__(self, cycle: list[int]):
        self.cycle = list(cycle)
        path = " -> ".join(str(v) for v in self.cycle)
        super().__init__(f"graph contains a cycle: {path}")


class DuplicateEdgeError(TracelensError):
    def __init__(self, edges: list[tuple[int, int]]):
        self.edges = list(edges)
        super().__init__(f"duplicate edges: {self.edges}")


class DagFormatError(TracelensError):
    """Malformed DAG text (bad record, missing vertex, out-of-range id)."""


class MalformedRowError(TracelensError):
    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        super().__init__(f"malformed row at line {line_no}: {reason}")


class NonPositiveDeltaError(TracelensError):
    def __init__(self, delta: float):
        super().__init__(f"delta must be positive, got {delta}")


class CountOverflowError(TracelensError):
    """A path count left the unsigned 64-bit range; reported, never wrapped."""

    def __init__(self, vertex: int, depth: int):
        self.vertex = vertex
        self.depth = depth
        super().__init__(
            f"trace count at vertex {vertex}, depth {depth} exceeds 64-bit range"
        )


class TooManyTracesError(TracelensError):
    def __init__(self, predicted: int, limit: int):
        self.predicted = predicted
        self.limit = limit
        super().__init__(
            f"enumeration would emit {predicted} traces, over the limit {limit}"
        )


class ThresholdTooSmallError(TracelensError):
    def __init__(self, epsilon: float, oversampling: float):
        super().__init__(
            f"threshold epsilon={epsilon} is below C={oversampling}; "
            "the sampling probability would exceed 1"
        )


class InfeasibleSpecError(TracelensError):
    """A synthetic-generator request could not be satisfied."""


class BudgetExceededError(TracelensError):
    """Top-k threshold search ran out of room above the oversampling floor."""
