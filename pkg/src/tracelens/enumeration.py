"""Exhaustive trace generation and incremental fingerprinting.

`all_traces` walks every path of length at most m and emits its label
sequence; it is the exactness oracle the samplers and the miner are checked
against. Fingerprints are 61-bit rolling hashes extended one label at a time,
so a hashed walk pays O(1) per emitted trace beyond the traversal itself.
"""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass
from typing import Callable

from .counting import count_traces, total_traces
from .dag import LabeledDag, Trace
from .errors import TooManyTracesError
from .rng import mix_seed

#: Modulus for fingerprints: the Mersenne prime 2^61 - 1.
FINGERPRINT_MODULUS = (1 << 61) - 1

_BASE_SALT = 0x5350FD1E

DEFAULT_ENUM_LIMIT = 2_000_000


@dataclass(frozen=True)
class Fingerprinter:
    """Rolling-hash parameters, fixed per run from a seed.

    Equal label sequences map to equal keys by construction; distinct
    sequences collide with probability about len/modulus per pair.
    """

    base: int
    modulus: int = FINGERPRINT_MODULUS

    EMPTY_KEY = 0

    @classmethod
    def from_seed(cls, seed: int) -> "Fingerprinter":
        base = 2 + mix_seed(seed, _BASE_SALT) % (FINGERPRINT_MODULUS - 3)
        return cls(base=base)

    def extend(self, prefix_key: int, next_label: int) -> int:
        """Key of prefix+label from the prefix key, in O(1).

        Labels are offset by one so the empty prefix (key 0) never collides
        with sequences of zero labels.
        """
        return (prefix_key * self.base + next_label + 1) % self.modulus

    def key_of(self, labels: Trace) -> int:
        key = self.EMPTY_KEY
        for lab in labels:
            key = self.extend(key, lab)
        return key


def trace_fingerprint(params: Fingerprinter, prefix_key: int, next_label: int) -> int:
    """Functional alias for Fingerprinter.extend."""
    return params.extend(prefix_key, next_label)


def all_traces(
    dag: LabeledDag,
    m: int,
    sink: Callable,
    *,
    fingerprinter: Fingerprinter | None = None,
    expected_limit: int | None = None,
) -> int:
    """Emit the trace of every path of length 1..m exactly once per path.

    The sink receives each trace as a tuple of labels; with a fingerprinter it
    receives (trace, key). Returns the emission count. When `expected_limit`
    is given and the counting table predicts more emissions, a warning is
    issued before the walk starts (the caller bounds m; output can be huge).
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if expected_limit is not None:
        predicted = total_traces(count_traces(dag, m))
        if predicted > expected_limit:
            warnings.warn(
                f"enumeration will emit {predicted} traces "
                f"(over the advisory limit {expected_limit})",
                RuntimeWarning,
                stacklevel=2,
            )
    labels = dag.labels()
    out_edges = dag.out_edges
    fp = fingerprinter
    emitted = 0

    if fp is None:

        def walk(v: int, depth_left: int, prefix: list[int]) -> None:
            nonlocal emitted
            prefix.append(labels[v])
            sink(tuple(prefix))
            emitted += 1
            if depth_left > 1:
                for w in out_edges[v]:
                    walk(w, depth_left - 1, prefix)
            prefix.pop()

        for start in range(dag.n):
            walk(start, m, [])
    else:

        def walk_keyed(v: int, depth_left: int, prefix: list[int], key: int) -> None:
            nonlocal emitted
            prefix.append(labels[v])
            key = fp.extend(key, labels[v])
            sink(tuple(prefix), key)
            emitted += 1
            if depth_left > 1:
                for w in out_edges[v]:
                    walk_keyed(w, depth_left - 1, prefix, key)
            prefix.pop()

        for start in range(dag.n):
            walk_keyed(start, m, [], Fingerprinter.EMPTY_KEY)
    return emitted


def exact_frequencies(
    dag: LabeledDag, m: int, *, limit: int = DEFAULT_ENUM_LIMIT
) -> Counter:
    """Exact multiplicity of every distinct trace of length at most m.

    Refuses to run when the counting table predicts more than `limit`
    emissions, since the output is materialized in memory.
    """
    predicted = total_traces(count_traces(dag, m))
    if predicted > limit:
        raise TooManyTracesError(predicted, limit)
    freqs: Counter = Counter()

    def sink(trace: Trace) -> None:
        freqs[trace] += 1

    all_traces(dag, m, sink)
    return freqs
