"""Event-log ingestion: CSV parsing, noise cleaning, and DAG construction.

Input rows are `timestamp,tag,zone`. Two cleaning rules run per tag before the
graph is built:

* oscillation collapse: a reader bouncing between two overlapping zones x and
  y produces runs shaped like (x+y+)(x+y+)+; each maximal such run becomes a
  single synthetic record for the overlap zone min(x,y)*100 + max(x,y),
  spanning the run's full time range.
* repeat dedup: a maximal run of consecutive equal-zone records becomes one
  record spanning first-to-last time, so the edge window test naturally uses
  the first occurrence for in-edges and the last occurrence for out-edges.

Edges connect same-tag records at different zones when the second record
starts strictly after the first ends and within `delta` minutes.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .dag import LabeledDag, Vertex
from .errors import MalformedRowError, NonPositiveDeltaError


@dataclass(frozen=True)
class EventRecord:
    """One cleaned observation of a tag inside a zone over a time range."""

    timestamp_first: float
    timestamp_last: float
    tag: str
    zone: int

    def __post_init__(self) -> None:
        if self.timestamp_first > self.timestamp_last:
            raise ValueError("timestamp range inverted")
        if self.zone < 0:
            raise ValueError("zone must be non-negative")


@dataclass
class LabelCodec:
    """Zone-label dictionary: raw numeric zones, encoded string zones, and
    synthetic overlap zones allocated by oscillation collapse.

    The codec guarantees every id maps back to one logical zone: string zones
    get ids above the numeric range, and an overlap id that would collide with
    a raw zone id is remapped to a fresh one (recorded in `overlap_remaps`).
    """

    numeric_zones: set[int] = field(default_factory=set)
    string_ids: dict[str, int] = field(default_factory=dict)
    overlap_ids: dict[tuple[int, int], int] = field(default_factory=dict)
    overlap_remaps: dict[tuple[int, int], int] = field(default_factory=dict)

    def register_numeric(self, zone: int) -> int:
        self.numeric_zones.add(zone)
        return zone

    def assign_string_ids(self, tokens: Iterable[str]) -> None:
        """Give string zones deterministic ids: sorted order, smallest free
        non-negative integers not used by numeric zones."""
        pending = sorted(set(tokens) - set(self.string_ids))
        used = self.numeric_zones | set(self.string_ids.values())
        nxt = 0
        for tok in pending:
            while nxt in used:
                nxt += 1
            self.string_ids[tok] = nxt
            used.add(nxt)

    def _used_ids(self) -> set[int]:
        return (
            self.numeric_zones
            | set(self.string_ids.values())
            | set(self.overlap_ids.values())
        )

    def overlap_zone(self, x: int, y: int) -> int:
        """Id for the synthetic overlap zone of x and y, allocating on first use."""
        pair = (min(x, y), max(x, y))
        if pair in self.overlap_ids:
            return self.overlap_ids[pair]
        candidate = pair[0] * 100 + pair[1]
        if candidate >= 100 and candidate in self._used_ids():
            candidate = max(self._used_ids()) + 1
            self.overlap_remaps[pair] = candidate
        self.overlap_ids[pair] = candidate
        return candidate

    def is_overlap_id(self, zone: int) -> bool:
        return zone in set(self.overlap_ids.values())


def parse_events(
    rows: Iterable[str], codec: LabelCodec | None = None
) -> list[EventRecord]:
    """Parse CSV rows `timestamp,tag,zone` into point records sorted by
    (tag, timestamp). Zones may be non-negative integers or string labels;
    strings are dictionary-encoded into the shared codec."""
    if codec is None:
        codec = LabelCodec()
    raw: list[tuple[float, str, str]] = []
    for line_no, row in enumerate(csv.reader(rows), start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 3:
            raise MalformedRowError(line_no, f"expected 3 fields, got {len(row)}")
        ts_text, tag, zone_text = (f.strip() for f in row)
        try:
            ts = float(ts_text)
        except ValueError:
            raise MalformedRowError(line_no, f"bad timestamp {ts_text!r}") from None
        if not math.isfinite(ts):
            raise MalformedRowError(line_no, f"non-finite timestamp {ts_text!r}")
        if not tag or any(c.isspace() for c in tag):
            raise MalformedRowError(line_no, f"bad tag {tag!r}")
        if not zone_text:
            raise MalformedRowError(line_no, "empty zone")
        if zone_text.lstrip("-").isdigit():
            zone_val = int(zone_text)
            if zone_val < 0:
                raise MalformedRowError(line_no, f"negative zone {zone_val}")
            codec.register_numeric(zone_val)
        raw.append((ts, tag, zone_text))
    codec.assign_string_ids(t for _, _, t in raw if not t.lstrip("-").isdigit())
    records = []
    for ts, tag, zone_text in raw:
        zone = (
            int(zone_text)
            if zone_text.lstrip("-").isdigit()
            else codec.string_ids[zone_text]
        )
        records.append(
            EventRecord(timestamp_first=ts, timestamp_last=ts, tag=tag, zone=zone)
        )
    records.sort(key=lambda r: (r.tag, r.timestamp_first, r.timestamp_last, r.zone))
    return records


def _zone_blocks(events: Sequence[EventRecord]) -> list[tuple[int, int]]:
    """Maximal runs of equal zone as (start, end) index pairs, end exclusive."""
    blocks = []
    i = 0
    while i < len(events):
        j = i + 1
        while j < len(events) and events[j].zone == events[i].zone:
            j += 1
        blocks.append((i, j))
        i = j
    return blocks


def collapse_oscillations(
    events: Sequence[EventRecord], codec: LabelCodec | None = None
) -> list[EventRecord]:
    """Replace each maximal two-zone alternating run with at least two full
    x..y alternation blocks by one overlap-zone record spanning the run.

    Synthetic overlap records never participate in further collapsing, which
    makes the operation idempotent. Events must be time-sorted, single tag.
    """
    if codec is None:
        codec = LabelCodec()
    blocks = _zone_blocks(events)
    out: list[EventRecord] = []
    b = 0
    while b < len(blocks):
        x = events[blocks[b][0]].zone
        # A synthetic overlap zone acts as a barrier: never re-collapsed.
        run_len = 0
        y: int | None = None
        if not codec.is_overlap_id(x):
            k = b
            while k < len(blocks):
                zone = events[blocks[k][0]].zone
                want = x if (k - b) % 2 == 0 else y
                if k == b + 1 and y is None:
                    if zone == x or codec.is_overlap_id(zone):
                        break
                    y = zone
                elif zone != want:
                    break
                k += 1
            run_len = k - b
        matched = run_len if run_len % 2 == 0 else run_len - 1
        if matched >= 4:
            first = events[blocks[b][0]]
            last = events[blocks[b + matched - 1][1] - 1]
            assert y is not None
            out.append(
                EventRecord(
                    timestamp_first=first.timestamp_first,
                    timestamp_last=last.timestamp_last,
                    tag=first.tag,
                    zone=codec.overlap_zone(x, y),
                )
            )
            b += matched
        else:
            start, end = blocks[b]
            out.extend(events[start:end])
            b += 1
    return out


def dedup_repeats(events: Sequence[EventRecord]) -> list[EventRecord]:
    """Collapse each maximal run of equal-zone records into one record spanning
    the first record's start to the last record's end."""
    out: list[EventRecord] = []
    for start, end in _zone_blocks(events):
        first, last = events[start], events[end - 1]
        if end - start == 1:
            out.append(first)
        else:
            out.append(
                replace(
                    first,
                    timestamp_first=first.timestamp_first,
                    timestamp_last=last.timestamp_last,
                )
            )
    return out


def clean_events(
    events: Sequence[EventRecord], codec: LabelCodec | None = None
) -> list[EventRecord]:
    """Apply both cleaning rules per tag: oscillation collapse, then repeat
    dedup (collapse can create adjacent equal-zone runs)."""
    if codec is None:
        codec = LabelCodec()
    cleaned: list[EventRecord] = []
    by_tag: dict[str, list[EventRecord]] = {}
    for rec in events:
        by_tag.setdefault(rec.tag, []).append(rec)
    for tag in sorted(by_tag):
        group = sorted(by_tag[tag], key=lambda r: (r.timestamp_first, r.timestamp_last))
        cleaned.extend(dedup_repeats(collapse_oscillations(group, codec)))
    return cleaned


def build_dag(events: Sequence[EventRecord], delta: float) -> LabeledDag:
    """One vertex per record; edge (u, v) when both records share a tag, sit in
    different zones, and v starts strictly after u ends by at most delta."""
    if delta <= 0:
        raise NonPositiveDeltaError(delta)
    ordered = sorted(
        events, key=lambda r: (r.tag, r.timestamp_first, r.timestamp_last, r.zone)
    )
    vertices = [
        Vertex(label=r.zone, t_first=r.timestamp_first, t_last=r.timestamp_last, tag=r.tag)
        for r in ordered
    ]
    edges: list[tuple[int, int]] = []
    n = len(ordered)
    start = 0
    while start < n:
        end = start + 1
        while end < n and ordered[end].tag == ordered[start].tag:
            end += 1
        for i in range(start, end):
            u = ordered[i]
            for j in range(start, end):
                if i == j:
                    continue
                v = ordered[j]
                gap = v.timestamp_first - u.timestamp_last
                if gap > delta:
                    break  # sorted by start time; later records only grow the gap
                if gap > 0 and u.zone != v.zone:
                    edges.append((i, j))
        start = end
    return LabeledDag(vertices, edges)
