"""Combine per-server logs into one joint log, globally time-sorted."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .model import LogEntry, LogSource


class DuplicateServerError(ValueError):
    def __init__(self, name: str):
        super().__init__(f"duplicate server name: {name!r}")
        self.server_name = name


def sort_key(entry: LogEntry):
    # Total order: equal timestamps are broken by server name, then by
    # position in the source file, so merge output is deterministic.
    return (entry.timestamp_utc, entry.server_name, entry.line_number)


@dataclass(slots=True)
class JointLog:
    entries: list[LogEntry] = field(default_factory=list)
    source_counts: dict[str, int] = field(default_factory=dict)


def merge(inputs: Sequence[tuple[LogSource, Iterable[LogEntry]]]) -> JointLog:
    """Merge per-source entry streams into one sequence sorted by UTC time.

    Sources that arrive already sorted are combined with a k-way streaming
    merge; any out-of-order source forces a full sort. Output is identical
    either way and independent of input list order.
    """
    seen: set[str] = set()
    for source, _ in inputs:
        if source.server_name in seen:
            raise DuplicateServerError(source.server_name)
        seen.add(source.server_name)

    runs: list[list[LogEntry]] = []
    counts: dict[str, int] = {}
    all_sorted = True
    for source, entries in sorted(inputs, key=lambda pair: pair[0].server_name):
        run = list(entries)
        counts[source.server_name] = len(run)
        if any(sort_key(a) > sort_key(b) for a, b in zip(run, run[1:])):
            all_sorted = False
        runs.append(run)

    if all_sorted:
        merged = list(heapq.merge(*runs, key=sort_key))
    else:
        merged = sorted([e for run in runs for e in run], key=sort_key)
    return JointLog(entries=merged, source_counts=counts)
