"""Aggregated variables at request, session, and period level."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import datetime, timedelta

from .cleaning import CleaningReport
from .identity import UserRecord
from .model import LogEntry
from .sessions import SessionHistory


class Granularity(enum.Enum):
    HOUR = "HOUR"
    DAY = "DAY"
    WEEK = "WEEK"
    MONTH = "MONTH"


@dataclass(frozen=True, slots=True)
class SessionStats:
    session_id: int
    user_id: int
    start: datetime
    end: datetime
    length_seconds: int
    page_views: int


@dataclass(slots=True)
class PeriodBucket:
    granularity: Granularity
    bucket_start: datetime
    unique_visitors: int = 0
    unique_agents: int = 0
    visits: int = 0
    requests: int = 0


@dataclass(slots=True)
class Totals:
    users: int = 0
    sessions: int = 0
    requests: int = 0


@dataclass(slots=True)
class AggregateReport:
    session_stats: list[SessionStats] = field(default_factory=list)
    period_buckets: dict[Granularity, list[PeriodBucket]] = field(default_factory=dict)
    server_shares: dict[str, float] = field(default_factory=dict)
    cleaning: CleaningReport = field(default_factory=CleaningReport)
    totals: Totals = field(default_factory=Totals)


def session_stats(session: SessionHistory) -> SessionStats:
    if not session.requests:
        raise ValueError("empty session")
    start, end = session.start, session.end
    return SessionStats(
        session_id=session.session_id,
        user_id=session.user_id,
        start=start,
        end=end,
        length_seconds=int((end - start).total_seconds()),
        page_views=len(session.requests),
    )


def bucket_start(when: datetime, granularity: Granularity) -> datetime:
    """Align a UTC instant down to its granularity boundary."""
    floor = when.replace(minute=0, second=0, microsecond=0)
    if granularity is Granularity.HOUR:
        return floor
    floor = floor.replace(hour=0)
    if granularity is Granularity.DAY:
        return floor
    if granularity is Granularity.WEEK:
        # ISO weeks start Monday 00:00 UTC.
        return floor - timedelta(days=floor.weekday())
    return floor.replace(day=1)


def period_stats(entries: list[tuple[LogEntry, int]],
                 sessions: list[SessionHistory],
                 granularity: Granularity) -> list[PeriodBucket]:
    """One bucket per aligned interval holding at least one request.

    A session (visit) is attributed to the bucket containing its first
    request. An absent user agent counts as one pseudo-value.
    """
    buckets: dict[datetime, PeriodBucket] = {}
    visitors: dict[datetime, set[int]] = {}
    agents: dict[datetime, set[str | None]] = {}

    for entry, user_id in entries:
        start = bucket_start(entry.timestamp_utc, granularity)
        bucket = buckets.get(start)
        if bucket is None:
            bucket = buckets[start] = PeriodBucket(granularity, start)
            visitors[start] = set()
            agents[start] = set()
        bucket.requests += 1
        visitors[start].add(user_id)
        agents[start].add(entry.user_agent)

    for session in sessions:
        start = bucket_start(session.start, granularity)
        if start in buckets:
            buckets[start].visits += 1

    result = []
    for start in sorted(buckets):
        bucket = buckets[start]
        bucket.unique_visitors = len(visitors[start])
        bucket.unique_agents = len(agents[start])
        result.append(bucket)
    return result


def server_shares(entries: list[LogEntry]) -> dict[str, float]:
    counts: dict[str, int] = {}
    for entry in entries:
        counts[entry.server_name] = counts.get(entry.server_name, 0) + 1
    total = sum(counts.values())
    return {name: 100.0 * count / total for name, count in sorted(counts.items())}


def build_report(entries: list[tuple[LogEntry, int]],
                 users: list[UserRecord],
                 sessions: list[SessionHistory],
                 cleaning: CleaningReport,
                 granularities: list[Granularity]) -> AggregateReport:
    report = AggregateReport(cleaning=cleaning)
    report.session_stats = [session_stats(s)
                            for s in sorted(sessions, key=lambda s: s.session_id)]
    for granularity in granularities:
        report.period_buckets[granularity] = period_stats(
            entries, sessions, granularity)
    report.server_shares = server_shares([e for e, _ in entries])
    report.totals = Totals(
        users=len(users),
        sessions=len(sessions),
        requests=len(entries),
    )
    return report
