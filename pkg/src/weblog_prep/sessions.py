"""Timeout + referrer-history sessionization of per-user request streams."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import datetime, timedelta

from .model import LogEntry

DEFAULT_TIMEOUT = timedelta(minutes=30)


class ReferrerMode(enum.Enum):
    STRICT = "STRICT"
    LENIENT = "LENIENT"


@dataclass(frozen=True, slots=True)
class SessionizerConfig:
    timeout: timedelta = DEFAULT_TIMEOUT
    referrer_mode: ReferrerMode = ReferrerMode.LENIENT
    # When False (logs with no referrer field), the referrer clause is
    # skipped entirely and only the timeout splits sessions.
    use_referrer: bool = True

    def __post_init__(self):
        if self.timeout <= timedelta(0):
            raise ValueError("timeout must be positive")


@dataclass(slots=True)
class SessionHistory:
    session_id: int  # globally sequential, assigned by sessionize_all
    user_id: int
    requests: list[LogEntry] = field(default_factory=list)
    last_access: dict[str, datetime] = field(default_factory=dict)

    def add(self, entry: LogEntry):
        self.requests.append(entry)
        self.last_access[entry.path] = entry.timestamp_utc

    @property
    def start(self) -> datetime:
        return self.requests[0].timestamp_utc

    @property
    def end(self) -> datetime:
        return self.requests[-1].timestamp_utc


class UnsortedInputError(ValueError):
    pass


def referrer_path(referrer: str) -> str:
    """Path component of a referrer URL; scheme/host and query stripped."""
    rest = referrer
    if "://" in rest:
        rest = rest.split("://", 1)[1]
        slash = rest.find("/")
        rest = rest[slash:] if slash >= 0 else "/"
    return rest.split("?", 1)[0] or "/"


def distance(histories: list[SessionHistory], path: str) -> int | None:
    """Index of the history that most recently accessed path; None if absent.

    Ties on the access time go to the more recently created history.
    """
    best = None
    best_time = None
    for index, history in enumerate(histories):
        when = history.last_access.get(path)
        if when is not None and (best_time is None or when >= best_time):
            best, best_time = index, when
    return best


def session_gen(user_entries: list[tuple[LogEntry, int]],
                config: SessionizerConfig) -> list[SessionHistory]:
    """Partition one user's time-sorted requests into session histories.

    A request opens a new history when the gap from the partition's previous
    request exceeds the timeout, or when the referrer test fails; otherwise
    it joins the history that most recently served its referrer.
    """
    histories: list[SessionHistory] = []
    previous_time: datetime | None = None
    for entry, user_id in user_entries:
        if previous_time is not None and entry.timestamp_utc < previous_time:
            raise UnsortedInputError(
                f"entries out of order at line {entry.line_number}")

        if not histories:
            target = None
        elif entry.timestamp_utc - previous_time > config.timeout:
            target = None
        elif not config.use_referrer:
            target = len(histories) - 1
        elif entry.referrer is None:
            if config.referrer_mode is ReferrerMode.LENIENT:
                # Most recently active history: max end time, ties to the
                # newer history. Input is time-sorted so the last history
                # always holds the most recent request.
                target = max(range(len(histories)),
                             key=lambda i: (histories[i].end, i))
            else:
                target = None
        else:
            target = distance(histories, referrer_path(entry.referrer))

        if target is None:
            history = SessionHistory(session_id=0, user_id=user_id)
            histories.append(history)
        else:
            history = histories[target]
        history.add(entry)
        previous_time = entry.timestamp_utc
    return histories


def sessionize_all(entries: list[tuple[LogEntry, int]],
                   config: SessionizerConfig) -> list[SessionHistory]:
    """Sessionize every user partition; assign global sequential session ids
    ordered by each session's first timestamp (ties by user id)."""
    partitions: dict[int, list[tuple[LogEntry, int]]] = {}
    for entry, user_id in entries:
        partitions.setdefault(user_id, []).append((entry, user_id))

    histories: list[SessionHistory] = []
    for user_id in sorted(partitions):
        histories.extend(session_gen(partitions[user_id], config))

    histories.sort(key=lambda h: (h.start, h.user_id))
    for index, history in enumerate(histories, start=1):
        history.session_id = index
    return histories
