"""Assign a user key to every kept entry: login when present, else IP(+agent)."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from datetime import datetime

from .model import LogEntry

KEY_SEPARATOR = "\u0001"


class IdentityPolicy(enum.Enum):
    LOGIN_THEN_IP = "LOGIN_THEN_IP"
    LOGIN_THEN_IP_AGENT = "LOGIN_THEN_IP_AGENT"


class KeyKind(enum.Enum):
    LOGIN = "LOGIN"
    IP = "IP"
    IP_AGENT = "IP_AGENT"


@dataclass(frozen=True, slots=True)
class UserKey:
    kind: KeyKind
    value: str


@dataclass(slots=True)
class UserRecord:
    user_id: int  # dense, starting at 1, in order of first appearance
    key: UserKey
    first_seen: datetime
    last_seen: datetime
    request_count: int


def identify_user(entry: LogEntry, policy: IdentityPolicy) -> UserKey:
    if entry.auth_login is not None:
        return UserKey(KeyKind.LOGIN, entry.auth_login)
    if policy is IdentityPolicy.LOGIN_THEN_IP:
        return UserKey(KeyKind.IP, entry.remote_host)
    agent = entry.user_agent if entry.user_agent is not None else ""
    return UserKey(KeyKind.IP_AGENT, entry.remote_host + KEY_SEPARATOR + agent)


def assign_users(entries: list[LogEntry], policy: IdentityPolicy
                 ) -> tuple[list[tuple[LogEntry, int]], list[UserRecord]]:
    """Stable user ids in order of first appearance over time-sorted entries."""
    by_key: dict[UserKey, UserRecord] = {}
    attributed: list[tuple[LogEntry, int]] = []
    for entry in entries:
        key = identify_user(entry, policy)
        record = by_key.get(key)
        if record is None:
            record = UserRecord(
                user_id=len(by_key) + 1,
                key=key,
                first_seen=entry.timestamp_utc,
                last_seen=entry.timestamp_utc,
                request_count=0,
            )
            by_key[key] = record
        record.last_seen = max(record.last_seen, entry.timestamp_utc)
        record.first_seen = min(record.first_seen, entry.timestamp_utc)
        record.request_count += 1
        attributed.append((entry, record.user_id))
    return attributed, list(by_key.values())
