"""File-based relational bundle: TSV tables plus a JSON aggregate report."""

from __future__ import annotations

import json
import os
from datetime import datetime
from typing import Iterable

from .identity import UserRecord
from .model import LogEntry, LogSource
from .parsing import ParseStats
from .sessions import SessionHistory
from .summary import AggregateReport

REQUESTS_FILE = "requests.tsv"
SESSIONS_FILE = "sessions.tsv"
USERS_FILE = "users.tsv"
SOURCES_FILE = "sources.tsv"
REPORT_FILE = "report.json"

_ESCAPES = {"%": "%25", "\t": "%09", "\n": "%0A", "\r": "%0D"}


def escape_field(value: str) -> str:
    """Percent-escape the delimiter and control characters for TSV safety."""
    if value.isprintable() and "%" not in value and "\t" not in value:
        return value
    out = []
    for ch in value:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20 or ch == "\x7f":
            out.append(f"%{ord(ch):02X}")
        else:
            out.append(ch)
    return "".join(out)


def unescape_field(value: str) -> str:
    out = []
    i = 0
    while i < len(value):
        if value[i] == "%" and i + 3 <= len(value):
            out.append(chr(int(value[i + 1:i + 3], 16)))
            i += 3
        else:
            out.append(value[i])
            i += 1
    return "".join(out)


def iso_utc(when: datetime) -> str:
    return when.strftime("%Y-%m-%dT%H:%M:%SZ")


def _write_tsv(destination: str, header: list[str],
               rows: Iterable[list[str]]):
    with open(destination, "w", encoding="utf-8", newline="\n") as out:
        out.write("\t".join(header) + "\n")
        for row in rows:
            out.write("\t".join(escape_field(cell) for cell in row) + "\n")


def _opt(value) -> str:
    return "-" if value is None else str(value)


def write_sessions_table(sessions: list[SessionHistory], destination: str):
    """One row per request: session_id, ip_address, datetime, url_accessed."""
    rows = []
    for session in sorted(sessions, key=lambda s: s.session_id):
        for entry in session.requests:
            rows.append([
                str(session.session_id),
                entry.remote_host,
                iso_utc(entry.timestamp_utc),
                entry.request_target,
            ])
    _write_tsv(destination,
               ["session_id", "ip_address", "datetime", "url_accessed"], rows)


def write_users_table(users: list[UserRecord], destination: str):
    rows = [
        [str(u.user_id), u.key.kind.value, u.key.value,
         iso_utc(u.first_seen), iso_utc(u.last_seen), str(u.request_count)]
        for u in sorted(users, key=lambda u: u.user_id)
    ]
    _write_tsv(destination,
               ["user_id", "key_kind", "key_value",
                "first_seen", "last_seen", "request_count"], rows)


def write_requests_table(entries: list[tuple[LogEntry, int, int]],
                         destination: str):
    """One row per kept request with all fields plus user_id and session_id."""
    header = [
        "server_name", "remote_host", "identd", "auth_login", "timestamp_utc",
        "original_offset_minutes", "method", "path", "query", "protocol",
        "status", "bytes", "referrer", "user_agent", "line_number",
        "user_id", "session_id",
    ]
    rows = [
        [e.server_name, e.remote_host, e.identd, _opt(e.auth_login),
         iso_utc(e.timestamp_utc), str(e.original_offset), e.method, e.path,
         _opt(e.query), e.protocol, str(e.status), _opt(e.bytes),
         _opt(e.referrer), _opt(e.user_agent), str(e.line_number),
         str(user_id), str(session_id)]
        for e, user_id, session_id in entries
    ]
    _write_tsv(destination, header, rows)


def write_sources_table(sources: list[tuple[LogSource, ParseStats]],
                        destination: str):
    rows = [
        [s.server_name, s.file_path,
         stats.detected_format.value if stats.detected_format else s.format.value,
         str(s.clock_skew_seconds), str(stats.total_lines),
         str(stats.parsed), str(stats.malformed)]
        for s, stats in sorted(sources, key=lambda pair: pair[0].server_name)
    ]
    _write_tsv(destination,
               ["server_name", "file_path", "format", "clock_skew_seconds",
                "total_lines", "parsed", "malformed"], rows)


def report_to_dict(report: AggregateReport) -> dict:
    lengths = [s.length_seconds for s in report.session_stats]
    return {
        "input_entries": report.cleaning.input_count,
        "kept_entries": report.cleaning.kept_count,
        "reduction_percent_entries": round(report.cleaning.reduction_percent, 4),
        "input_bytes": report.cleaning.input_bytes,
        "kept_bytes": report.cleaning.kept_bytes,
        "reduction_percent_bytes": round(report.cleaning.reduction_percent_bytes, 4),
        "removed_by_rule": dict(sorted(report.cleaning.removed_by_rule.items())),
        "totals": {
            "users": report.totals.users,
            "sessions": report.totals.sessions,
            "requests": report.totals.requests,
        },
        "server_shares": {k: round(v, 4) for k, v in report.server_shares.items()},
        "period_buckets": {
            granularity.value: [
                {
                    "bucket_start": iso_utc(b.bucket_start),
                    "unique_visitors": b.unique_visitors,
                    "unique_agents": b.unique_agents,
                    "visits": b.visits,
                    "requests": b.requests,
                }
                for b in buckets
            ]
            for granularity, buckets in sorted(
                report.period_buckets.items(), key=lambda kv: kv[0].value)
        },
        "sessions_summary": {
            "count": len(lengths),
            "mean_length_seconds": (round(sum(lengths) / len(lengths), 4)
                                    if lengths else 0.0),
            "max_length_seconds": max(lengths) if lengths else 0,
        },
    }


def write_report(report: AggregateReport, destination: str):
    with open(destination, "w", encoding="utf-8", newline="\n") as out:
        json.dump(report_to_dict(report), out, indent=2, sort_keys=True)
        out.write("\n")


def write_bundle(output_dir: str,
                 entries: list[tuple[LogEntry, int, int]],
                 sessions: list[SessionHistory],
                 users: list[UserRecord],
                 sources: list[tuple[LogSource, ParseStats]],
                 report: AggregateReport) -> list[str]:
    """Write the full relational bundle; returns the files written."""
    os.makedirs(output_dir, exist_ok=True)
    written = []
    for name, writer in [
        (REQUESTS_FILE, lambda p: write_requests_table(entries, p)),
        (SESSIONS_FILE, lambda p: write_sessions_table(sessions, p)),
        (USERS_FILE, lambda p: write_users_table(users, p)),
        (SOURCES_FILE, lambda p: write_sources_table(sources, p)),
        (REPORT_FILE, lambda p: write_report(report, p)),
    ]:
        path = os.path.join(output_dir, name)
        writer(path)
        written.append(path)
    return written
