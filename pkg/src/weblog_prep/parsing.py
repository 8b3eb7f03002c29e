"""CLF/ECLF line and file parsing, tolerant of malformed input."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .model import (
    InvalidTimestamp,
    LogEntry,
    LogFormat,
    LogSource,
    format_clf_timestamp,
    parse_clf_timestamp,
)

MAX_LINE_BYTES = 64 * 1024
AUTO_DETECT_SAMPLE = 100


class MalformedReason(enum.Enum):
    BAD_FIELD_COUNT = "BAD_FIELD_COUNT"
    BAD_DATE = "BAD_DATE"
    BAD_STATUS = "BAD_STATUS"
    BAD_REQUEST_LINE = "BAD_REQUEST_LINE"
    EMPTY = "EMPTY"


@dataclass(frozen=True, slots=True)
class Malformed:
    line_number: int
    reason: MalformedReason


# A ParseOutcome is either a LogEntry or a Malformed marker.
ParseOutcome = LogEntry | Malformed


@dataclass(slots=True)
class ParseStats:
    total_lines: int = 0
    parsed: int = 0
    malformed: int = 0
    detected_format: LogFormat | None = None

    def check(self):
        assert self.total_lines == self.parsed + self.malformed


class FormatDetectionError(ValueError):
    """No well-formed line found while resolving an AUTO-format source."""


class SourceReadError(OSError):
    """Log file could not be read."""

    def __init__(self, source: LogSource, cause: OSError):
        super().__init__(f"cannot read {source.file_path!r} "
                         f"(server {source.server_name}): {cause}")
        self.source = source


_QUOTED = r'"((?:[^"\\]|\\.)*)"'
_CLF_RE = re.compile(
    r'^(\S+)\s+(\S+)\s+(\S+)\s+\[([^\]]+)\]\s+' + _QUOTED + r'\s+(\S+)\s+(\S+)\s*$'
)
_ECLF_RE = re.compile(
    r'^(\S+)\s+(\S+)\s+(\S+)\s+\[([^\]]+)\]\s+' + _QUOTED
    + r'\s+(\S+)\s+(\S+)\s+' + _QUOTED + r'\s+' + _QUOTED + r'\s*$'
)
_UNESCAPE_RE = re.compile(r'\\(.)')


def _unquote(text: str) -> str:
    return _UNESCAPE_RE.sub(r'\1', text) if '\\' in text else text


def _requote(text: str) -> str:
    if '\\' not in text and '"' not in text:
        return text
    return text.replace('\\', '\\\\').replace('"', '\\"')


def detect_format(sample_lines: Iterable[str]) -> LogFormat:
    """ECLF iff a majority of well-formed sample lines carry the two
    trailing quoted fields (referrer, agent); CLF otherwise."""
    eclf = clf = 0
    for line in sample_lines:
        line = line.rstrip("\r\n")
        if _ECLF_RE.match(line):
            eclf += 1
        elif _CLF_RE.match(line):
            clf += 1
    if eclf == 0 and clf == 0:
        raise FormatDetectionError("no well-formed line in sample")
    return LogFormat.ECLF if eclf > clf else LogFormat.CLF


def parse_line(line: str, fmt: LogFormat, source: LogSource,
               line_number: int) -> ParseOutcome:
    """Parse one raw line into a LogEntry, or a Malformed marker with reason."""
    if fmt is LogFormat.AUTO:
        raise ValueError("format must be resolved before parse_line")
    line = line.rstrip("\r\n")
    if not line.strip():
        return Malformed(line_number, MalformedReason.EMPTY)
    if len(line) > MAX_LINE_BYTES:
        return Malformed(line_number, MalformedReason.BAD_FIELD_COUNT)

    regex = _ECLF_RE if fmt is LogFormat.ECLF else _CLF_RE
    m = regex.match(line)
    if not m:
        return Malformed(line_number, MalformedReason.BAD_FIELD_COUNT)

    host, identd, auth, stamp, request, status_text, bytes_text = m.groups()[:7]
    referrer = agent = None
    if fmt is LogFormat.ECLF:
        referrer = _unquote(m.group(8))
        agent = _unquote(m.group(9))
        if referrer == "-":
            referrer = None
        if agent == "-":
            agent = None

    try:
        timestamp_utc, offset = parse_clf_timestamp(
            stamp, source.clock_skew_seconds)
    except InvalidTimestamp:
        return Malformed(line_number, MalformedReason.BAD_DATE)

    tokens = _unquote(request).split(" ")
    if len(tokens) != 3 or not all(tokens):
        return Malformed(line_number, MalformedReason.BAD_REQUEST_LINE)
    method, target, protocol = tokens
    path, sep, query = target.partition("?")
    if not path:
        return Malformed(line_number, MalformedReason.BAD_REQUEST_LINE)

    try:
        status = int(status_text)
    except ValueError:
        return Malformed(line_number, MalformedReason.BAD_STATUS)
    if not 100 <= status <= 599:
        return Malformed(line_number, MalformedReason.BAD_STATUS)

    if bytes_text == "-":
        nbytes = None
    else:
        try:
            nbytes = int(bytes_text)
        except ValueError:
            return Malformed(line_number, MalformedReason.BAD_FIELD_COUNT)
        if nbytes < 0:
            return Malformed(line_number, MalformedReason.BAD_FIELD_COUNT)

    return LogEntry(
        server_name=source.server_name,
        remote_host=host,
        identd=identd,
        auth_login=None if auth == "-" else auth,
        timestamp_utc=timestamp_utc,
        original_offset=offset,
        method=method,
        path=path,
        query=query if sep else None,
        protocol=protocol,
        status=status,
        bytes=nbytes,
        referrer=referrer,
        user_agent=agent,
        line_number=line_number,
    )


def serialize_entry(entry: LogEntry, fmt: LogFormat) -> str:
    """Canonical one-line rendering; parse_line inverts it field-for-field
    (timestamps re-rendered in the entry's original offset, skew 0)."""
    stamp = format_clf_timestamp(entry.timestamp_utc, entry.original_offset)
    request = _requote(f"{entry.method} {entry.request_target} {entry.protocol}")
    parts = [
        entry.remote_host,
        entry.identd,
        entry.auth_login if entry.auth_login is not None else "-",
        f"[{stamp}]",
        f'"{request}"',
        str(entry.status),
        str(entry.bytes) if entry.bytes is not None else "-",
    ]
    if fmt is LogFormat.ECLF:
        ref = entry.referrer if entry.referrer is not None else "-"
        agent = entry.user_agent if entry.user_agent is not None else "-"
        parts.append(f'"{_requote(ref)}"')
        parts.append(f'"{_requote(agent)}"')
    return " ".join(parts)


def iter_parse_file(source: LogSource,
                    stats: ParseStats) -> Iterator[LogEntry]:
    """Stream LogEntry values from a source file, updating stats in place.

    AUTO format is resolved from the first 100 lines; stats.detected_format
    is set before the first entry is yielded. Malformed lines are counted,
    never fatal. Memory use is bounded by the detection sample.
    """
    try:
        handle = open(source.file_path, "r", encoding="utf-8", errors="replace")
    except OSError as exc:
        raise SourceReadError(source, exc) from exc

    with handle:
        fmt = source.format
        buffered: list[str] = []
        if fmt is LogFormat.AUTO:
            for line in handle:
                buffered.append(line)
                if len(buffered) >= AUTO_DETECT_SAMPLE:
                    break
            if not buffered:
                stats.detected_format = LogFormat.CLF
                return
            fmt = detect_format(buffered)
        stats.detected_format = fmt

        def lines():
            yield from buffered
            yield from handle

        for number, line in enumerate(lines(), start=1):
            stats.total_lines += 1
            outcome = parse_line(line, fmt, source, number)
            if isinstance(outcome, Malformed):
                stats.malformed += 1
            else:
                stats.parsed += 1
                yield outcome


def parse_file(source: LogSource) -> tuple[list[LogEntry], ParseStats]:
    """Materialized convenience wrapper around iter_parse_file."""
    stats = ParseStats()
    entries = list(iter_parse_file(source, stats))
    stats.check()
    return entries, stats
