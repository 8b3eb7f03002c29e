"""Shared domain types and time normalization used by every pipeline stage."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone


class LogFormat(enum.Enum):
    CLF = "CLF"
    ECLF = "ECLF"
    AUTO = "AUTO"


class ResourceClass(enum.Enum):
    PAGE = "PAGE"
    IMAGE = "IMAGE"
    MULTIMEDIA = "MULTIMEDIA"
    STYLE = "STYLE"
    SCRIPT = "SCRIPT"
    ROBOT_FILE = "ROBOT_FILE"
    OTHER = "OTHER"


# Extension tables are config-overridable via classify_resource's arguments;
# these are the defaults.
IMAGE_EXTENSIONS = frozenset(
    {"gif", "jpg", "jpeg", "png", "bmp", "ico", "tif", "tiff", "svg", "webp"}
)
MULTIMEDIA_EXTENSIONS = frozenset(
    {"mp3", "mp4", "avi", "mpg", "mpeg", "mov", "wav", "swf", "flv"}
)
STYLE_EXTENSIONS = frozenset({"css"})
SCRIPT_EXTENSIONS = frozenset({"js"})


@dataclass(frozen=True, slots=True)
class LogEntry:
    """One parsed request record, tagged with its originating server."""

    server_name: str
    remote_host: str
    identd: str
    auth_login: str | None
    timestamp_utc: datetime  # tz-aware, UTC, whole seconds
    original_offset: int  # timezone offset in minutes, as written in the log
    method: str
    path: str
    query: str | None
    protocol: str
    status: int
    bytes: int | None
    referrer: str | None
    user_agent: str | None
    line_number: int

    def __post_init__(self):
        if not 100 <= self.status <= 599:
            raise ValueError(f"status out of range: {self.status}")
        if self.bytes is not None and self.bytes < 0:
            raise ValueError(f"negative bytes: {self.bytes}")
        if not self.path:
            raise ValueError("empty path")

    @property
    def request_target(self) -> str:
        return self.path if self.query is None else f"{self.path}?{self.query}"


@dataclass(frozen=True, slots=True)
class LogSource:
    """One input log file: server name, location, format, clock correction."""

    server_name: str
    file_path: str
    format: LogFormat = LogFormat.AUTO
    clock_skew_seconds: int = 0


class InvalidTimestamp(ValueError):
    """Calendar date-time that does not exist (e.g. 32/Jun)."""


_MONTHS = {
    "Jan": 1, "Feb": 2, "Mar": 3, "Apr": 4, "May": 5, "Jun": 6,
    "Jul": 7, "Aug": 8, "Sep": 9, "Oct": 10, "Nov": 11, "Dec": 12,
}
_MONTH_NAMES = {v: k for k, v in _MONTHS.items()}


def normalize_time(local_time: datetime, offset_minutes: int,
                   clock_skew_seconds: int = 0) -> datetime:
    """UTC instant for a local log timestamp: local - offset - skew."""
    if not -1440 <= offset_minutes <= 1440:
        raise InvalidTimestamp(f"offset out of range: {offset_minutes}")
    utc = (local_time
           - timedelta(minutes=offset_minutes)
           - timedelta(seconds=clock_skew_seconds))
    return utc.replace(tzinfo=timezone.utc)


def parse_clf_timestamp(text: str, clock_skew_seconds: int = 0) -> tuple[datetime, int]:
    """Parse '18/Jun/2006:12:28:33 +0000' into (UTC instant, offset minutes).

    Raises InvalidTimestamp on any malformed or impossible date.
    """
    try:
        stamp, offset_text = text.split(" ")
        day, mon, rest = stamp.split("/", 2)
        year, hh, mm, ss = rest.split(":")
        month = _MONTHS[mon]
        local = datetime(int(year), month, int(day), int(hh), int(mm), int(ss))
        sign = 1 if offset_text[0] == "+" else -1
        if offset_text[0] not in "+-" or len(offset_text) != 5:
            raise ValueError(offset_text)
        offset = sign * (int(offset_text[1:3]) * 60 + int(offset_text[3:5]))
    except (ValueError, KeyError, IndexError) as exc:
        raise InvalidTimestamp(f"bad timestamp {text!r}") from exc
    return normalize_time(local, offset, clock_skew_seconds), offset


def format_clf_timestamp(utc: datetime, offset_minutes: int) -> str:
    """Render a UTC instant back into CLF local-time notation."""
    local = utc + timedelta(minutes=offset_minutes)
    sign = "+" if offset_minutes >= 0 else "-"
    mag = abs(offset_minutes)
    return (f"{local.day:02d}/{_MONTH_NAMES[local.month]}/{local.year:04d}:"
            f"{local.hour:02d}:{local.minute:02d}:{local.second:02d} "
            f"{sign}{mag // 60:02d}{mag % 60:02d}")


def classify_resource(path: str,
                      image_exts: frozenset[str] = IMAGE_EXTENSIONS,
                      multimedia_exts: frozenset[str] = MULTIMEDIA_EXTENSIONS,
                      style_exts: frozenset[str] = STYLE_EXTENSIONS,
                      script_exts: frozenset[str] = SCRIPT_EXTENSIONS,
                      other_exts: frozenset[str] = frozenset()) -> ResourceClass:
    """Classify a request path by its lowercase extension and exact-path rules."""
    bare = path.split("?", 1)[0]
    if bare.lower() == "/robots.txt":
        return ResourceClass.ROBOT_FILE
    last = bare.rsplit("/", 1)[-1]
    if "." not in last:
        return ResourceClass.PAGE
    ext = last.rsplit(".", 1)[-1].lower()
    if ext in image_exts:
        return ResourceClass.IMAGE
    if ext in multimedia_exts:
        return ResourceClass.MULTIMEDIA
    if ext in style_exts:
        return ResourceClass.STYLE
    if ext in script_exts:
        return ResourceClass.SCRIPT
    if ext in other_exts:
        return ResourceClass.OTHER
    return ResourceClass.PAGE
