"""Shared hypothesis strategies for generating well-formed log entries."""

from datetime import datetime, timezone

from hypothesis import strategies as st

from weblog_prep.model import LogEntry

_TOKEN = "abcdefghijklmnopqrstuvwxyz0123456789.-_"
_QUOTABLE = ("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
             "0123456789 ;:/.?&=()-_\"\\'!")


def tokens(min_size=1, max_size=16):
    return st.text(alphabet=_TOKEN, min_size=min_size, max_size=max_size)


def paths():
    return tokens(max_size=24).map(lambda t: "/" + t.replace("?", ""))


def quotable(optional=True):
    base = st.text(alphabet=_QUOTABLE, min_size=1, max_size=40).filter(
        lambda t: t != "-")
    return st.none() | base if optional else base


def timestamps():
    return st.datetimes(
        min_value=datetime(1995, 1, 1), max_value=datetime(2030, 1, 1)
    ).map(lambda d: d.replace(microsecond=0, tzinfo=timezone.utc))


@st.composite
def log_entries(draw, server_names=("alpha",), max_line_number=10_000):
    return LogEntry(
        server_name=draw(st.sampled_from(server_names)),
        remote_host=draw(tokens()),
        identd=draw(tokens(max_size=8)),
        auth_login=draw(st.none() | tokens(max_size=8).filter(lambda t: t != "-")),
        timestamp_utc=draw(timestamps()),
        original_offset=draw(st.integers(-1439, 1439)),
        method=draw(st.sampled_from(["GET", "POST", "HEAD", "PUT", "TRACE"])),
        path=draw(paths()),
        query=draw(st.none() | tokens(max_size=12)),
        protocol=draw(st.sampled_from(["HTTP/1.0", "HTTP/1.1"])),
        status=draw(st.integers(100, 599)),
        bytes=draw(st.none() | st.integers(0, 10**9)),
        referrer=draw(quotable()),
        user_agent=draw(quotable()),
        line_number=draw(st.integers(1, max_line_number)),
    )
