"""End-to-end orchestration: parse, merge, clean, identify, sessionize,
summarize, export.

The pipeline reads every source twice. The first pass collects the
robots.txt accessor pairs, resolves formats, and checks per-source sort
order; the second streams parse -> merge -> clean, so only kept entries
are ever held in memory.
"""

from __future__ import annotations

import heapq
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .cleaning import CleaningConfig, CleaningReport, account, removal_rule
from .config import ConfigError, PipelineConfig, validate
from .export import write_bundle
from .identity import assign_users
from .merging import DuplicateServerError, sort_key
from .model import LogEntry, LogFormat, LogSource, ResourceClass, classify_resource
from .parsing import (
    FormatDetectionError,
    ParseStats,
    SourceReadError,
    iter_parse_file,
)
from .sessions import SessionHistory, SessionizerConfig, sessionize_all
from .summary import AggregateReport, build_report

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_INTERNAL = 3

THREADS_ENV = "WEBLOG_PREP_THREADS"


class PipelineError(Exception):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


@dataclass(slots=True)
class PipelineResult:
    report: AggregateReport
    sessions: list[SessionHistory]
    source_stats: list[tuple[LogSource, ParseStats]]
    files_written: list[str] = field(default_factory=list)


@dataclass(slots=True)
class _SourceScan:
    source: LogSource
    stats: ParseStats
    is_sorted: bool
    robot_pairs: set[tuple[str, str | None]]


def _thread_count(n_sources: int) -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        cap = int(raw)
    except ValueError:
        cap = 1
    if cap <= 0:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_sources))


def _scan_source(source: LogSource, cleaning: CleaningConfig) -> _SourceScan:
    stats = ParseStats()
    pairs: set[tuple[str, str | None]] = set()
    is_sorted = True
    previous = None
    for entry in iter_parse_file(source, stats):
        if (cleaning.robots_txt_rule
                and classify_resource(entry.path) is ResourceClass.ROBOT_FILE):
            pairs.add((entry.remote_host, entry.user_agent))
        key = sort_key(entry)
        if previous is not None and key < previous:
            is_sorted = False
        previous = key
    return _SourceScan(source, stats, is_sorted, pairs)


def _merged_stream(scans: list[_SourceScan]):
    streams = []
    for scan in scans:
        entries = iter_parse_file(scan.source, ParseStats())
        if not scan.is_sorted:
            entries = iter(sorted(entries, key=sort_key))
        streams.append(entries)
    return heapq.merge(*streams, key=sort_key)


def execute(config: PipelineConfig) -> PipelineResult:
    """Run the whole pipeline and write the output bundle.

    Raises PipelineError carrying the CLI exit code; any partially written
    output files are removed before the error propagates.
    """
    problems = validate(config)
    if problems:
        raise PipelineError("; ".join(problems), EXIT_CONFIG)

    seen: set[str] = set()
    for source in config.sources:
        if source.server_name in seen:
            raise PipelineError(
                str(DuplicateServerError(source.server_name)), EXIT_CONFIG)
        seen.add(source.server_name)

    ordered = sorted(config.sources, key=lambda s: s.server_name)
    try:
        workers = _thread_count(len(ordered))
        if workers == 1:
            scans = [_scan_source(s, config.cleaning) for s in ordered]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                scans = list(pool.map(
                    lambda s: _scan_source(s, config.cleaning), ordered))

        robot_pairs: set[tuple[str, str | None]] = set()
        for scan in scans:
            robot_pairs |= scan.robot_pairs

        cleaning_report = CleaningReport()
        kept: list[LogEntry] = []
        for entry in _merged_stream(scans):
            rule = removal_rule(entry, robot_pairs, config.cleaning)
            if account(entry, rule, cleaning_report):
                kept.append(entry)
        cleaning_report.check()
    except SourceReadError as exc:
        raise PipelineError(str(exc), EXIT_IO) from exc
    except FormatDetectionError as exc:
        raise PipelineError(f"format detection failed: {exc}", EXIT_IO) from exc

    attributed, users = assign_users(kept, config.identity_policy)

    # Logs with no referrer field sessionize on the timeout alone.
    any_eclf = any(scan.stats.detected_format is LogFormat.ECLF
                   for scan in scans)
    session_config = SessionizerConfig(
        timeout=config.sessionizer.timeout,
        referrer_mode=config.sessionizer.referrer_mode,
        use_referrer=any_eclf,
    )
    sessions = sessionize_all(attributed, session_config)

    report = build_report(attributed, users, sessions, cleaning_report,
                          list(config.granularities))

    session_of = {
        (entry.server_name, entry.line_number): history.session_id
        for history in sessions
        for entry in history.requests
    }
    rows = [(entry, user_id, session_of[(entry.server_name, entry.line_number)])
            for entry, user_id in attributed]

    source_stats = [(scan.source, scan.stats) for scan in scans]
    written: list[str] = []
    try:
        written = write_bundle(config.output_dir, rows, sessions, users,
                               source_stats, report)
        if config.figures:
            from .figures import render_report_figures
            written.extend(render_report_figures(report, config.output_dir))
    except OSError as exc:
        for path in written:
            try:
                os.remove(path)
            except OSError:
                pass
        raise PipelineError(f"cannot write output: {exc}", EXIT_IO) from exc

    return PipelineResult(report=report, sessions=sessions,
                          source_stats=source_stats, files_written=written)


def summary_text(result: PipelineResult) -> str:
    report = result.report
    cleaning = report.cleaning
    lines = [
        f"entries in:        {cleaning.input_count}",
        f"entries kept:      {cleaning.kept_count}",
        f"reduction:         {cleaning.reduction_percent:.2f}% of entries, "
        f"{cleaning.reduction_percent_bytes:.2f}% of bytes",
        f"users:             {report.totals.users}",
        f"sessions:          {report.totals.sessions}",
        f"files written:     {len(result.files_written)}",
    ]
    for rule, count in sorted(cleaning.removed_by_rule.items()):
        lines.append(f"  removed by {rule}: {count}")
    return "\n".join(lines)


def run(config: PipelineConfig, out=None, err=None) -> int:
    """CLI-facing wrapper: execute, print the one-screen summary, map every
    failure to its exit code."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        result = execute(config)
    except PipelineError as exc:
        print(f"error: {exc}", file=err)
        return exc.exit_code
    except ConfigError as exc:
        for problem in exc.errors:
            print(f"config error: {problem}", file=err)
        return EXIT_CONFIG
    except AssertionError as exc:
        print(f"internal invariant failure: {exc}", file=err)
        return EXIT_INTERNAL
    print(summary_text(result), file=out)
    return EXIT_OK
