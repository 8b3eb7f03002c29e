"""Remove irrelevant-resource, failed, and robot requests; report removals."""

from __future__ import annotations

from dataclasses import dataclass, field

from .merging import JointLog
from .model import LogEntry, LogFormat, ResourceClass, classify_resource
from .parsing import serialize_entry


@dataclass(frozen=True, slots=True)
class CleaningConfig:
    remove_classes: frozenset[ResourceClass] = frozenset(
        {ResourceClass.IMAGE, ResourceClass.MULTIMEDIA,
         ResourceClass.STYLE, ResourceClass.SCRIPT}
    )
    keep_failed_status: bool = False  # when False, drop status >= 400
    robot_agent_substrings: tuple[str, ...] = ("slurp", "bot", "crawler", "spider")
    robots_txt_rule: bool = True
    methods_kept: frozenset[str] = frozenset({"GET", "POST", "HEAD"})

    def __post_init__(self):
        if ResourceClass.PAGE in self.remove_classes:
            raise ValueError("remove_classes must not contain PAGE")


@dataclass(slots=True)
class CleaningReport:
    input_count: int = 0
    kept_count: int = 0
    removed_by_rule: dict[str, int] = field(default_factory=dict)
    input_bytes: int = 0
    kept_bytes: int = 0

    @property
    def reduction_percent(self) -> float:
        if self.input_count == 0:
            return 0.0
        return 100.0 * (self.input_count - self.kept_count) / self.input_count

    @property
    def reduction_percent_bytes(self) -> float:
        if self.input_bytes == 0:
            return 0.0
        return 100.0 * (self.input_bytes - self.kept_bytes) / self.input_bytes

    def check(self):
        assert self.input_count == self.kept_count + sum(self.removed_by_rule.values())


def _entry_bytes(entry: LogEntry) -> int:
    # Byte size of the canonical line plus its newline; an entry carrying a
    # referrer or agent re-serializes as ECLF, otherwise CLF.
    fmt = (LogFormat.ECLF
           if entry.referrer is not None or entry.user_agent is not None
           else LogFormat.CLF)
    return len(serialize_entry(entry, fmt).encode("utf-8")) + 1


def collect_robot_pairs(entries: list[LogEntry],
                        config: CleaningConfig) -> set[tuple[str, str | None]]:
    """Pass 1: every (host, agent) pair that ever requested /robots.txt."""
    if not config.robots_txt_rule:
        return set()
    return {
        (e.remote_host, e.user_agent)
        for e in entries
        if classify_resource(e.path) is ResourceClass.ROBOT_FILE
    }


def is_robot(entry: LogEntry, robot_pairs: set[tuple[str, str | None]],
             config: CleaningConfig) -> bool:
    if entry.user_agent is not None:
        agent = entry.user_agent.lower()
        if any(sub.lower() in agent for sub in config.robot_agent_substrings):
            return True
    return (entry.remote_host, entry.user_agent) in robot_pairs


def removal_rule(entry: LogEntry, robot_pairs: set[tuple[str, str | None]],
                 config: CleaningConfig) -> str | None:
    """Name of the first matching removal rule, or None to keep the entry.

    Rule order: robot, resource class, failed status, method.
    """
    if is_robot(entry, robot_pairs, config):
        return "robot"
    cls = classify_resource(entry.path)
    if cls in config.remove_classes:
        return cls.value.lower()
    if entry.status >= 400 and not config.keep_failed_status:
        return "status"
    if entry.method.upper() not in config.methods_kept:
        return "method"
    return None


def account(entry: LogEntry, rule: str | None, report: CleaningReport) -> bool:
    """Record one entry's fate in the report; True when kept."""
    size = _entry_bytes(entry)
    report.input_count += 1
    report.input_bytes += size
    if rule is None:
        report.kept_count += 1
        report.kept_bytes += size
        return True
    report.removed_by_rule[rule] = report.removed_by_rule.get(rule, 0) + 1
    return False


def clean(joint: JointLog, config: CleaningConfig) -> tuple[JointLog, CleaningReport]:
    """Two-pass cleaner over a merged log: pass 1 collects the robots.txt
    accessor pairs, pass 2 filters in order."""
    robot_pairs = collect_robot_pairs(joint.entries, config)
    report = CleaningReport()
    kept: list[LogEntry] = []
    kept_counts: dict[str, int] = {}

    for entry in joint.entries:
        rule = removal_rule(entry, robot_pairs, config)
        if account(entry, rule, report):
            kept.append(entry)
            kept_counts[entry.server_name] = kept_counts.get(entry.server_name, 0) + 1

    report.check()
    return JointLog(entries=kept, source_counts=kept_counts), report
