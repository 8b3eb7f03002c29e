"""Pipeline configuration: TOML manifest loading and validation."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from datetime import timedelta

import tomli

from .cleaning import CleaningConfig
from .identity import IdentityPolicy
from .model import LogFormat, LogSource, ResourceClass
from .sessions import ReferrerMode, SessionizerConfig
from .summary import Granularity

DEFAULT_GRANULARITIES = (Granularity.HOUR, Granularity.DAY)


@dataclass(slots=True)
class PipelineConfig:
    sources: list[LogSource] = field(default_factory=list)
    cleaning: CleaningConfig = field(default_factory=CleaningConfig)
    identity_policy: IdentityPolicy = IdentityPolicy.LOGIN_THEN_IP_AGENT
    sessionizer: SessionizerConfig = field(default_factory=SessionizerConfig)
    output_dir: str = "weblog-prep-out"
    granularities: tuple[Granularity, ...] = DEFAULT_GRANULARITIES
    figures: bool = True


class ConfigError(ValueError):
    """One or more configuration violations, all reported together."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


def _enum(cls, raw, label: str, errors: list[str]):
    try:
        return cls(str(raw).upper())
    except ValueError:
        allowed = ", ".join(m.value for m in cls)
        errors.append(f"{label}: {raw!r} is not one of {allowed}")
        return None


def parse_config(text: str, *, check: bool = True) -> PipelineConfig:
    """Parse and validate a TOML manifest; raises ConfigError listing every
    violation found, not just the first.

    check=False skips the structural checks (source presence, uniqueness),
    for callers that merge in command-line overrides before validating.
    """
    errors: list[str] = []
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError([f"config is not valid TOML: {exc}"]) from exc

    config = PipelineConfig()

    sources = data.get("sources", [])
    if not isinstance(sources, list):
        errors.append("sources must be an array of tables")
        sources = []
    for index, raw in enumerate(sources):
        name = raw.get("name")
        path = raw.get("path")
        if not name:
            errors.append(f"sources[{index}]: missing name")
        if not path:
            errors.append(f"sources[{index}]: missing path")
        fmt = _enum(LogFormat, raw.get("format", "AUTO"),
                    f"sources[{index}].format", errors)
        if name and path and fmt:
            config.sources.append(LogSource(
                server_name=str(name),
                file_path=str(path),
                format=fmt,
                clock_skew_seconds=int(raw.get("clock_skew_seconds", 0)),
            ))

    cleaning = data.get("cleaning", {})
    classes = set(CleaningConfig().remove_classes)
    if "remove_classes" in cleaning:
        classes = set()
        for raw in cleaning["remove_classes"]:
            cls = _enum(ResourceClass, raw, "cleaning.remove_classes", errors)
            if cls is ResourceClass.PAGE:
                errors.append("cleaning.remove_classes must not contain PAGE")
            elif cls is not None:
                classes.add(cls)
    try:
        config.cleaning = CleaningConfig(
            remove_classes=frozenset(classes),
            keep_failed_status=bool(cleaning.get("keep_failed_status", False)),
            robot_agent_substrings=tuple(
                cleaning.get("robot_agent_substrings",
                             CleaningConfig().robot_agent_substrings)),
            robots_txt_rule=bool(cleaning.get("robots_txt_rule", True)),
            methods_kept=frozenset(
                str(m).upper() for m in cleaning.get("methods_kept",
                                                     ("GET", "POST", "HEAD"))),
        )
    except ValueError as exc:
        errors.append(str(exc))

    policy = _enum(IdentityPolicy,
                   data.get("identity", {}).get("policy", "LOGIN_THEN_IP_AGENT"),
                   "identity.policy", errors)
    if policy:
        config.identity_policy = policy

    session = data.get("session", {})
    timeout_minutes = session.get("timeout_minutes", 30)
    if not isinstance(timeout_minutes, (int, float)) or timeout_minutes <= 0:
        errors.append(f"session.timeout_minutes must be > 0, got {timeout_minutes!r}")
        timeout_minutes = 30
    mode = _enum(ReferrerMode, session.get("referrer_mode", "LENIENT"),
                 "session.referrer_mode", errors)
    config.sessionizer = SessionizerConfig(
        timeout=timedelta(minutes=timeout_minutes),
        referrer_mode=mode or ReferrerMode.LENIENT,
    )

    config.output_dir = str(data.get("output_dir", config.output_dir))
    if "granularities" in data:
        grans = []
        for raw in data["granularities"]:
            g = _enum(Granularity, raw, "granularities", errors)
            if g is not None:
                grans.append(g)
        config.granularities = tuple(grans)
    config.figures = bool(data.get("figures", True))

    if check:
        errors.extend(validate(config))
    if errors:
        raise ConfigError(errors)
    return config


def validate(config: PipelineConfig) -> list[str]:
    """Structural violations of an assembled config; empty list when valid."""
    errors = []
    if not config.sources:
        errors.append("no sources configured")
    seen: set[str] = set()
    for source in config.sources:
        if source.server_name in seen:
            errors.append(f"duplicate server_name {source.server_name!r}")
        seen.add(source.server_name)
        if os.path.abspath(source.file_path) == os.path.abspath(config.output_dir):
            errors.append(
                f"output_dir collides with source path {source.file_path!r}")
    return errors


def load_config(path: str, *, check: bool = True) -> PipelineConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError([f"cannot read config {path!r}: {exc}"]) from exc
    return parse_config(text, check=check)
