"""weblog-prep command line interface."""

from __future__ import annotations

import argparse
import sys
from datetime import timedelta

from .config import ConfigError, PipelineConfig, load_config, validate
from .model import LogFormat, LogSource
from .pipeline import EXIT_CONFIG, EXIT_OK, run
from .sessions import ReferrerMode, SessionizerConfig


def parse_source_flag(text: str) -> LogSource:
    """Parse --source "name=path[,skew=N][,format=CLF|ECLF]"."""
    if "=" not in text:
        raise argparse.ArgumentTypeError(
            f"--source must look like name=path[,skew=N][,format=F]: {text!r}")
    name, rest = text.split("=", 1)
    parts = rest.split(",")
    path = parts[0]
    skew = 0
    fmt = LogFormat.AUTO
    for option in parts[1:]:
        key, sep, value = option.partition("=")
        if key == "skew" and sep:
            try:
                skew = int(value)
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad skew in --source: {value!r}")
        elif key == "format" and sep:
            try:
                fmt = LogFormat(value.upper())
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad format in --source: {value!r}")
        else:
            raise argparse.ArgumentTypeError(f"unknown --source option: {option!r}")
    if not name or not path:
        raise argparse.ArgumentTypeError(f"empty name or path in --source: {text!r}")
    return LogSource(server_name=name, file_path=path, format=fmt,
                     clock_skew_seconds=skew)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weblog-prep",
        description="Preprocess CLF/ECLF web access logs into relational "
                    "tables, an aggregate report, and summary figures.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_cmd = sub.add_parser("run", help="run the full preprocessing pipeline")
    run_cmd.add_argument("--config", help="TOML manifest")
    run_cmd.add_argument("--source", action="append", type=parse_source_flag,
                         default=[], metavar="NAME=PATH[,skew=N][,format=F]",
                         help="add a log source (repeatable)")
    run_cmd.add_argument("--output-dir", help="output directory")
    run_cmd.add_argument("--timeout-minutes", type=float,
                         help="session timeout in minutes")
    run_cmd.add_argument("--strict-referrer", action="store_true",
                         help="open a new session whenever the referrer is "
                              "absent from every history")
    run_cmd.add_argument("--keep-failed-status", action="store_true",
                         help="keep entries with status >= 400")
    run_cmd.add_argument("--no-figures", action="store_true",
                         help="skip rendering report figures")

    validate_cmd = sub.add_parser("validate", help="check a manifest and exit")
    validate_cmd.add_argument("--config", required=True)
    return parser


def _apply_overrides(config: PipelineConfig, args) -> PipelineConfig:
    if args.source:
        config.sources = config.sources + args.source
    if args.output_dir:
        config.output_dir = args.output_dir
    if args.timeout_minutes is not None or args.strict_referrer:
        timeout = (timedelta(minutes=args.timeout_minutes)
                   if args.timeout_minutes is not None
                   else config.sessionizer.timeout)
        mode = (ReferrerMode.STRICT if args.strict_referrer
                else config.sessionizer.referrer_mode)
        config.sessionizer = SessionizerConfig(timeout=timeout, referrer_mode=mode)
    if args.keep_failed_status:
        from dataclasses import replace
        config.cleaning = replace(config.cleaning, keep_failed_status=True)
    if args.no_figures:
        config.figures = False
    return config


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "validate":
        try:
            load_config(args.config)
        except ConfigError as exc:
            for problem in exc.errors:
                print(f"config error: {problem}", file=sys.stderr)
            return EXIT_CONFIG
        print("config OK")
        return EXIT_OK

    try:
        if args.config:
            config = load_config(args.config, check=False)
        else:
            config = PipelineConfig()
        config = _apply_overrides(config, args)
        problems = validate(config)
        if problems:
            raise ConfigError(problems)
    except ConfigError as exc:
        for problem in exc.errors:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    return run(config)


if __name__ == "__main__":
    sys.exit(main())
