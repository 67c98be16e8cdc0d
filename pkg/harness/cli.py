# harness/cli.py
"""
Command-line entry point: list, run, search and verify.
Reports go to stdout (or --output); logs go to stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Callable
from fractions import Fraction
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from core.config import get_settings
from core.errors import ArgumentError, CapacityError, ConfigError
from harness.experiment import run_experiment
from harness.report import render, search_report, verify_report
from harness.schemas import ExperimentConfig, InputMode
from harness.verify import SUITES, verify
from protocols.registry import describe
from search.bounded import best_bounded_comm
from search.documents import load_task_document
from search.tasks import BUILTIN_TASKS
from search.zero_comm import best_zero_comm

logger = logging.getLogger("harness")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _coerce(value: str) -> Any:
    for parse in (int, Fraction, float):
        try:
            return parse(value)
        except (ValueError, ZeroDivisionError):
            continue
    return value


def _parse_params(pairs: list[str] | None) -> dict[str, Any]:
    params: dict[str, Any] = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise ConfigError(f"expected key=value, got {pair!r}", location="--param")
        params[key.strip()] = _coerce(value.strip())
    return params


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(output).write_text(text, encoding="utf-8")
        logger.info("report written to %s", output)


# ─────────────────────────────────────────────
# Subcommands
# ─────────────────────────────────────────────
def cmd_list(args: argparse.Namespace) -> int:
    lines = ["# protocols"]
    lines += [f"{p['name']:<22} {p['domain']:<12} {p['summary']}" for p in describe()]
    lines.append("# tasks")
    lines += sorted(BUILTIN_TASKS)
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    data: dict[str, Any] = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(str(exc), location=args.config) from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object", location=args.config)

    if args.protocol:
        data["protocol"] = args.protocol
    if args.input:
        data["mode"], data["inputs"] = InputMode.EXPLICIT.value, args.input
    elif args.grid:
        data["mode"], data["grid"] = InputMode.GRID.value, args.grid
    elif args.random is not None:
        data["mode"], data["count"] = InputMode.RANDOM.value, args.random
    elif args.exhaustive:
        data["mode"] = InputMode.EXHAUSTIVE.value
    if args.trials is not None:
        data["trials"] = args.trials
    if args.seed is not None:
        data["seed"] = args.seed
    if "seed" not in data:
        settings = get_settings()
        if settings.seed is None:
            raise ConfigError("a master seed is required (--seed, config or QCOMM_SEED)", location="seed")
        data["seed"] = settings.seed
    if args.format:
        data["format"] = args.format
    if args.param:
        data["params"] = {**data.get("params", {}), **_parse_params(args.param)}
    return ExperimentConfig.model_validate(data)


def cmd_run(args: argparse.Namespace) -> int:
    config = _experiment_config(args)
    report = run_experiment(config, workers=args.workers)
    _emit(render(report, config.format), args.output)
    if not report.passed:
        failed = sum(1 for row in report.rows if row.passed is False)
        logger.warning("%s: %d of %d rows outside tolerance", config.protocol, failed, len(report.rows))
        return EXIT_FAILED
    return EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    task = load_task_document(args.task, _parse_params(args.param))
    zero = best_zero_comm(task)
    bounded = best_bounded_comm(task, args.budget) if args.budget is not None else None
    _emit(search_report(zero, bounded), args.output)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    summary = verify(args.suite, seed=args.seed)
    _emit(verify_report(summary), args.output)
    return EXIT_OK if summary.passed else EXIT_FAILED


COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "list": cmd_list,
    "run": cmd_run,
    "search": cmd_search,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcomm",
        description="Simulate and verify classical, quantum and entanglement-assisted two-party protocols.",
    )
    parser.add_argument("--log-level", default=None, help="logging level (default from QCOMM_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_list = sub.add_parser("list", help="registered protocols and built-in tasks")
    p_list.add_argument("--output")

    p_run = sub.add_parser("run", help="Monte Carlo experiment over a set of inputs")
    p_run.add_argument("protocol", nargs="?")
    inputs = p_run.add_mutually_exclusive_group()
    inputs.add_argument("--input", action="append", metavar="X,Y", help="explicit input pair (repeatable)")
    inputs.add_argument("--grid", metavar="G[xH]", help="grid over the protocol's input domain")
    inputs.add_argument("--exhaustive", action="store_true", help="every input pair (default)")
    inputs.add_argument("--random", type=int, metavar="COUNT", help="COUNT seeded random pairs")
    p_run.add_argument("--trials", type=int)
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--format", choices=["csv", "json"])
    p_run.add_argument("--param", action="append", metavar="KEY=VALUE")
    p_run.add_argument("--config", help="JSON experiment config; flags override it")
    p_run.add_argument("--workers", type=int)
    p_run.add_argument("--output")

    p_search = sub.add_parser("search", help="optimal deterministic strategies for a finite task")
    p_search.add_argument("task", help="built-in task name, JSON file or JSON text")
    p_search.add_argument("--budget", type=int, help="also search protocols of at most this many bits")
    p_search.add_argument("--param", action="append", metavar="KEY=VALUE")
    p_search.add_argument("--output")

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", nargs="?", default="all", choices=SUITES)
    p_verify.add_argument("--seed", type=int)
    p_verify.add_argument("--output")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = args.log_level or get_settings().log_level
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ArgumentError, CapacityError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except ValidationError as exc:
        for error in exc.errors():
            location = ".".join(str(part) for part in error["loc"]) or "config"
            logger.error("%s: %s", location, error["msg"])
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
