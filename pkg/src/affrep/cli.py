"""Command line entry point: ``affrep check | run <exp> | run-all | report``.

Exit codes: 0 when everything passes, 1 on a failing check or experiment,
2 on an invalid configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiments import (
    CATALOG,
    ConfigError,
    ExperimentConfig,
    canonical_json,
    emit,
    exit_code,
    run,
    run_all,
    run_checks,
)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, help="dimension of R^m (2 or 3)")
    common.add_argument("--degree", type=int, help="polynomial degree bound D (2..6)")
    common.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"), help="Euler weight window")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")
    common.add_argument("--config", type=Path, help="JSON file with ExperimentConfig fields")
    common.add_argument("--format", choices=["json", "csv", "md"], help="output format")

    p = argparse.ArgumentParser(prog="affrep", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="run the axiom and validation suite")
    r = sub.add_parser("run", parents=[common], help="run one experiment")
    r.add_argument("experiment", choices=sorted(CATALOG))
    sub.add_parser("run-all", parents=[common], help="run every experiment")
    rep = sub.add_parser("report", parents=[common], help="run every experiment (or read --input) and format")
    rep.add_argument("--input", type=Path, help="existing JSON report to reformat")
    sub.add_parser("list", help="list experiments")
    return p


def _config(args) -> ExperimentConfig:
    data = {}
    if getattr(args, "config", None):
        try:
            data = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    cfg = ExperimentConfig.from_dict(data)
    for name in ("m", "degree", "format"):
        val = getattr(args, name, None)
        if val is not None:
            setattr(cfg, name, val)
    if getattr(args, "window", None):
        cfg.window = tuple(args.window)
    if getattr(args, "experiment", None):
        cfg.experiment = args.experiment
    return cfg.validate()


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list":
        for name in sorted(CATALOG):
            print(f"{name}: {CATALOG[name][3]}")
        return 0
    try:
        cfg = _config(args)
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2
    if args.command == "check":
        results = run_checks(cfg.m)
        for r in results:
            print(f"{'PASS' if r['pass'] else 'FAIL'}  {r['check']}  {r['detail']}".rstrip(), file=sys.stderr)
        _write(canonical_json(results), args.out)
        return 0 if all(r["pass"] for r in results) else 1
    if args.command == "run":
        reports = [run(cfg)]
    elif args.command == "run-all":
        reports = run_all(cfg)
    else:
        if args.input:
            try:
                data = json.loads(args.input.read_text())
            except (OSError, json.JSONDecodeError) as exc:
                print(f"invalid configuration: cannot read {args.input}: {exc}", file=sys.stderr)
                return 2
            reports = data["reports"] if isinstance(data, dict) else data
        else:
            reports = run_all(cfg)
    for r in reports:
        print(f"{'PASS' if r['pass'] else 'FAIL'}  {r['experiment']}", file=sys.stderr)
    _write(emit(reports, cfg.format), args.out)
    return exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
