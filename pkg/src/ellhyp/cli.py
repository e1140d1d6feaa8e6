"""Command-line entry point: ``ellhyp [suite ...] [options]``.

Exit status is 0 when every verdict is pass, inconclusive or untestable,
1 when any check fails and 2 for configuration errors.
"""
from __future__ import annotations

import argparse
import sys

from . import harness
from .harness import ConfigError, SuiteConfig


def _override(kind):
    def parse(text):
        key, sep, val = text.rpartition("=")
        key = key.strip() if sep else "*"
        try:
            return key, kind(val)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad value {val!r}") from None

    return parse


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ellhyp", description="Run numerical identity checks and write a report.")
    ap.add_argument("suites", nargs="*", help="suite ids to run (default: all, or those named in --config)")
    ap.add_argument("--list", action="store_true", help="list suite ids and exit")
    ap.add_argument("--tol", action="append", default=[], type=_override(float), metavar="[ID=]VALUE",
                    help="tolerance override; ID is a suite id or a check id prefix (repeatable)")
    ap.add_argument("--nodes", action="append", default=[], type=_override(int), metavar="[ID=]N",
                    help="initial quadrature node count override (repeatable)")
    ap.add_argument("--seed", type=int, default=None, help="seed for random parameter points (default 0)")
    ap.add_argument("--out", default=None, help="write the report here instead of stdout")
    ap.add_argument("--format", choices=("json", "csv"), default=None)
    ap.add_argument("--config", default=None, help="key = value parameter file")
    ap.add_argument("--workers", type=int, default=None, help="suites run concurrently (default 1)")
    ap.add_argument("--timestamps", action="store_true",
                    help="record start time and wall times; the report is then no longer reproducible")
    return ap


def make_config(args) -> SuiteConfig:
    cfg = SuiteConfig()
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc}") from exc
        params = harness.parse_param_file(text)
        cfg = harness.config_from_params(params, cfg)
        if "suites" not in params:
            cfg.suites = sorted(harness.SUITES)
    else:
        cfg.suites = sorted(harness.SUITES)
    if args.suites:
        cfg.suites = list(args.suites)
    cfg.tolerances.update(dict(args.tol))
    cfg.nodes.update(dict(args.nodes))
    for name in ("seed", "out", "format", "workers"):
        val = getattr(args, name)
        if val is not None:
            setattr(cfg, name, val)
    cfg.timestamps = cfg.timestamps or args.timestamps
    return cfg.validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.list:
        for sid in sorted(harness.SUITES):
            print(f"{sid:18s} {harness.SUITES[sid].description}")
        return 0
    try:
        cfg = make_config(args)
    except ConfigError as exc:
        print(f"ellhyp: error: {exc}", file=sys.stderr)
        return 2
    rows = harness.run_suites(cfg)
    try:
        text = harness.emit_report(rows, cfg)
    except OSError as exc:
        print(f"ellhyp: error: cannot write report: {exc}", file=sys.stderr)
        return 2
    if not cfg.out:
        sys.stdout.write(text)
    for _, _, rep in rows:
        if rep.verdict != "pass":
            print(str(rep), file=sys.stderr)
    return harness.exit_status(rows)


if __name__ == "__main__":
    sys.exit(main())
