"""Command-line front end.

    qtruth run CONFIG.json [--json]
    qtruth selftest [--seed N] [--tau-eq X] [--json]
    qtruth dump-kernels --n N [--output PATH]

Exit codes: 0 success, 1 a check failed, 2 unknown scenario kind,
3 malformed config, 4 output could not be written.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import acceptance, quantize
from .errors import ConfigError
from .runner import SEED_ENV, OutputError, ScenarioConfig, UnknownKindError, run, to_csv, write_output

EXIT_OK, EXIT_CHECK, EXIT_KIND, EXIT_CONFIG, EXIT_OUTPUT = 0, 1, 2, 3, 4


def _cmd_run(args) -> int:
    try:
        cfg = ScenarioConfig.load(args.config)
        report, _ = run(cfg)
    except UnknownKindError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_KIND
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OutputError as e:
        print(f"output error: {e}", file=sys.stderr)
        return EXIT_OUTPUT
    if args.json:
        print(json.dumps(report.summary(args.timing), indent=2))
    else:
        for name, ok in report.checks.items():
            print(f"[{'PASS' if ok else 'FAIL'}] {name}")
        print(f"{report.kind}: {len(report.rows)} rows")
    return EXIT_OK if report.passed else EXIT_CHECK


def _cmd_selftest(args) -> int:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get(SEED_ENV, acceptance.DEFAULT_SEED))
    results = acceptance.run_all(seed, args.tau_eq)
    if args.json:
        print(json.dumps({"seed": seed, "criteria": [
            {"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
            "passed": all(r.passed for r in results)}, indent=2))
    else:
        for r in results:
            print(r.line())
        n_ok = sum(r.passed for r in results)
        print(f"{n_ok}/{len(results)} criteria passed (seed {seed})")
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


def _cmd_dump_kernels(args) -> int:
    try:
        lat = quantize.Lattice(args.n)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    text = to_csv(quantize.kernels_csv_header(lat.n), quantize.kernels_csv_rows(lat))
    if args.output:
        try:
            write_output(text, args.output)
        except OutputError as e:
            print(f"output error: {e}", file=sys.stderr)
            return EXIT_OUTPUT
    else:
        sys.stdout.write(text)
    if args.json:
        print(json.dumps({"kind": "dump-kernels", "n": lat.n, "row_count": lat.n * lat.n}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qtruth", description="Truth-operator scenarios and self-checks")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a scenario config")
    r.add_argument("config")
    r.add_argument("--json", action="store_true", help="print a JSON summary to stdout")
    r.add_argument("--timing", action="store_true", help="include wall time in the JSON summary")
    r.set_defaults(func=_cmd_run)

    s = sub.add_parser("selftest", help="run the acceptance checks")
    s.add_argument("--seed", type=int, default=None, help=f"seed (default: ${SEED_ENV} or built-in)")
    s.add_argument("--tau-eq", type=float, default=None, help="tighten every tolerance to at most this value")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=_cmd_selftest)

    d = sub.add_parser("dump-kernels", help="write all momentum kernels of an n-site lattice as CSV")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--output", default=None)
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=_cmd_dump_kernels)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
