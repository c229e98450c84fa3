"""Command line entry point: ``ladderlab <command> ...``.

Exit codes: 0 when every executed check passes, 2 when any check fails or
cannot be computed, 1 for usage and configuration errors (including guard
violations).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from ..errors import (BracketError, CacheError, ConvergenceError, DomainError, GuardViolation,
                      LadderLabError, ZeroTableError)
from ..ladder import build_ladder
from ..zeta_core import OmegaKind
from .checks import run_check
from .config import ConfigError, RunConfig, load_json
from .io import dumps_record, save_ladder_cache, write_json
from .sweep import parse_sweep, run_sweep
from .tables import TableProvider, cache_path

EXIT_PASS, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default, which this CLI reserves for failed checks
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("run configuration")
    g.add_argument("--omega", choices=[o.value for o in OmegaKind], default=None)
    g.add_argument("--t-anchor", type=float, default=None, dest="t_anchor",
                   help="fixed ladder anchor (default: each check anchors at its T)")
    g.add_argument("--guard-fraction", type=float, default=None, dest="guard_fraction")
    g.add_argument("--k0", type=int, default=None)
    g.add_argument("--cache-dir", type=Path, default=None, dest="cache_dir")
    g.add_argument("--threads", type=int, default=None)
    g.add_argument("--report", type=Path, default=None, help="also write the JSON record here")
    g.add_argument("-v", "--verbose", action="store_true")


def _check_parser(sub, name: str, help: str, kind: str, args: list[tuple[str, type, bool]]):
    p = sub.add_parser(name, help=help)
    p.set_defaults(kind=kind)
    for flag, typ, required in args:
        p.add_argument(f"--{flag}", type=typ, required=required, dest=flag.replace("-", "_"))
    _common(p)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ladderlab", description="Jacob's ladder identity checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ladder = sub.add_parser("ladder", help="ladder table operations")
    lsub = ladder.add_subparsers(dest="action", required=True, parser_class=_Parser)
    build = lsub.add_parser("build", help="integrate phi_1 on [t-min, t-max] and save it")
    build.add_argument("--t-min", type=float, required=True, dest="t_min")
    build.add_argument("--t-max", type=float, required=True, dest="t_max")
    build.add_argument("--out", type=Path, default=None,
                       help="output file (default: the cache directory)")
    _common(build)

    verify = sub.add_parser("verify", help="exact energy identities")
    vsub = verify.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    _check_parser(vsub, "unit", "energy of g equals g", "unit",
                  [("T", float, True), ("g", float, True), ("k", int, True)])
    _check_parser(vsub, "additivity", "energy of a sum of parts", "additivity",
                  [("T", float, True), ("parts", str, True), ("k", int, True)])
    _check_parser(vsub, "multiplicativity", "energy of a product of factors", "multiplicativity",
                  [("T", float, True), ("factors", str, True), ("k", int, True)])
    _check_parser(vsub, "orthogonality", "Fourier system under the ladder", "orthogonality",
                  [("T", float, True), ("l", float, True), ("m", str, True), ("n", str, True),
                   ("k", int, True)])
    _check_parser(vsub, "factorization", "prime-power factorization of n", "factorization",
                  [("T", float, True), ("n", int, True), ("k", int, True), ("k-assign", str, False)])

    mean = [("T", float, True), ("g1", float, True), ("g2", float, True),
            ("k1", int, False), ("k2", int, False), ("tolerance", float, False)]
    _check_parser(sub, "example1", "mean-value ratio for a sum", "example1",
                  mean + [("k", int, True)])
    _check_parser(sub, "example2", "mean-value ratio for a product", "example2", mean)
    _check_parser(sub, "curve", "arc length of the Riemann curve", "curve",
                  [("T", float, True), ("H", float, True), ("zeros", Path, False)])
    _check_parser(sub, "corollary3", "arc length against ladder energies", "corollary3",
                  [("T", float, True), ("H", float, True), ("k", int, True), ("k-assign", str, False)])

    sweep = sub.add_parser("sweep", help="run a JSON-declared matrix of checks")
    sweep.add_argument("--config", type=Path, required=True)
    sweep.add_argument("--out", type=Path, default=None, help="directory for reports (default: sweep_out)")
    _common(sweep)
    return parser


_CONFIG_FLAGS = ("omega", "t_anchor", "guard_fraction", "k0", "cache_dir", "threads")


def _config(args, base: RunConfig | None = None) -> RunConfig:
    overrides = {f: getattr(args, f) for f in _CONFIG_FLAGS}
    return (base or RunConfig()).updated(**overrides)


def _emit(record: dict, report_path: Path | None) -> None:
    sys.stdout.write(dumps_record(record))
    if report_path is not None:
        write_json(record, report_path)


def _cmd_ladder_build(args) -> int:
    cfg = _config(args)
    table = build_ladder(args.t_min, args.t_max, cfg.omega)
    out = args.out or cache_path(cfg.cache_dir, cfg.omega, table.anchor_t, table.t_hi)
    save_ladder_cache(table, out)
    _emit({"path": str(out), "omega": cfg.omega.value, "t_lo": table.t_lo, "t_hi": table.t_hi,
           "phi_lo": table.phi_lo, "phi_hi": table.phi_hi, "nodes": len(table)}, args.report)
    return EXIT_PASS


def _cmd_check(args) -> int:
    cfg = _config(args)
    params = {k: v for k, v in vars(args).items() if v is not None}
    params["check"] = args.kind
    if "zeros" in params:
        params["zeros"] = str(params["zeros"])
    report, _ = run_check(params, cfg, TableProvider(cfg))
    _emit(report.to_record(), args.report)
    return EXIT_PASS if report.passed else EXIT_FAIL


def _cmd_sweep(args) -> int:
    base, cells = parse_sweep(load_json(args.config))
    cfg = _config(args, base)
    out = args.out or Path("sweep_out")
    result = run_sweep(cfg, cells, out)
    summary = {"cells": len(result.rows), "passed": sum(r["pass"] is True for r in result.rows),
               "failed": sum(r["pass"] is False for r in result.rows),
               "errors": len(result.errors), "out": str(out)}
    _emit(summary, args.report)
    return EXIT_PASS if result.all_passed else EXIT_FAIL


def cli_dispatch(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run the command and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "ladder":
        handler = _cmd_ladder_build
    elif args.command == "sweep":
        handler = _cmd_sweep
    else:
        handler = _cmd_check
    try:
        return handler(args)
    except (BracketError, ConvergenceError) as exc:
        print(f"ladderlab: check could not be computed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except GuardViolation as exc:
        print(f"ladderlab: guard violation: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, DomainError, ZeroTableError, CacheError, ValueError, OSError) as exc:
        print(f"ladderlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LadderLabError as exc:
        print(f"ladderlab: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(cli_dispatch())
