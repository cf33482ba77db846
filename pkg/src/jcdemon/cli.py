"""Command-line entry point.

Exit codes: 0 ok, 1 config error, 2 truncation error, 3 invariant violation.
"""

from __future__ import annotations

import argparse
import sys

from .config import METHODS, SCENARIOS, build_config, parse_bloch, parse_config_file
from .errors import ConfigError, InvariantViolation, TruncationError
from .runner import run_compare, run_scenario

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_TRUNCATION = 2
EXIT_INVARIANT = 3


def _add_shared_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--n0", type=float)
    p.add_argument("--nbar", type=float)
    p.add_argument("--phi0", type=float)
    p.add_argument("--nph", type=int, dest="n_ph", help="Fock truncation (0 = auto rule)")
    p.add_argument("--gt-max", type=float, dest="gt_max")
    p.add_argument("--steps", type=int)
    p.add_argument("--init", help="initial qubit Bloch vector rx,ry,rz")
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--rank-tol", type=float, dest="rank_tol")
    p.add_argument("--out", required=True, dest="out_path", help="output CSV path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jcdemon",
        description="Resonant qubit-cavity simulator with a thermodynamic ledger.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario and write its ledger CSV")
    p_run.add_argument("--scenario", choices=SCENARIOS, default="custom")
    _add_shared_flags(p_run)

    p_cmp = sub.add_parser("compare", help="exact-vs-oracle deviation table across n0")
    p_cmp.add_argument("--n0-list", required=True, dest="n0_list",
                       help="comma-separated n0 values, e.g. 25,100,400")
    _add_shared_flags(p_cmp)
    return parser


def _gather(args: argparse.Namespace) -> dict:
    overrides = {
        "n0": args.n0,
        "nbar": args.nbar,
        "phi0": args.phi0,
        "n_ph": args.n_ph,
        "gt_max": args.gt_max,
        "steps": args.steps,
        "method": args.method,
        "rank_tol": args.rank_tol,
        "out_path": args.out_path,
    }
    if args.init is not None:
        overrides["init_qubit"] = parse_bloch(args.init)
    return overrides


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_values = parse_config_file(args.config) if args.config else {}
        if args.command == "run":
            scenario = file_values.pop("scenario", args.scenario)
            cfg = build_config(scenario, file_values, **_gather(args))
            report = run_scenario(cfg)
            print(
                f"wrote {cfg.out_path}: {len(report.records)} rows, "
                f"method={report.method}, n_ph={report.n_ph}"
            )
        else:
            try:
                n0_list = [float(v) for v in args.n0_list.split(",") if v.strip()]
            except ValueError as exc:
                raise ConfigError(f"bad --n0-list {args.n0_list!r}") from exc
            if not n0_list:
                raise ConfigError("--n0-list is empty")
            file_values.pop("scenario", None)
            cfg = build_config("custom", file_values, **_gather(args))
            result = run_compare(cfg, n0_list)
            for row in result.rows:
                print(
                    f"n0={row['n0']:g}: dev_Pe={row['dev_Pe']:.3e} "
                    f"dev_Ceg={row['dev_Ceg']:.3e} dev_QC1={row['dev_QC1']:.3e}"
                )
            print(f"wrote {cfg.out_path}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TruncationError as exc:
        print(f"truncation error: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
