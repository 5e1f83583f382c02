"""Command-line front end.

Subcommands map to the three sweep kinds plus the invariant check suite.
Exit codes: 0 success, 1 check-suite failure, 2 configuration problem,
3 sweep finished but some rows failed (their details are in the manifest).
"""

from __future__ import annotations

import argparse
import pathlib
import sys

from ..channel import ConfigError, SeedSpec
from .checks import run_checks
from .config import (
    ConfigFileError,
    SweepKind,
    default_spec,
    override,
    parse_config,
)
from .runner import emit_csv, manifest_path, run_sweep

__all__ = ["main", "build_parser"]

_SWEEP_COMMANDS = {
    "sweep-snr": (SweepKind.SNR_SWEEP, "sweep_snr.csv"),
    "sweep-n": (SweepKind.ANTENNA_SWEEP, "sweep_n.csv"),
    "grid-nk": (SweepKind.GRID_NK, "grid_nk.csv"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abcrate",
        description=(
            "Ergodic-rate laboratory for a cooperative backscatter link: "
            "Monte Carlo sweeps with matching closed-form columns."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "sweep-snr": "rates versus transmit SNR (dB axis, power swept)",
        "sweep-n": "rates versus receive antenna count",
        "grid-nk": "rate ceiling over the (N, K) plane",
    }
    for command, (kind, out_name) in _SWEEP_COMMANDS.items():
        sp = sub.add_parser(command, help=helps[command])
        sp.add_argument("--config", type=pathlib.Path, metavar="PATH",
                        help="sweep file; defaults applied when omitted")
        sp.add_argument("--seed", type=int, metavar="U64",
                        help="master seed override")
        sp.add_argument("--samples", type=int, metavar="N",
                        help="Monte Carlo draws per axis point")
        sp.add_argument("--out", type=pathlib.Path, default=pathlib.Path(out_name),
                        metavar="PATH", help=f"CSV path (default {out_name})")
        mode = sp.add_mutually_exclusive_group()
        mode.add_argument("--crn", dest="crn", action="store_const", const=True,
                          default=None,
                          help="common random numbers across points (default)")
        mode.add_argument("--independent", dest="crn", action="store_const",
                          const=False, help="fresh substream per axis point")
        sp.add_argument("--no-plot", action="store_true",
                        help="skip the PNG companion figure")
        sp.set_defaults(kind=kind)
    vp = sub.add_parser("validate", help="run the named invariant checks")
    vp.add_argument("--config", type=pathlib.Path, metavar="PATH",
                    help="optional file with kind = Validate (seed source)")
    vp.add_argument("--seed", type=int, metavar="U64",
                    help="master seed for the stochastic checks")
    return parser


def _run_validate(args) -> int:
    seed = SeedSpec(1234)
    if args.config is not None:
        spec = parse_config(args.config)
        if spec.kind is not SweepKind.VALIDATE:
            print(
                f"config error: {args.config} has kind {spec.kind.value}; "
                "the validate command needs kind = Validate",
                file=sys.stderr,
            )
            return 2
        seed = spec.seed
    if args.seed is not None:
        seed = SeedSpec(args.seed)
    outcomes = run_checks(seed)
    width = max(len(o.name) for o in outcomes)
    for o in outcomes:
        status = "PASS" if o.passed else "FAIL"
        print(f"{o.name:<{width}}  {status}  {o.detail}")
    n_fail = sum(not o.passed for o in outcomes)
    print(f"{len(outcomes)} checks: {len(outcomes) - n_fail} passed, {n_fail} failed")
    return 1 if n_fail else 0


def _run_sweep_command(args) -> int:
    if args.config is not None:
        spec = parse_config(args.config)
        if spec.kind is not args.kind:
            print(
                f"config error: {args.config} has kind {spec.kind.value}, "
                f"but this command runs {args.kind.value}",
                file=sys.stderr,
            )
            return 2
    else:
        spec = default_spec(args.kind)
    spec = override(spec, seed=args.seed, n_samples=args.samples, crn=args.crn)

    result = run_sweep(spec)
    emit_csv(result, args.out)
    written = [str(args.out), str(manifest_path(args.out))]
    if not args.no_plot:
        from .plots import render_plots  # defer the matplotlib import

        written += [str(p) for p in render_plots(result, args.out)]
    ok = len(result.rows) - len(result.failed_rows)
    print(f"{ok}/{len(result.rows)} axis points completed; wrote " + ", ".join(written))
    for row in result.failed_rows:
        print(f"  failed at {row.axis}: {row.error}", file=sys.stderr)
    return 3 if result.failed_rows else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return _run_validate(args)
        return _run_sweep_command(args)
    except (ConfigFileError, ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
