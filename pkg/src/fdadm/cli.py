"""Command-line experiment runner.

Subcommands: ``validate``, ``secrecy``, ``ber``, ``memratio``, ``bench``.
Sweeps emit CSV (to ``--out`` or stdout); validate prints a residual
table and exits nonzero on failure. Exit codes: 0 success, 1
validation/invariant failure, 2 input error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .complexity import DEFAULT_BENCH_REPS, DEFAULT_BENCH_SIZES
from .precoding import Method
from .records import records_to_csv, write_records
from .scenario_io import LoadedScenario, ScenarioError, load_scenario
from .sweeps import (
    DEFAULT_SYMBOLS,
    run_bench,
    run_ber_sweep,
    run_memratio_sweep,
    run_secrecy_sweep,
    run_validate,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2


def _add_common(sub: argparse.ArgumentParser, scenario_required: bool = True) -> None:
    sub.add_argument("--scenario", required=scenario_required,
                     help="path to a scenario JSON file")
    sub.add_argument("--out", help="CSV output path (default: stdout)")
    sub.add_argument("--seed", type=int, help="override the scenario seed")
    sub.add_argument("--method", choices=["zf", "svd", "both"],
                     help="override the scenario's method selection")
    sub.add_argument("--tol", type=float, default=1e-9,
                     help="residual tolerance for validation checks")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdadm",
        description="Range-angle directional modulation experiments over a "
                    "multi-carrier frequency diverse array",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("validate", help="check precoder synthesis invariants")
    _add_common(p)

    p = subs.add_parser("secrecy", help="secrecy rate versus SNR")
    _add_common(p)
    p.add_argument("--snr-min", type=float, default=0.0)
    p.add_argument("--snr-max", type=float, default=20.0)
    p.add_argument("--snr-step", type=float, default=1.0)
    p.add_argument("--eves", type=int, default=2,
                   help="random eavesdroppers per trial")
    p.add_argument("--trials", type=int, default=200,
                   help="eavesdropper placements per SNR point")

    p = subs.add_parser("ber", help="bit error rate sweeps")
    _add_common(p)
    p.add_argument("--mode", choices=["angle", "range", "grid"], default="angle")
    p.add_argument("--symbols", type=int, default=DEFAULT_SYMBOLS,
                   help="symbols per sweep point")

    p = subs.add_parser("memratio", help="memory footprint ratio sweeps")
    _add_common(p)
    p.add_argument("--vary", choices=["n", "l", "k"], required=True)
    p.add_argument("--from", dest="lo", type=int, required=True)
    p.add_argument("--to", dest="hi", type=int, required=True)

    p = subs.add_parser("bench", help="orthogonal-matrix construction timing")
    _add_common(p, scenario_required=False)
    p.add_argument("--reps", type=int, default=DEFAULT_BENCH_REPS,
                   help="timed repetitions per pass")

    return parser


def _apply_overrides(loaded: LoadedScenario, args) -> LoadedScenario:
    if args.method is not None:
        methods = ((Method.ZF, Method.SVD) if args.method == "both"
                   else (Method(args.method),))
        loaded = replace(loaded, methods=methods)
    return loaded


def _emit(records, out_path) -> None:
    if out_path:
        write_records(out_path, records)
    else:
        sys.stdout.write(records_to_csv(records))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.seed is not None and not 0 <= args.seed < 2 ** 64:
            raise ScenarioError(
                f"--seed must be an unsigned 64-bit value, got {args.seed}")
        loaded = None
        if args.scenario is not None:
            loaded = _apply_overrides(
                load_scenario(args.scenario, seed_override=args.seed), args)

        if args.command == "validate":
            ok, lines, records = run_validate(loaded, tol=args.tol)
            width = max(len(line.name) for line in lines)
            for line in lines:
                status = "pass" if line.passed else "FAIL"
                print(f"{str(line.method):>4s}  {line.name:<{width}s}  "
                      f"residual {line.value:.3e}  (tol {line.threshold:.1e})  "
                      f"{status}")
            if args.out:
                write_records(args.out, records)
            print("validation " + ("passed" if ok else "FAILED"))
            return EXIT_OK if ok else EXIT_FAILURE

        if args.command == "secrecy":
            records = run_secrecy_sweep(
                loaded, snr_db_min=args.snr_min, snr_db_max=args.snr_max,
                snr_db_step=args.snr_step, n_eves=args.eves,
                n_trials=args.trials,
            )
        elif args.command == "ber":
            records = run_ber_sweep(loaded, mode=args.mode,
                                    n_symbols=args.symbols)
        elif args.command == "memratio":
            records = run_memratio_sweep(loaded, vary=args.vary,
                                         lo=args.lo, hi=args.hi)
        else:  # bench
            seed = (args.seed if args.seed is not None
                    else loaded.scenario.seed if loaded is not None else 0)
            records = run_bench(sizes=DEFAULT_BENCH_SIZES, reps=args.reps,
                                seed=seed)
        _emit(records, args.out)
        return EXIT_OK
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    raise SystemExit(main())
