# Command-line entry point: sweep-users / sweep-rate / selftest.
from __future__ import annotations

import argparse
import sys

from .config import ConfigError, NetworkConfig, parse_config_file
from .experiment import (ExperimentError, ExperimentSpec, Strategy, emit_csv,
                         run_experiment)

DEFAULT_STRATEGIES = "sp-ef-wsinm,sp-lf-wsinm,tp-ef-wsinm,tp-lf-wsinm,sp-ef-infinite"


def _add_common(sub: argparse.ArgumentParser, axis: str) -> None:
    sub.add_argument("--config", metavar="PATH",
                     help="flat key=value config file (defaults: L=12, N=10, K=20)")
    sub.add_argument("--seed", type=int, default=None, metavar="U64",
                     help="master RNG seed (overrides config)")
    sub.add_argument("--trials", type=int, default=None, metavar="N",
                     help="Monte-Carlo drops per sweep point (overrides config)")
    sub.add_argument("--out", default="results.csv", metavar="PATH",
                     help="output CSV path")
    sub.add_argument("--strategies", default=DEFAULT_STRATEGIES, metavar="LIST",
                     help="comma list of path-allocation-compression triples, "
                          "e.g. sp-ef-eiu,tp-lf-wsinm")
    sub.add_argument("--sweep", choices=("users", "rate"), default=axis,
                     help=argparse.SUPPRESS)
    sub.add_argument("--values", metavar="LIST", required=True,
                     help=f"comma list of sweep values ({axis})")


def _build_spec(args) -> ExperimentSpec:
    base = parse_config_file(args.config) if args.config else NetworkConfig()
    if args.seed is not None:
        base = base.replace(rng_seed=args.seed)
    if args.trials is not None:
        base = base.replace(trials=args.trials)
    strategies = tuple(Strategy.parse(s) for s in args.strategies.split(","))
    if args.sweep == "users":
        values = tuple(int(v) for v in args.values.split(","))
    else:
        values = tuple(float(v) for v in args.values.split(","))
    return ExperimentSpec(base=base, sweep=args.sweep, values=values,
                          strategies=strategies, trials=base.trials,
                          seed=base.rng_seed)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="seqcf",
        description="Monte-Carlo simulator for the uplink of a cell-free "
                    "massive MIMO network with a capacity-limited sequential "
                    "fronthaul chain.")
    subs = parser.add_subparsers(dest="command", required=True)

    su = subs.add_parser("sweep-users", help="sum SE vs number of users")
    _add_common(su, "users")
    sr = subs.add_parser("sweep-rate", help="sum SE vs total fronthaul budget R_T")
    _add_common(sr, "rate")
    st = subs.add_parser("selftest", help="run the built-in oracle/invariant checks")
    st.add_argument("--seed", type=int, default=0)

    args = parser.parse_args(argv)

    if args.command == "selftest":
        from .selftest import run_selftest
        return 0 if run_selftest(args.seed) else 1

    try:
        spec = _build_spec(args)
        rows = run_experiment(spec)
        emit_csv(rows, args.out)
    except (ConfigError, ExperimentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
