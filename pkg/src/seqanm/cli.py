"""Command-line front end: single trials, sweeps, and bound evaluation.

Subcommands:

- ``trial``: run one seeded trial from a config file and write its rows.
- ``sweep-pilots`` / ``sweep-paths``: run a Monte Carlo sweep over the
  pilot count or the path count and write the full table.
- ``bounds``: print the closed-form MSE bounds for given parameters.

Every config key can be overridden with a flag of the same name
(``--sigma2 0.2``, ``--sdp.tol 1e-6``, ...). Exit status is 0 on success
and 2 on configuration errors.
"""

import argparse
import sys

from .bounds import sequential_bound, universal_bound
from .harness import (CONFIG_KEYS, ConfigError, ExperimentConfig, SweepTable,
                      load_config, run_sweep, run_trial, write_csv)


def _add_override_flags(parser: argparse.ArgumentParser):
    for key, (attr, cast) in CONFIG_KEYS.items():
        parser.add_argument(f"--{key}", dest=f"cfg_{attr}", type=cast,
                            default=None, metavar="V",
                            help=f"override config key {key}")


def _collect_overrides(args) -> dict:
    return {attr: getattr(args, f"cfg_{attr}")
            for _, (attr, _) in CONFIG_KEYS.items()
            if getattr(args, f"cfg_{attr}", None) is not None}


def _load(args, forced_sweep=None) -> ExperimentConfig:
    overrides = _collect_overrides(args)
    if forced_sweep is not None:
        overrides["sweep"] = forced_sweep
    if getattr(args, "values", None):
        overrides["sweep_values"] = tuple(int(v) for v in args.values.replace(",", " ").split())
    if args.config is not None:
        return load_config(args.config, overrides)
    return ExperimentConfig(**overrides)


def _fmt(x: float) -> str:
    return format(x, ".17g")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="seqanm",
        description="Sequential MMV atomic-norm channel estimation benchmark")
    sub = parser.add_subparsers(dest="command", required=True)

    p_trial = sub.add_parser("trial", help="run a single seeded trial")
    p_trial.add_argument("--config", required=True, help="path to key=value config file")
    p_trial.add_argument("--trial-index", type=int, required=True)
    p_trial.add_argument("--out", default=None, help="output CSV path")
    _add_override_flags(p_trial)

    for name, axis in (("sweep-pilots", "pilots"), ("sweep-paths", "paths")):
        p = sub.add_parser(name, help=f"Monte Carlo sweep over the {axis} axis")
        p.add_argument("--config", default=None, help="path to key=value config file")
        p.add_argument("--values", default=None,
                       help="comma-separated sweep values (overrides config)")
        p.add_argument("--out", default=None, help="output CSV path")
        _add_override_flags(p)

    p_bounds = sub.add_parser("bounds", help="print closed-form MSE bounds")
    p_bounds.add_argument("--L", type=int, required=True)
    p_bounds.add_argument("--sigma2", type=float, required=True)
    p_bounds.add_argument("--Mp", type=int, required=True)
    p_bounds.add_argument("--Np", type=int, required=True)
    p_bounds.add_argument("--M", type=int, default=None,
                          help="antenna count, enables the sequential bounds")

    args = parser.parse_args(argv)

    try:
        if args.command == "bounds":
            print(f"universal {_fmt(universal_bound(args.L, args.sigma2, args.Mp, args.Np))}")
            if args.M is not None:
                det, app = sequential_bound(args.L, args.sigma2, args.M, args.Mp, args.Np)
                print(f"sequential_detailed {_fmt(det)}")
                print(f"sequential_approx {_fmt(app)}")
            return 0

        if args.command == "trial":
            config = _load(args)
            result = run_trial(config, args.trial_index)
            table = SweepTable(config=config, results=[result])
            out = args.out or f"trial_{args.trial_index}.csv"
            write_csv(table, out)
            for name in sorted(result.mse):
                print(f"{name} mse {_fmt(result.mse[name])}")
            print(f"wrote {out}")
            return 0

        axis = "pilots" if args.command == "sweep-pilots" else "paths"
        config = _load(args, forced_sweep=axis)
        table = run_sweep(config)
        out = args.out or f"sweep_{axis}.csv"
        write_csv(table, out)
        for row in table.summary():
            print(f"{axis}={row['sweep_value']} {row['estimator']}: "
                  f"median {_fmt(row['median_mse'])} mean {_fmt(row['mean_mse'])}")
        print(f"wrote {out}")
        return 0
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
