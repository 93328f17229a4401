"""Command-line interface.

Subcommands:
  run            execute a configured trial batch and write artifacts
  feasible-sets  print the feasible shepherd-line intervals for a config
  replay         re-render a logged trial CSV as a trajectory SVG

Exit codes: 0 success, 1 configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .errors import ConfigError, SinglingError
from .experiment import (
    load_config,
    read_trial_csv,
    run_trials,
    write_outputs,
)
from .separation import feasible_sets
from .svgplot import trajectory_plot


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ConfigError instead of
    exiting, so main() controls the exit code."""

    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="singling", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a trial batch from a config file")
    run_p.add_argument("--config", required=True, help="JSON config file")
    run_p.add_argument("--target", help="target label (A-E) or sheep id")
    run_p.add_argument("--method", choices=("proposed", "bipartite"))
    run_p.add_argument("--trials", type=int)
    run_p.add_argument("--seed", type=int, help="base seed (trial i uses seed+i)")
    run_p.add_argument("--max-steps", type=int, dest="max_steps")
    run_p.add_argument("--out", help="output directory")
    run_p.add_argument("--workers", type=int)

    fs_p = sub.add_parser("feasible-sets",
                          help="print feasible shepherd-line intervals")
    fs_p.add_argument("--config", required=True, help="JSON config file")

    rp_p = sub.add_parser("replay", help="re-render a trial CSV as SVG")
    rp_p.add_argument("--csv", required=True, help="trial CSV to read")
    rp_p.add_argument("--svg", required=True, help="SVG file to write")
    rp_p.add_argument("--target", type=int, default=None,
                      help="sheep id to highlight")
    return parser


def _apply_overrides(config, args):
    changes = {}
    if args.target is not None:
        changes["target"] = int(args.target) if args.target.isdigit() else args.target
    if args.method is not None:
        changes["method"] = args.method
    if args.trials is not None:
        changes["trials"] = args.trials
    if args.seed is not None:
        changes["base_seed"] = args.seed
    if args.max_steps is not None:
        changes["step_budget"] = args.max_steps
    if args.out is not None:
        changes["output_dir"] = args.out
    if args.workers is not None:
        changes["workers"] = args.workers
    if "trials" in changes:
        # snapshots indexed beyond the new trial count would be rejected
        kept = tuple(i for i in config.snapshot_trials if i < changes["trials"])
        changes["snapshot_trials"] = kept
    if not changes:
        return config
    try:
        return dataclasses.replace(config, **changes)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid override: {exc}") from exc


def _cmd_run(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    summary = run_trials(config)
    manifest = write_outputs(summary, config.output_dir)
    n_success = sum(1 for r in summary.results if r.success)
    print(f"method={config.method} target={config.target} "
          f"trials={config.trials} backend={summary.backend}")
    print(f"success: {n_success}/{config.trials} ({summary.success_rate:.0%})")
    if summary.mean_steps_to_separation is not None:
        print(f"mean steps to separation: {summary.mean_steps_to_separation:.1f}")
    ctm = summary.connectivity_time_mean
    cf = summary.connectivity_final
    if ctm["mean"] is not None:
        print(f"connectivity time-mean: mean={ctm['mean']:.4f} min={ctm['min']:.4f}")
        print(f"connectivity final:     mean={cf['mean']:.4f} min={cf['min']:.4f}")
    errors = [r for r in summary.results if r.error]
    if errors:
        print(f"recorded errors in {len(errors)} trial(s)")
    total = sum(len(v) for v in manifest.values())
    print(f"wrote {total} files to {config.output_dir}")
    return 0


def _cmd_feasible_sets(args) -> int:
    config = load_config(args.config)
    sets = feasible_sets(config.params)
    print(f"threshold behind/beyond: {sets.threshold_behind:.12g}")
    print(f"threshold between:       {sets.threshold_between:.12g}")
    for name, group in (("behind", sets.behind), ("between", sets.between),
                        ("beyond", sets.beyond)):
        for iv in group:
            print(f"{name:8s} ({iv.lo:.12g}, {iv.hi:.12g})")
    return 0


def _cmd_replay(args) -> int:
    data = read_trial_csv(args.csv)
    trajectory_plot(args.svg, data["positions"], data["shepherd"],
                    target=args.target, title=f"replay of {args.csv}")
    print(f"wrote {args.svg}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "feasible-sets":
            return _cmd_feasible_sets(args)
        if args.command == "replay":
            return _cmd_replay(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (SinglingError, OSError, ValueError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
