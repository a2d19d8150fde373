"""Command-line interface: run, validate and list experiment presets.

    floqxy run --preset fig1 --out results/fig1
    floqxy run --config my.ini --set experiment.sizes=128,256 --workers 4
    floqxy validate --preset fig3
    floqxy list-presets
"""

from __future__ import annotations

import argparse
import sys

from .config import (ConfigError, ExperimentConfig, apply_overrides,
                     config_to_ini, load_config, validate_config)
from .presets import PRESETS, load_preset, preset_names


def _build_config(args) -> ExperimentConfig:
    if args.preset and args.config:
        raise ConfigError("give either --preset or --config, not both")
    if args.preset:
        cfg = load_preset(args.preset)
    elif args.config:
        cfg = load_config(args.config)
    else:
        raise ConfigError("one of --preset or --config is required")
    if args.set:
        cfg = apply_overrides(cfg, args.set)
    if args.workers is not None:
        cfg.workers = args.workers
    if args.out is not None:
        cfg.out_dir = args.out
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="INI experiment configuration file")
    parser.add_argument("--preset", help="named preset (see list-presets)")
    parser.add_argument("--set", action="append", default=[],
                        metavar="SECTION.KEY=VALUE",
                        help="override a configuration entry")
    parser.add_argument("--workers", type=int, default=None,
                        help="worker processes for independent cells")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed recorded in the manifest (sweeps are deterministic)")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="floqxy",
        description="Driven XY/Ising chain simulator and FSS analysis toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment")
    _add_common(p_run)

    p_val = sub.add_parser("validate", help="check a configuration and print estimates")
    _add_common(p_val)

    sub.add_parser("list-presets", help="show available presets")

    args = parser.parse_args(argv)

    if args.command == "list-presets":
        for name in preset_names():
            print(f"{name:15s} {PRESETS[name].get('description', '')}")
        return 0

    try:
        cfg = _build_config(args)
    except (ConfigError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.command == "validate":
        try:
            diagnostics = validate_config(cfg)
        except ConfigError as exc:
            print(f"invalid configuration: {exc}", file=sys.stderr)
            return 2
        print(config_to_ini(cfg), end="")
        for line in diagnostics:
            print(f"# {line}")
        return 0

    from .runner import run_experiment

    try:
        manifest = run_experiment(cfg)
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {cfg.out_dir}/observables.csv, analysis.json, manifest.json "
          f"({manifest['timings_s']['total']:.1f} s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
