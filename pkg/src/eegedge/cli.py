"""Command-line entry point: ``eegedge {synth,encode,train,eval,ablate}``.

Exit codes: 0 success, 2 configuration error, 3 data error.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from . import harness
from .config import load_config, load_synth_spec
from .errors import ConfigError, DataError

EXIT_OK, EXIT_CONFIG, EXIT_DATA = 0, 2, 3


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="pipeline config file (INI key = value sections)")
    common.add_argument("--seed", type=int, help="override the configured RNG seed")
    common.add_argument("--out", help="output directory")
    common.add_argument("--quiet", action="store_true", help="only print warnings and results")

    parser = argparse.ArgumentParser(prog="eegedge", description="EEG channel homogenization, edge enrichment and a linear probe.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic labeled EEG dataset")
    p.add_argument("spec", nargs="?", help="synth spec file ([synth] section)")

    p = sub.add_parser("encode", parents=[common], help="ICWMH + edge enrichment for every sample")
    p.add_argument("dataset", help="EEGB file or directory of CSV samples")
    p.add_argument("--figures", type=int, default=1, help="number of preview figures to render")

    p = sub.add_parser("train", parents=[common], help="train the linear softmax head")
    p.add_argument("input", help="encode output directory or raw dataset")

    p = sub.add_parser("eval", parents=[common], help="accuracy of a checkpoint on one split")
    p.add_argument("checkpoint")
    p.add_argument("input", help="encode output directory or raw dataset")
    p.add_argument("--split", default="test", choices=("train", "val", "test"))

    p = sub.add_parser("ablate", parents=[common], help="one-axis-at-a-time ablation sweep")
    p.add_argument("dataset")
    p.add_argument("--seeds", type=int, default=3, help="training seeds per grid cell")
    return parser


def run(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = config.with_seed(args.seed)

    if args.command == "synth":
        spec = load_synth_spec(args.spec)
        if args.seed is not None:
            spec = dataclasses.replace(spec, seed=args.seed)
        path = harness.cmd_synth(spec, args.out or config.io.out or "synth_out")
        print(f"wrote {path}")
    elif args.command == "encode":
        manifest = harness.cmd_encode(args.dataset, config, args.out or config.io.out or "encoded",
                                      figures=args.figures)
        print(f"wrote {manifest}")
    elif args.command == "train":
        outcome = harness.cmd_train(args.input, config, args.out or config.io.out or "run")
        print(f"best val accuracy {outcome.best_val_acc:.6f} at epoch {outcome.best_epoch}; "
              f"checkpoint {outcome.checkpoint}")
    elif args.command == "eval":
        print(harness.cmd_eval(args.checkpoint, args.input, config, args.split).report())
    elif args.command == "ablate":
        if args.seeds < 1:
            raise ConfigError("--seeds must be >= 1")
        seeds = [config.seed + i for i in range(args.seeds)]
        _, table = harness.cmd_ablate(args.dataset, config, args.out or config.io.out or "ablation",
                                      seeds)
        print(table, end="")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
