"""
AID: /src/main.py
Purpose: `divmf` command-line entrypoint (preprocess, stats, train, sweep, eval).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from src.cli.commands import cmd_eval, cmd_preprocess, cmd_stats, cmd_sweep, cmd_train
from src.cli.config import load_run_config
from src.config import UNMASK_SCHEMES
from src.logging_config import setup_logging
from src.primitives.exceptions import DivMFError

logger = logging.getLogger(__name__)

# argparse dest -> flat config key
FLAG_KEYS = {
    "input": "input",
    "format": "format",
    "data": "dataset_dir",
    "core": "core",
    "subsample_users": "subsample_users",
    "strict_split": "strict_split",
    "k": "k",
    "n_ep": "n_ep",
    "n_ep_max": "n_ep_max",
    "unmask_scheme": "unmask_scheme",
    "n_unmask": "n_unmask",
    "rb": "r_b",
    "cb": "c_b",
    "dim": "d",
    "lr": "lr",
    "patience": "patience",
    "eval_every": "eval_every",
    "alternate": "alternate",
    "no_cov": "use_cov",
    "no_skew": "use_skew",
    "progress": "progress",
}


def _shared_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", type=Path, help="flat YAML run config")
    p.add_argument("--seed", type=int, help="run seed (split seed for preprocess)")
    p.add_argument("--data", type=Path, help="preprocessed dataset directory")
    p.add_argument("--k", type=int)
    p.add_argument("--n-ep", type=int, help="diversity epochs for train")
    p.add_argument("--n-ep-max", type=int, help="diversity epochs for sweep")
    p.add_argument("--core", type=int, help="k-core threshold, 0 disables")
    p.add_argument("--unmask-scheme", choices=UNMASK_SCHEMES)
    p.add_argument("--n-unmask", type=int)
    p.add_argument("--rb", type=int, help="mini-batch rows")
    p.add_argument("--cb", type=int, help="mini-batch columns")
    p.add_argument("--dim", type=int, help="embedding size d")
    p.add_argument("--lr", type=float)
    p.add_argument("--patience", type=int)
    p.add_argument("--eval-every", type=int)
    p.add_argument("--alternate", action="store_true", default=None, help="alternate accuracy and diversity epochs")
    p.add_argument("--no-cov", action="store_false", default=None, help="drop the coverage regularizer")
    p.add_argument("--no-skew", action="store_false", default=None, help="drop the skewness regularizer")
    p.add_argument("--progress", action="store_true", default=None)
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("-q", "--quiet", action="store_true")
    p.add_argument("--log-file", type=str)
    return p


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_flags()
    parser = argparse.ArgumentParser(prog="divmf", description="Diversity-regularized matrix factorization lab")
    sub = parser.add_subparsers(dest="command", required=True)

    pre = sub.add_parser("preprocess", parents=[shared], help="raw file -> canonical dataset + split")
    pre.add_argument("--input", type=Path)
    pre.add_argument("--format")
    pre.add_argument("--subsample-users", type=int)
    pre.add_argument("--strict-split", action="store_true", default=None)

    stats = sub.add_parser("stats", parents=[shared], help="dataset statistics")
    stats.add_argument("--input", type=Path)
    stats.add_argument("--format")

    train = sub.add_parser("train", parents=[shared], help="train and write checkpoint + metrics")
    train.add_argument("--out", type=Path, required=True)

    sweep = sub.add_parser("sweep", parents=[shared], help="accuracy/diversity curve as CSV")
    sweep.add_argument("--out", type=Path, required=True)

    ev = sub.add_parser("eval", parents=[shared], help="metrics of a checkpoint")
    ev.add_argument("--checkpoint", type=Path, required=True)
    return parser


def overrides_from_args(args: argparse.Namespace) -> Dict[str, object]:
    flat: Dict[str, object] = {}
    for dest, key in FLAG_KEYS.items():
        if hasattr(args, dest):
            flat[key] = getattr(args, dest)
    if args.seed is not None:
        flat["split_seed" if args.command == "preprocess" else "seed"] = args.seed
    return flat


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    setup_logging(args.log_file, level)

    try:
        cfg = load_run_config(args.config, overrides_from_args(args))
        if args.command == "preprocess":
            cmd_preprocess(cfg)
        elif args.command == "stats":
            cmd_stats(cfg)
        elif args.command == "train":
            cmd_train(cfg, args.out)
        elif args.command == "sweep":
            cmd_sweep(cfg, args.out)
        elif args.command == "eval":
            cmd_eval(cfg, args.checkpoint)
    except DivMFError as e:
        logger.error("[CLI] %s failed: %s", args.command, e)
        print(f"error[{e.code}]: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
