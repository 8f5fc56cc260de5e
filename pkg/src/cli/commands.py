"""Bodies of the `divmf` subcommands.

Each command takes a validated `RunConfig`, does its work through the
library packages and prints its report to stdout.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Tuple

import numpy as np

from src.cli.config import RunConfig, dump_run_config
from src.dataio.canonical import INTERACTIONS_FILE, SPLIT_FILE, read_dataset, read_split, write_dataset, write_id_maps, write_split
from src.dataio.parsing import FORMATS, parse_interactions
from src.dataio.split import leave_one_out_split
from src.dataio.stats import DatasetStats, dataset_stats
from src.dataio.transforms import drop_sparse_users, kcore_filter, remap_ids, subsample_users, to_implicit
from src.dataio.types import IdMaps, InteractionLog, SplitSet
from src.metrics.report import MetricReport, evaluate
from src.mf.model import init_model
from src.primitives.exceptions import ConfigError
from src.training.checkpoint import load_checkpoint, save_checkpoint
from src.training.sweep import CurveTable, sweep_tradeoff
from src.training.trainer import TrainingHistory, train_accuracy_phase, train_alternating, train_diversity_phase

logger = logging.getLogger(__name__)

CHECKPOINT_FILE = "model.ckpt"
METRICS_FILE = "metrics.txt"
RUN_FILE = "run.yaml"


def _emit(lines) -> None:
    for line in lines:
        print(line)


def _load_split(cfg: RunConfig) -> SplitSet:
    return read_split(cfg.require_dataset() / SPLIT_FILE)


def build_split(cfg: RunConfig) -> Tuple[InteractionLog, IdMaps, SplitSet]:
    """parse -> implicit -> (subsample) -> k-core -> remap -> split, all in memory."""
    if cfg.input is None:
        raise ConfigError("preprocessing needs an input file (--input)")
    log = to_implicit(parse_interactions(cfg.input, FORMATS[cfg.format]))
    if cfg.subsample_users:
        log = subsample_users(log, cfg.subsample_users, cfg.split_seed)
    if cfg.core > 0:
        log = kcore_filter(log, cfg.core)
    if not cfg.strict_split:
        log = drop_sparse_users(log)
    log, maps = remap_ids(log)
    split = leave_one_out_split(log, cfg.split_seed, strict=cfg.strict_split, n_users=maps.n_users, n_items=maps.n_items)
    return log, maps, split


def cmd_preprocess(cfg: RunConfig) -> DatasetStats:
    if cfg.dataset_dir is None:
        raise ConfigError("preprocess needs an output directory (--data)")
    log, maps, split = build_split(cfg)

    out = cfg.dataset_dir
    write_dataset(log, out / INTERACTIONS_FILE)
    write_split(split, out / SPLIT_FILE)
    write_id_maps(maps, out)
    logger.info("[CLI] preprocessed dataset written to %s", out)

    stats = dataset_stats(log)
    _emit(stats.lines())
    return stats


def cmd_stats(cfg: RunConfig) -> DatasetStats:
    if cfg.input is not None:
        log = to_implicit(parse_interactions(cfg.input, FORMATS[cfg.format]))
    else:
        log, _ = read_dataset(cfg.require_dataset() / INTERACTIONS_FILE)
    stats = dataset_stats(log)
    _emit(stats.lines())
    return stats


def cmd_train(cfg: RunConfig, out_dir) -> MetricReport:
    """Accuracy phase, then `n_ep` diversity epochs (or rounds with `alternate`)."""
    tc = cfg.train
    split = _load_split(cfg)
    out_dir = Path(out_dir)
    rng = np.random.default_rng(tc.seed)
    history = TrainingHistory()

    model = init_model(split.n_users, split.n_items, tc.d, tc.seed, tc.dtype)
    acc = train_accuracy_phase(model, split, tc, rng, history)
    model = acc.model
    if tc.alternate:
        train_alternating(model, split, tc, tc.n_ep, rng=rng, history=history)
    else:
        train_diversity_phase(model, tc, tc.n_ep, rng=rng, history=history)

    save_checkpoint(model, out_dir / CHECKPOINT_FILE)
    report = evaluate(model, split, tc.k)
    header = f"seed={tc.seed} k={tc.k} n_ep={tc.n_ep} accuracy_epochs={acc.epochs_run} best_epoch={acc.best_epoch}"
    (out_dir / METRICS_FILE).write_text("\n".join([header, *report.lines()]) + "\n", encoding="utf-8")
    dump_run_config(cfg, out_dir / RUN_FILE)
    _emit(report.lines())
    return report


def cmd_sweep(cfg: RunConfig, out_csv) -> CurveTable:
    split = _load_split(cfg)
    table = sweep_tradeoff(split, cfg.train)
    table.to_csv(out_csv, run_info=cfg.to_flat())
    logger.info("[CLI] wrote %d curve rows to %s", len(table), out_csv)
    drop = table.at_ndcg_drop(0.05)
    if drop is not None:
        logger.info("[CLI] at 5%% nDCG drop: coverage=%.4f entropy=%.4f neg_gini=%.4f", drop.coverage, drop.entropy, drop.neg_gini)
    return table


def cmd_eval(cfg: RunConfig, checkpoint, role: str = "test") -> MetricReport:
    split = _load_split(cfg)
    model = load_checkpoint(checkpoint, expected=(split.n_users, split.n_items))
    report = evaluate(model, split, cfg.train.k, role=role)
    _emit(report.lines())
    return report
