"""
AID: /src/training/trainer.py
Purpose: Two-phase DivMF training.

Phase one fits MF with BPR until validation nDCG@k stops improving. Phase two
continues from the best accuracy model and minimizes L_div for a fixed number
of epochs with a fresh Adam state. An alternating schedule interleaves one
epoch of each.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from tqdm import tqdm

from src.dataio.types import SplitSet
from src.divreg.loss import div_loss_and_grad
from src.metrics.report import evaluate
from src.mf.bpr import bpr_loss_and_grad
from src.mf.model import MfModel
from src.mf.optim import AdamState, adam_step
from src.mf.sampling import InteractionIndex, iter_epoch_batches
from src.primitives.exceptions import NonFiniteError
from src.training.config import TrainConfig

logger = logging.getLogger(__name__)

SnapshotSink = Callable[[int, MfModel], None]


@dataclass(frozen=True)
class EpochRecord:
    phase: str
    epoch: int
    loss: float
    source: str
    val_ndcg: Optional[float] = None


@dataclass
class TrainingHistory:
    records: List[EpochRecord] = field(default_factory=list)

    def add(self, phase: str, epoch: int, loss: float, source: str, val_ndcg: Optional[float] = None) -> None:
        self.records.append(EpochRecord(phase, epoch, loss, source, val_ndcg))

    def phase(self, name: str) -> List[EpochRecord]:
        return [r for r in self.records if r.phase == name]


@dataclass
class AccuracyResult:
    model: MfModel
    best_epoch: int
    best_ndcg: float
    epochs_run: int
    history: TrainingHistory


@dataclass
class TrainerSnapshot:
    model: MfModel
    state: AdamState
    rng_state: Dict[str, Any]
    epoch: int
    best_model: MfModel
    best_ndcg: float
    best_epoch: int
    stale: int


def _check_loss(loss: float, phase: str, epoch: int) -> None:
    if not math.isfinite(loss):
        raise NonFiniteError(f"{phase} loss became {loss} in epoch {epoch}")


class AccuracyTrainer:
    """BPR epochs with early stopping on validation nDCG@k.

    The untrained model is scored first, so a model that never improves
    stops after `patience` epochs and is returned unchanged.
    """

    def __init__(
        self,
        model: MfModel,
        split: SplitSet,
        cfg: TrainConfig,
        rng: np.random.Generator,
        history: Optional[TrainingHistory] = None,
    ):
        self.model = model
        self.split = split
        self.cfg = cfg
        self.rng = rng
        self.index = InteractionIndex.from_split(split)
        self.state = cfg.adam_state()
        self.history = history if history is not None else TrainingHistory()
        self.epoch = 0
        self.best_ndcg = self.validate()
        self.best_model = model.copy()
        self.best_epoch = 0
        self.stale = 0

    def validate(self) -> float:
        return evaluate(self.model, self.split, self.cfg.k, role="val", train=self.index.matrix).ndcg

    def run_epoch(self) -> float:
        """One pass over the training positives; returns validation nDCG@k."""
        total, count, sources = 0.0, 0, set()
        for batch in iter_epoch_batches(self.index, self.cfg.bpr_batch_size, self.rng):
            loss, grads = bpr_loss_and_grad(self.model, batch)
            adam_step(self.state, self.model.parameters(), grads.as_dict())
            total += loss
            count += len(batch)
            sources.add(grads.source)
        self.epoch += 1
        mean = total / max(count, 1)
        _check_loss(mean, "bpr", self.epoch)

        ndcg = self.validate()
        if ndcg > self.best_ndcg:
            self.best_ndcg, self.best_epoch, self.stale = ndcg, self.epoch, 0
            self.best_model = self.model.copy()
        else:
            self.stale += 1
        self.history.add("accuracy", self.epoch, mean, ",".join(sorted(sources)), ndcg)
        logger.info("[ACC] epoch %d loss=%.4f val_ndcg@%d=%.4f best=%.4f", self.epoch, mean, self.cfg.k, ndcg, self.best_ndcg)
        return ndcg

    @property
    def converged(self) -> bool:
        return self.stale >= self.cfg.patience

    def fit(self) -> AccuracyResult:
        bar = tqdm(total=self.cfg.max_accuracy_epochs, desc="accuracy", disable=not self.cfg.progress)
        while not self.converged and self.epoch < self.cfg.max_accuracy_epochs:
            self.run_epoch()
            bar.update(1)
        bar.close()
        if not self.converged:
            logger.warning("[ACC] stopped at max_accuracy_epochs=%d before converging", self.epoch)
        return AccuracyResult(self.best_model.copy(), self.best_epoch, self.best_ndcg, self.epoch, self.history)

    def snapshot(self) -> TrainerSnapshot:
        return TrainerSnapshot(
            self.model.copy(),
            self.state.copy(),
            self.rng.bit_generator.state,
            self.epoch,
            self.best_model.copy(),
            self.best_ndcg,
            self.best_epoch,
            self.stale,
        )

    def restore(self, snap: TrainerSnapshot) -> None:
        self.model.user_emb[...] = snap.model.user_emb
        self.model.item_emb[...] = snap.model.item_emb
        self.state = snap.state.copy()
        self.rng.bit_generator.state = snap.rng_state
        self.epoch = snap.epoch
        self.best_model = snap.best_model.copy()
        self.best_ndcg, self.best_epoch, self.stale = snap.best_ndcg, snap.best_epoch, snap.stale


class DiversityTrainer:
    """Mini-batch L_div epochs: ceil(|U| / r_b) blocks per epoch."""

    def __init__(
        self,
        model: MfModel,
        cfg: TrainConfig,
        rng: np.random.Generator,
        history: Optional[TrainingHistory] = None,
    ):
        self.model = model
        self.cfg = cfg
        self.rng = rng
        self.state = cfg.adam_state(weight_decay=cfg.weight_decay if cfg.div_weight_decay else 0.0)
        self.history = history if history is not None else TrainingHistory()
        self.policy = cfg.unmask_policy()
        self.r_b, self.c_b = cfg.block_shape(model.n_users, model.n_items)
        self.batches = math.ceil(model.n_users / self.r_b)
        self.epoch = 0

    def run_epoch(self) -> float:
        total, sources = 0.0, set()
        for _ in range(self.batches):
            res = div_loss_and_grad(
                self.model, self.r_b, self.c_b, self.cfg.k, self.policy, self.rng,
                use_cov=self.cfg.use_cov, use_skew=self.cfg.use_skew,
            )
            adam_step(self.state, self.model.parameters(), res.grads.as_dict())
            total += res.loss
            sources.add(res.grads.source)
        self.epoch += 1
        mean = total / self.batches
        _check_loss(mean, "diversity", self.epoch)
        self.model.check_finite()
        self.history.add("diversity", self.epoch, mean, ",".join(sorted(sources)))
        logger.info("[DIV] epoch %d L_div=%.4f (%d blocks of %dx%d)", self.epoch, mean, self.batches, self.r_b, self.c_b)
        return mean


def train_accuracy_phase(
    model: MfModel,
    split: SplitSet,
    cfg: TrainConfig,
    rng: Optional[np.random.Generator] = None,
    history: Optional[TrainingHistory] = None,
) -> AccuracyResult:
    """Fit with BPR and return the best model by validation nDCG@k."""
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    return AccuracyTrainer(model, split, cfg, rng, history).fit()


def train_diversity_phase(
    model: MfModel,
    cfg: TrainConfig,
    n_ep: int,
    sink: Optional[SnapshotSink] = None,
    rng: Optional[np.random.Generator] = None,
    history: Optional[TrainingHistory] = None,
) -> MfModel:
    """Run `n_ep` diversity epochs in place; `sink(epoch, model)` fires after each."""
    if n_ep == 0:
        return model
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    trainer = DiversityTrainer(model, cfg, rng, history)
    for epoch in tqdm(range(1, n_ep + 1), desc="diversity", disable=not cfg.progress):
        trainer.run_epoch()
        if sink is not None:
            sink(epoch, model)
    return model


def train_alternating(
    model: MfModel,
    split: SplitSet,
    cfg: TrainConfig,
    n_rounds: int,
    sink: Optional[SnapshotSink] = None,
    rng: Optional[np.random.Generator] = None,
    history: Optional[TrainingHistory] = None,
) -> MfModel:
    """Interleave one BPR epoch and one diversity epoch per round.

    Each objective keeps its own Adam state across rounds.
    """
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    history = history if history is not None else TrainingHistory()
    accuracy = AccuracyTrainer(model, split, cfg, rng, history)
    diversity = DiversityTrainer(model, cfg, rng, history)
    for rnd in tqdm(range(1, n_rounds + 1), desc="alternating", disable=not cfg.progress):
        accuracy.run_epoch()
        diversity.run_epoch()
        if sink is not None:
            sink(rnd, model)
    return model
