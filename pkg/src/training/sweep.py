"""Accuracy/diversity trade-off sweep over diversity epochs.

The table's first row (n_ep = 0) is the accuracy-phase model; each further
row is measured after that many diversity epochs on the test split.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
import yaml

from src.dataio.types import SplitSet
from src.metrics.report import MetricReport, evaluate
from src.mf.model import MfModel, init_model
from src.primitives.exceptions import ContractViolation, DatasetError
from src.training.config import TrainConfig
from src.training.trainer import TrainingHistory, train_accuracy_phase, train_alternating, train_diversity_phase

logger = logging.getLogger(__name__)

CURVE_COLUMNS = ("n_ep", "ndcg", "coverage", "entropy", "neg_gini")


@dataclass(frozen=True)
class CurvePoint:
    n_ep: int
    ndcg: float
    coverage: float
    entropy: float
    neg_gini: float

    @classmethod
    def from_report(cls, n_ep: int, report: MetricReport) -> "CurvePoint":
        return cls(n_ep, report.ndcg, report.coverage, report.entropy, report.neg_gini)


@dataclass
class CurveTable:
    k: int
    rows: List[CurvePoint] = field(default_factory=list)

    def append(self, point: CurvePoint) -> None:
        if self.rows and point.n_ep <= self.rows[-1].n_ep:
            raise ContractViolation(f"curve rows must increase in n_ep ({point.n_ep} after {self.rows[-1].n_ep})")
        self.rows.append(point)

    def __len__(self) -> int:
        return len(self.rows)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(r) for r in self.rows], columns=list(CURVE_COLUMNS))

    def to_csv(self, path, run_info: Optional[Dict] = None) -> Path:
        """Write the curve and, when `run_info` is given, a `<path>.run.yaml` sidecar."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format="%.6g", lineterminator="\n")
        if run_info is not None:
            sidecar = path.with_name(path.name + ".run.yaml")
            sidecar.write_text(yaml.safe_dump({"k": self.k, **run_info}, sort_keys=True), encoding="utf-8")
        return path

    @classmethod
    def from_csv(cls, path, k: int) -> "CurveTable":
        try:
            frame = pd.read_csv(path)
        except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise DatasetError(f"cannot read curve {path}: {e}", code="UNREADABLE") from e
        if tuple(frame.columns) != CURVE_COLUMNS:
            raise DatasetError(f"{path}: unexpected columns {list(frame.columns)}", code="MALFORMED_LINE")
        table = cls(k)
        for rec in frame.itertuples(index=False):
            table.append(CurvePoint(int(rec.n_ep), float(rec.ndcg), float(rec.coverage), float(rec.entropy), float(rec.neg_gini)))
        return table

    def at_ndcg_drop(self, fraction: float = 0.05) -> Optional[CurvePoint]:
        """Diversity where nDCG first falls to (1 - fraction) of its n_ep=0 value.

        Metrics are interpolated linearly between the two bracketing rows;
        None when the curve never drops that far.
        """
        if not self.rows:
            return None
        target = self.rows[0].ndcg * (1.0 - fraction)
        for prev, cur in zip(self.rows, self.rows[1:]):
            if cur.ndcg <= target:
                span = prev.ndcg - cur.ndcg
                w = 1.0 if span <= 0 else (prev.ndcg - target) / span
                return CurvePoint(
                    cur.n_ep,
                    target,
                    prev.coverage + w * (cur.coverage - prev.coverage),
                    prev.entropy + w * (cur.entropy - prev.entropy),
                    prev.neg_gini + w * (cur.neg_gini - prev.neg_gini),
                )
        return None


def sweep_tradeoff(
    split: SplitSet,
    cfg: TrainConfig,
    model: Optional[MfModel] = None,
    history: Optional[TrainingHistory] = None,
) -> CurveTable:
    """Train the accuracy phase once, then record the curve every `eval_every` diversity epochs.

    With `cfg.alternate` the accuracy phase still runs first and each later
    row follows one alternating round instead of one diversity epoch.
    """
    rng = np.random.default_rng(cfg.seed)
    if model is None:
        model = init_model(split.n_users, split.n_items, cfg.d, cfg.seed, cfg.dtype)
    history = history if history is not None else TrainingHistory()
    acc = train_accuracy_phase(model, split, cfg, rng, history)
    model = acc.model
    train = split.train_matrix()

    table = CurveTable(cfg.k)
    base = evaluate(model, split, cfg.k, train=train)
    table.append(CurvePoint.from_report(0, base))
    logger.info("[SWEEP] n_ep=0 (best accuracy epoch %d) %s", acc.best_epoch, " ".join(base.lines()))

    def record(epoch: int, m: MfModel) -> None:
        if epoch % cfg.eval_every == 0 or epoch == cfg.n_ep_max:
            report = evaluate(m, split, cfg.k, train=train)
            table.append(CurvePoint.from_report(epoch, report))
            logger.info("[SWEEP] n_ep=%d %s", epoch, " ".join(report.lines()))

    if cfg.alternate:
        train_alternating(model, split, cfg, cfg.n_ep_max, record, rng, history)
    else:
        train_diversity_phase(model, cfg, cfg.n_ep_max, record, rng, history)
    return table
