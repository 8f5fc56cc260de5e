from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Dict, List

from src.dataio.types import SplitSet
from src.metrics.accuracy import ndcg_at_k
from src.metrics.diversity import ItemFrequency, coverage_at_k, entropy_at_k, gini_at_k
from src.metrics.recommend import RecLists, recommend_topk
from src.mf.model import MfModel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MetricReport:
    k: int
    ndcg: float
    coverage: float
    entropy: float
    neg_gini: float

    def lines(self) -> List[str]:
        return [
            f"ndcg@{self.k}={self.ndcg:.6f}",
            f"coverage@{self.k}={self.coverage:.6f}",
            f"entropy@{self.k}={self.entropy:.6f}",
            f"neg_gini@{self.k}={self.neg_gini:.6f}",
        ]

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)


def report_from_lists(lists: RecLists, split: SplitSet, role: str = "test") -> MetricReport:
    users, items = split.held_out(role)
    freq = ItemFrequency.from_lists(lists, split.n_items)
    return MetricReport(
        k=lists.k,
        ndcg=ndcg_at_k(lists, users, items),
        coverage=coverage_at_k(freq),
        entropy=entropy_at_k(freq),
        neg_gini=-gini_at_k(freq),
    )


def evaluate(model: MfModel, split: SplitSet, k: int, role: str = "test", train=None) -> MetricReport:
    """Recommend for every user with a held-out item and score the lists.

    Args:
        train: precomputed training CSR matrix; built from the split when None.
    """
    users, _ = split.held_out(role)
    matrix = split.train_matrix() if train is None else train
    lists = recommend_topk(model, matrix, k, users)
    report = report_from_lists(lists, split, role)
    logger.debug("[EVAL] %s %s", role, " ".join(report.lines()))
    return report

