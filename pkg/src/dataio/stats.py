from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

import numpy as np

from src.dataio.types import InteractionLog

TOP_FRACTION = 0.1


@dataclass(frozen=True)
class DatasetStats:
    n_users: int
    n_items: int
    n_interactions: int
    density_pct: float
    top_decile_share: float

    def lines(self) -> List[str]:
        return [
            f"users={self.n_users}",
            f"items={self.n_items}",
            f"interactions={self.n_interactions}",
            f"density_pct={self.density_pct:.4f}",
            f"top_decile_share={self.top_decile_share:.4f}",
        ]


def dataset_stats(log: InteractionLog) -> DatasetStats:
    """Size, density and popularity skew.

    The top-decile share is the fraction of interactions held by the most
    popular 10% of items, counting 0.1 * |I| items fractionally: whole items
    first, then the remainder times the next item's degree. A uniform log
    gives exactly 0.1 for any catalogue size.
    """
    n_users, n_items, n = log.n_users, log.n_items, len(log)
    degree = np.sort(log.frame.groupby("item", sort=False).size().to_numpy())[::-1]
    top = TOP_FRACTION * n_items
    whole = math.floor(top)
    held = float(degree[:whole].sum())
    if whole < len(degree):
        held += (top - whole) * float(degree[whole])
    share = held / n if n else 0.0
    density = 100.0 * n / (n_users * n_items) if n_users and n_items else 0.0
    return DatasetStats(n_users, n_items, n, density, share)
