"""
AID: /src/metrics/diversity.py
Purpose: Aggregate diversity of recommendation lists (coverage, entropy, Gini).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from src.metrics.recommend import RecLists
from src.primitives.exceptions import ContractViolation


@dataclass(frozen=True, eq=False)
class ItemFrequency:
    counts: np.ndarray

    @classmethod
    def from_lists(cls, lists: RecLists, n_items: int) -> "ItemFrequency":
        counts = np.bincount(lists.items.ravel(), minlength=n_items)
        if len(counts) != n_items:
            raise ContractViolation(f"recommended item index beyond n_items={n_items}")
        return cls(counts)

    @property
    def n_items(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def shares(self) -> np.ndarray:
        if self.total == 0:
            raise ContractViolation("no recommendations to measure")
        return self.counts / self.total


def coverage_at_k(freq: ItemFrequency) -> float:
    """Fraction of the catalogue recommended at least once."""
    return float(np.count_nonzero(freq.counts) / freq.n_items)


def entropy_at_k(freq: ItemFrequency) -> float:
    """Shannon entropy (nats) of the recommendation distribution."""
    p = freq.shares()
    return float(-xlogy(p, p).sum())


def gini_at_k(freq: ItemFrequency) -> float:
    """Gini index over all items (zeros included); 0 is perfectly even."""
    n = freq.n_items
    if n < 2:
        raise ContractViolation("Gini needs at least two items")
    p = np.sort(freq.shares())
    j = np.arange(1, n + 1)
    return float(((2 * j - n - 1) * p).sum() / (n - 1))
