from __future__ import annotations

import numpy as np

from src.metrics.recommend import RecLists
from src.primitives.exceptions import ContractViolation


def ndcg_at_k(lists: RecLists, test_users: np.ndarray, test_items: np.ndarray) -> float:
    """Mean nDCG@k with a single relevant item per user: 1/log2(rank+1) on a hit, else 0."""
    if len(test_users) == 0:
        raise ContractViolation("nDCG needs at least one held-out user")
    order = np.argsort(lists.users, kind="stable")
    pos = np.searchsorted(lists.users, test_users, sorter=order)
    pos = np.minimum(pos, len(order) - 1)
    rows = order[pos]
    if not (lists.users[rows] == test_users).all():
        raise ContractViolation("some held-out users have no recommendation list")
    hits = lists.items[rows] == np.asarray(test_items)[:, None]
    found = hits.any(axis=1)
    rank = hits.argmax(axis=1) + 1
    gains = np.where(found, 1.0 / np.log2(rank + 1.0), 0.0)
    return float(gains.mean())
