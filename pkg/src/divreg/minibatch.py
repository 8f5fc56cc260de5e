from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.primitives.exceptions import ContractViolation


@dataclass(frozen=True, eq=False)
class MiniBatchSpec:
    """A sampled block: sorted user and item indices plus the scaled top size."""

    r_b: int
    c_b: int
    k_b: int
    users: np.ndarray
    items: np.ndarray


def scaled_k(c_b: int, n_items: int, k: int) -> int:
    """k_b = round(c_b / |I| * k), at least 1 and at most c_b (ties round half to even)."""
    return min(c_b, max(1, round(c_b / n_items * k)))


def _draw(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    if size >= n:
        return np.arange(n, dtype=np.int64)
    return np.sort(rng.choice(n, size=size, replace=False)).astype(np.int64)


def sample_minibatch(n_users: int, n_items: int, r_b: int, c_b: int, k: int, rng: np.random.Generator) -> MiniBatchSpec:
    """Sample r_b users and c_b items uniformly without replacement.

    Indices come back sorted, so a full-size batch is exactly the whole matrix.
    """
    if not 1 <= r_b <= n_users:
        raise ContractViolation(f"r_b={r_b} outside [1, {n_users}]")
    if not 1 <= c_b <= n_items:
        raise ContractViolation(f"c_b={c_b} outside [1, {n_items}]")
    if not 1 <= k <= n_items:
        raise ContractViolation(f"k={k} outside [1, {n_items}]")
    users = _draw(n_users, r_b, rng)
    items = _draw(n_items, c_b, rng)
    return MiniBatchSpec(r_b, c_b, scaled_k(c_b, n_items, k), users, items)
