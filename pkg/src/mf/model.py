"""
AID: /src/mf/model.py
Purpose: Matrix-factorization parameters P (users x d) and Q (items x d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from src.config import INIT_SCALE
from src.primitives.exceptions import ContractViolation, NonFiniteError

PARAM_NAMES = ("user_emb", "item_emb")


@dataclass
class MfModel:
    user_emb: np.ndarray
    item_emb: np.ndarray

    def __post_init__(self) -> None:
        if self.user_emb.ndim != 2 or self.item_emb.ndim != 2:
            raise ContractViolation("embeddings must be 2-D")
        if self.user_emb.shape[1] != self.item_emb.shape[1]:
            raise ContractViolation(
                f"embedding widths differ: users d={self.user_emb.shape[1]}, items d={self.item_emb.shape[1]}"
            )
        self.check_finite()

    @property
    def d(self) -> int:
        return self.user_emb.shape[1]

    @property
    def n_users(self) -> int:
        return self.user_emb.shape[0]

    @property
    def n_items(self) -> int:
        return self.item_emb.shape[0]

    def parameters(self) -> Dict[str, np.ndarray]:
        """Live views keyed by parameter name; optimizers update them in place."""
        return {"user_emb": self.user_emb, "item_emb": self.item_emb}

    def copy(self) -> "MfModel":
        return MfModel(self.user_emb.copy(), self.item_emb.copy())

    def check_finite(self) -> None:
        for name, arr in self.parameters().items():
            if not np.isfinite(arr).all():
                raise NonFiniteError(f"{name} contains NaN or Inf")


@dataclass
class Gradients:
    """Parameter-shaped gradient buffers; `source` names the loss they came from."""

    user_emb: np.ndarray
    item_emb: np.ndarray
    source: str

    @classmethod
    def zeros_like(cls, model: MfModel, source: str) -> "Gradients":
        return cls(np.zeros_like(model.user_emb), np.zeros_like(model.item_emb), source)

    def as_dict(self) -> Dict[str, np.ndarray]:
        return {"user_emb": self.user_emb, "item_emb": self.item_emb}


def init_model(n_users: int, n_items: int, d: int, seed: int, dtype=np.float64) -> MfModel:
    """Uniform(-s, s) init with s = INIT_SCALE / sqrt(d); same seed, same model."""
    if min(n_users, n_items, d) < 1:
        raise ContractViolation(f"init_model needs positive sizes, got users={n_users} items={n_items} d={d}")
    rng = np.random.default_rng(seed)
    scale = INIT_SCALE / math.sqrt(d)
    user_emb = rng.uniform(-scale, scale, size=(n_users, d)).astype(dtype)
    item_emb = rng.uniform(-scale, scale, size=(n_items, d)).astype(dtype)
    return MfModel(user_emb, item_emb)


def score_submatrix(model: MfModel, users: Optional[np.ndarray] = None, items: Optional[np.ndarray] = None) -> np.ndarray:
    """Raw scores R[users, items] = P_users Q_items^T; None selects every row/column."""
    p = model.user_emb if users is None else model.user_emb[users]
    q = model.item_emb if items is None else model.item_emb[items]
    return p @ q.T
