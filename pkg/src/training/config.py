"""Validated hyperparameters for both training phases."""

from __future__ import annotations

import logging
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.config import (
    ACCURACY_PATIENCE,
    ADAM_EPS,
    BETA1,
    BETA2,
    BPR_BATCH_SIZE,
    DEFAULT_N_UNMASK,
    DEFAULT_UNMASK_SCHEME,
    EMBED_DIM,
    LR,
    MAX_ACCURACY_EPOCHS,
    MINIBATCH_COLS,
    MINIBATCH_ROWS,
    TOP_K,
    WEIGHT_DECAY,
)
from src.divreg.masking import UnmaskPolicy
from src.mf.optim import AdamState

logger = logging.getLogger(__name__)


class TrainConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: int = 0
    d: int = Field(EMBED_DIM, ge=1)
    float32: bool = False

    lr: float = Field(LR, gt=0)
    weight_decay: float = Field(WEIGHT_DECAY, ge=0)
    beta1: float = Field(BETA1, ge=0, lt=1)
    beta2: float = Field(BETA2, ge=0, lt=1)
    adam_eps: float = Field(ADAM_EPS, gt=0)

    k: int = Field(TOP_K, ge=1)

    bpr_batch_size: int = Field(BPR_BATCH_SIZE, ge=1)
    patience: int = Field(ACCURACY_PATIENCE, ge=1)
    max_accuracy_epochs: int = Field(MAX_ACCURACY_EPOCHS, ge=1)

    unmask_scheme: Literal["none", "top_plus", "random"] = DEFAULT_UNMASK_SCHEME
    n_unmask: int = Field(DEFAULT_N_UNMASK, ge=0)
    r_b: int = Field(MINIBATCH_ROWS, ge=1)
    c_b: int = Field(MINIBATCH_COLS, ge=1)
    n_ep: int = Field(0, ge=0)
    n_ep_max: int = Field(10, ge=0)
    eval_every: int = Field(1, ge=1)
    div_weight_decay: bool = True
    use_cov: bool = True
    use_skew: bool = True
    alternate: bool = False

    progress: bool = False

    @property
    def dtype(self):
        return np.float32 if self.float32 else np.float64

    def adam_state(self, weight_decay: Optional[float] = None) -> AdamState:
        return AdamState(
            lr=self.lr,
            beta1=self.beta1,
            beta2=self.beta2,
            eps=self.adam_eps,
            weight_decay=self.weight_decay if weight_decay is None else weight_decay,
        )

    def unmask_policy(self) -> UnmaskPolicy:
        return UnmaskPolicy(self.unmask_scheme, self.n_unmask)

    def block_shape(self, n_users: int, n_items: int):
        """(r_b, c_b) clamped to the matrix size."""
        r_b, c_b = min(self.r_b, n_users), min(self.c_b, n_items)
        if (r_b, c_b) != (self.r_b, self.c_b):
            logger.debug("[DIV] mini-batch clamped to %dx%d", r_b, c_b)
        return r_b, c_b
