"""Bias-corrected Adam over named numpy parameters."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Mapping, Tuple

import numpy as np

from src.config import ADAM_EPS, BETA1, BETA2, LR, WEIGHT_DECAY
from src.primitives.exceptions import ContractViolation


@dataclass
class AdamState:
    lr: float = LR
    beta1: float = BETA1
    beta2: float = BETA2
    eps: float = ADAM_EPS
    weight_decay: float = WEIGHT_DECAY
    step: int = 0
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)

    def copy(self) -> "AdamState":
        return AdamState(
            self.lr, self.beta1, self.beta2, self.eps, self.weight_decay, self.step,
            {k: a.copy() for k, a in self.m.items()},
            {k: a.copy() for k, a in self.v.items()},
        )


def adam_step(
    state: AdamState, params: Mapping[str, np.ndarray], grads: Mapping[str, np.ndarray]
) -> Tuple[Mapping[str, np.ndarray], AdamState]:
    """Apply one Adam update to `params` in place.

    The L2 term weight_decay * theta is added to the gradient before the
    moment updates.

    Raises:
        ContractViolation: when names or shapes of params and grads differ.
    """
    if set(params) != set(grads):
        raise ContractViolation(f"param names {sorted(params)} != grad names {sorted(grads)}")
    for name, p in params.items():
        if p.shape != grads[name].shape:
            raise ContractViolation(f"{name}: param shape {p.shape} != grad shape {grads[name].shape}")
        if name in state.m and state.m[name].shape != p.shape:
            raise ContractViolation(f"{name}: optimizer state shape {state.m[name].shape} != {p.shape}")

    state.step += 1
    bc1 = 1.0 - state.beta1 ** state.step
    bc2 = 1.0 - state.beta2 ** state.step
    for name, p in params.items():
        g = grads[name]
        if state.weight_decay:
            g = g + state.weight_decay * p
        m = state.m.setdefault(name, np.zeros_like(p))
        v = state.v.setdefault(name, np.zeros_like(p))
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * np.square(g)
        p -= state.lr * (m / bc1) / (np.sqrt(v / bc2) + state.eps)
    return params, state
