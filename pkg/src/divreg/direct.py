"""Direct optimization of a free score matrix under L_div.

Useful to study the regularizer in isolation from the factorization.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from src.divreg.loss import block_loss_and_grad
from src.divreg.masking import UnmaskPolicy
from src.mf.optim import AdamState, adam_step

logger = logging.getLogger(__name__)


@dataclass
class DirectTrace:
    scores: np.ndarray
    steps: int = 0
    losses: List[float] = field(default_factory=list)
    stopped_early: bool = False


def optimize_scores(
    raw: np.ndarray,
    k: int,
    policy: UnmaskPolicy,
    rng: Optional[np.random.Generator] = None,
    lr: float = 0.01,
    max_steps: int = 2000,
    stop_when: Optional[Callable[[np.ndarray], bool]] = None,
    use_cov: bool = True,
    use_skew: bool = True,
) -> DirectTrace:
    """Run Adam on the raw scores themselves; the input array is not modified."""
    scores = np.array(raw, dtype=np.float64, copy=True)
    state = AdamState(lr=lr, weight_decay=0.0)
    trace = DirectTrace(scores)
    for _ in range(max_steps):
        res = block_loss_and_grad(scores, k, policy, rng, use_cov, use_skew)
        adam_step(state, {"scores": scores}, {"scores": res.grad_raw})
        trace.steps += 1
        trace.losses.append(res.loss)
        if stop_when is not None and stop_when(scores):
            trace.stopped_early = True
            break
    logger.debug("[DIRECT] %d steps, final loss %.6f", trace.steps, trace.losses[-1] if trace.losses else float("nan"))
    return trace
