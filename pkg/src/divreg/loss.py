"""Diversity loss L_div = Reg_cov + Reg_skew over a score block and its gradient."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.divreg.masking import TopMask, UnmaskPolicy, softmax_rows, top_mask, unmask
from src.divreg.minibatch import MiniBatchSpec, sample_minibatch
from src.divreg.regularizers import coverage_grad, coverage_reg, skewness_grad, skewness_reg
from src.mf.model import Gradients, MfModel, score_submatrix
from src.primitives.exceptions import ContractViolation, NonFiniteError


@dataclass(frozen=True, eq=False)
class BlockResult:
    loss: float
    cov: float
    skew: float
    grad_raw: np.ndarray
    mask: TopMask


@dataclass(frozen=True, eq=False)
class DivLossResult:
    loss: float
    cov: float
    skew: float
    grads: Gradients
    batch: MiniBatchSpec
    mask: TopMask


def evaluate_block(raw: np.ndarray, mask: TopMask, use_cov: bool = True, use_skew: bool = True) -> float:
    """Loss of a score block under a fixed mask."""
    soft = softmax_rows(raw)
    cov = coverage_reg(soft, mask) if use_cov else 0.0
    skew = skewness_reg(soft, mask) if use_skew else 0.0
    return cov + skew


def block_loss_and_grad(
    raw: np.ndarray,
    k: int,
    policy: UnmaskPolicy,
    rng: Optional[np.random.Generator] = None,
    use_cov: bool = True,
    use_skew: bool = True,
) -> BlockResult:
    """Build the mask from `raw`, then return L_div and dL_div/draw.

    The mask is treated as a constant, so masked entries still receive
    gradient through the softmax denominator.
    """
    if not (use_cov or use_skew):
        raise ContractViolation("at least one of coverage and skewness must be enabled")
    soft = softmax_rows(raw)
    mask = unmask(top_mask(soft, k), soft, policy.scheme, policy.n, rng)

    cov = coverage_reg(soft, mask) if use_cov else 0.0
    skew = skewness_reg(soft, mask) if use_skew else 0.0
    loss = cov + skew
    if not np.isfinite(loss):
        raise NonFiniteError(f"diversity loss is not finite (cov={cov}, skew={skew})")

    g_soft = np.zeros_like(soft)
    if use_cov:
        g_soft += coverage_grad(soft, mask)
    if use_skew:
        g_soft += skewness_grad(soft, mask)
    grad_raw = soft * (g_soft - (soft * g_soft).sum(axis=1, keepdims=True))
    return BlockResult(loss, cov, skew, grad_raw, mask)


def div_loss_and_grad(
    model: MfModel,
    r_b: int,
    c_b: int,
    k: int,
    policy: UnmaskPolicy,
    rng: np.random.Generator,
    use_cov: bool = True,
    use_skew: bool = True,
) -> DivLossResult:
    """Sample an (r_b x c_b) block and backpropagate L_div into P and Q.

    Rows and columns outside the block get zero gradient.
    """
    batch = sample_minibatch(model.n_users, model.n_items, r_b, c_b, k, rng)
    raw = score_submatrix(model, batch.users, batch.items)
    res = block_loss_and_grad(raw, batch.k_b, policy, rng, use_cov, use_skew)

    grads = Gradients.zeros_like(model, "div")
    grads.user_emb[batch.users] = res.grad_raw @ model.item_emb[batch.items]
    grads.item_emb[batch.items] = res.grad_raw.T @ model.user_emb[batch.users]
    return DivLossResult(res.loss, res.cov, res.skew, grads, batch, res.mask)
