"""Coverage and skewness regularizers on the masked soft score block.

With T = M (.) S, column mass c_i = sum_u T_ui and row-normalized
T'_ui = T_ui / z_u:

    Reg_cov  = -sum_i log(c_i + eps)
    Reg_skew =  sum_u sum_i T'_ui log T'_ui

The gradients below are with respect to T, restricted to kept entries.
"""

from __future__ import annotations

import numpy as np
from scipy.special import xlogy

from src.config import EPS_LOG
from src.divreg.masking import TopMask
from src.primitives.exceptions import ContractViolation


def coverage_reg(soft: np.ndarray, mask: TopMask) -> float:
    col = mask.apply(soft).sum(axis=0)
    return float(-np.log(col + EPS_LOG).sum())


def coverage_grad(soft: np.ndarray, mask: TopMask) -> np.ndarray:
    col = mask.apply(soft).sum(axis=0, keepdims=True)
    return np.where(mask.keep, -1.0 / (col + EPS_LOG), 0.0)


def _row_normalized(soft: np.ndarray, mask: TopMask):
    if not mask.keep.any(axis=1).all():
        raise ContractViolation("a row of the score block is fully masked")
    t = mask.apply(soft)
    z = t.sum(axis=1, keepdims=True)
    if not (z > 0).all():
        raise ContractViolation("a row of the score block has no kept mass")
    return t / z, z


def skewness_reg(soft: np.ndarray, mask: TopMask) -> float:
    tn, _ = _row_normalized(soft, mask)
    return float(xlogy(tn, tn).sum())


def skewness_grad(soft: np.ndarray, mask: TopMask) -> np.ndarray:
    tn, z = _row_normalized(soft, mask)
    live = mask.keep & (tn > 0)
    log_tn = np.log(np.where(live, tn, 1.0))
    row_entropy = xlogy(tn, tn).sum(axis=1, keepdims=True)
    return np.where(mask.keep, (log_tn - row_entropy) / z, 0.0)
