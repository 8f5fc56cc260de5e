from src.divreg.direct import DirectTrace, optimize_scores
from src.divreg.loss import BlockResult, DivLossResult, block_loss_and_grad, div_loss_and_grad, evaluate_block
from src.divreg.masking import TopMask, UnmaskPolicy, softmax_rows, top_mask, unmask
from src.divreg.minibatch import MiniBatchSpec, sample_minibatch, scaled_k
from src.divreg.regularizers import coverage_grad, coverage_reg, skewness_grad, skewness_reg

__all__ = [
    "BlockResult",
    "DirectTrace",
    "DivLossResult",
    "MiniBatchSpec",
    "TopMask",
    "UnmaskPolicy",
    "block_loss_and_grad",
    "coverage_grad",
    "coverage_reg",
    "div_loss_and_grad",
    "evaluate_block",
    "optimize_scores",
    "sample_minibatch",
    "scaled_k",
    "skewness_grad",
    "skewness_reg",
    "softmax_rows",
    "top_mask",
    "unmask",
]
