from src.mf.bpr import bpr_loss_and_grad
from src.mf.model import Gradients, MfModel, init_model, score_submatrix
from src.mf.optim import AdamState, adam_step
from src.mf.sampling import BprBatch, BprTriple, InteractionIndex, iter_epoch_batches, sample_bpr_triples

__all__ = [
    "AdamState",
    "BprBatch",
    "BprTriple",
    "Gradients",
    "InteractionIndex",
    "MfModel",
    "adam_step",
    "bpr_loss_and_grad",
    "init_model",
    "iter_epoch_batches",
    "sample_bpr_triples",
    "score_submatrix",
]
