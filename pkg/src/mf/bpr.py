from __future__ import annotations

from typing import Tuple

import numpy as np
from scipy.special import expit

from src.mf.model import Gradients, MfModel
from src.mf.sampling import BprBatch
from src.primitives.exceptions import NonFiniteError


def bpr_loss_and_grad(model: MfModel, batch: BprBatch) -> Tuple[float, Gradients]:
    """Summed BPR loss -log sigmoid(x_uij) over the batch and its exact gradient.

    x_uij = P_u . (Q_i - Q_j). Repeated indices accumulate.
    """
    p = model.user_emb[batch.users]
    diff = model.item_emb[batch.pos] - model.item_emb[batch.neg]
    x = np.einsum("bd,bd->b", p, diff)
    if not np.isfinite(x).all():
        raise NonFiniteError("BPR margins are not finite")
    loss = float(np.logaddexp(0.0, -x).sum())

    coef = -expit(-x)[:, None]
    grads = Gradients.zeros_like(model, "bpr")
    np.add.at(grads.user_emb, batch.users, coef * diff)
    np.add.at(grads.item_emb, batch.pos, coef * p)
    np.add.at(grads.item_emb, batch.neg, -coef * p)
    return loss, grads
