from typing import Callable, Dict

import numpy as np

from src.mf.model import MfModel


def random_model(n_users: int, n_items: int, d: int, seed: int, scale: float = 0.5) -> MfModel:
    rng = np.random.default_rng(seed)
    return MfModel(rng.normal(scale=scale, size=(n_users, d)), rng.normal(scale=scale, size=(n_items, d)))


def numeric_grads(loss: Callable[[MfModel], float], model: MfModel, h: float = 1e-4) -> Dict[str, np.ndarray]:
    """Central finite differences of `loss` for every parameter entry."""
    out = {}
    for name, param in model.parameters().items():
        grad = np.zeros_like(param)
        for idx in np.ndindex(param.shape):
            orig = param[idx]
            param[idx] = orig + h
            up = loss(model)
            param[idx] = orig - h
            down = loss(model)
            param[idx] = orig
            grad[idx] = (up - down) / (2 * h)
        out[name] = grad
    return out


def max_relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-3) -> float:
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return float((np.abs(analytic - numeric) / denom).max())
