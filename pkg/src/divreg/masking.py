"""Row softmax, top-k masking and unmasking of the score matrix."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import softmax

from src.config import DEFAULT_N_UNMASK, DEFAULT_UNMASK_SCHEME, UNMASK_SCHEMES
from src.primitives.exceptions import ConfigError, ContractViolation


def softmax_rows(raw: np.ndarray) -> np.ndarray:
    """Row-wise softmax; each row of the result sums to 1."""
    if raw.ndim != 2:
        raise ContractViolation(f"expected a 2-D score block, got shape {raw.shape}")
    return softmax(raw, axis=1)


@dataclass(frozen=True, eq=False)
class TopMask:
    """Boolean keep-mask M over a score block (True = kept)."""

    keep: np.ndarray

    @property
    def shape(self):
        return self.keep.shape

    def apply(self, soft: np.ndarray) -> np.ndarray:
        """T = M (.) S."""
        return np.where(self.keep, soft, 0.0)

    def row_counts(self) -> np.ndarray:
        return self.keep.sum(axis=1)


@dataclass(frozen=True)
class UnmaskPolicy:
    scheme: str = DEFAULT_UNMASK_SCHEME
    n: int = DEFAULT_N_UNMASK

    def __post_init__(self) -> None:
        if self.scheme not in UNMASK_SCHEMES:
            raise ConfigError(f"unknown unmask scheme {self.scheme!r}; expected one of {UNMASK_SCHEMES}")
        if self.n < 0:
            raise ConfigError(f"unmask count must be >= 0, got {self.n}")


def top_mask(soft: np.ndarray, k: int) -> TopMask:
    """Keep entries not strictly smaller than the row's k-th largest value.

    Ties at the boundary are all kept, so a row may keep more than k entries.
    """
    cols = soft.shape[1]
    if not 1 <= k <= cols:
        raise ContractViolation(f"k={k} outside [1, {cols}]")
    kth = np.partition(soft, cols - k, axis=1)[:, cols - k:cols - k + 1]
    return TopMask(soft >= kth)


def unmask(
    mask: TopMask,
    soft: np.ndarray,
    scheme: str,
    n: int,
    rng: Optional[np.random.Generator] = None,
) -> TopMask:
    """Add up to `n` extra kept entries per row.

    `top_plus` keeps the n highest-scoring masked entries, `random` n masked
    entries chosen uniformly, `none` leaves the mask alone. A row never keeps
    more than all of its entries.
    """
    UnmaskPolicy(scheme, n)
    if scheme == "none" or n == 0:
        return mask
    keep = mask.keep.copy()
    rows, cols = keep.shape
    free = cols - mask.row_counts()
    n_take = min(n, int(free.max()) if rows else 0)
    if n_take == 0:
        return mask
    if scheme == "top_plus":
        key = np.where(keep, -np.inf, soft)
        picked = np.argpartition(-key, n_take - 1, axis=1)[:, :n_take]
    else:
        if rng is None:
            raise ContractViolation("random unmasking needs a generator")
        key = np.where(keep, np.inf, rng.random(keep.shape))
        picked = np.argpartition(key, n_take - 1, axis=1)[:, :n_take]
    # rows with fewer than n_take free entries re-pick kept ones
    keep[np.arange(rows)[:, None], picked] = True
    return TopMask(keep)
