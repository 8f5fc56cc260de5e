"""Filtering and re-indexing passes over an `InteractionLog`."""

from __future__ import annotations

import logging
from typing import Tuple

import numpy as np
import pandas as pd

from src.config import MIN_USER_INTERACTIONS
from src.dataio.types import IdMaps, InteractionLog
from src.primitives.exceptions import ContractViolation, DatasetError

logger = logging.getLogger(__name__)


def to_implicit(log: InteractionLog) -> InteractionLog:
    """Every observed record becomes a positive with rating 1.0."""
    return InteractionLog(log.frame.assign(rating=1.0))


def kcore_filter(log: InteractionLog, core: int) -> InteractionLog:
    """Peel users and items with fewer than `core` interactions to a fixed point.

    The survivors form the maximal sub-log in which every user and item has
    at least `core` records.

    Raises:
        DatasetError: when nothing survives.
    """
    if core < 1:
        raise ContractViolation(f"core must be >= 1, got {core}")
    frame = log.frame
    rounds = 0
    while True:
        user_deg = frame.groupby("user", sort=False)["item"].transform("size")
        item_deg = frame.groupby("item", sort=False)["user"].transform("size")
        keep = (user_deg >= core) & (item_deg >= core)
        if keep.all():
            break
        frame = frame.loc[keep]
        rounds += 1
    if frame.empty:
        raise DatasetError(f"{core}-core filtering removed every interaction", code="EMPTY_AFTER_KCORE")
    frame = frame.reset_index(drop=True)
    logger.info(
        "[KCORE] core=%d rounds=%d kept %d/%d records (%d users, %d items)",
        core, rounds, len(frame), len(log), frame["user"].nunique(), frame["item"].nunique(),
    )
    return InteractionLog(frame)


def drop_sparse_users(log: InteractionLog, minimum: int = MIN_USER_INTERACTIONS) -> InteractionLog:
    """Remove users with fewer than `minimum` interactions."""
    degree = log.frame.groupby("user", sort=False)["item"].transform("size")
    keep = degree >= minimum
    dropped = log.frame.loc[~keep, "user"].nunique()
    if dropped:
        logger.warning("[DATA] dropping %d users with fewer than %d interactions", dropped, minimum)
    frame = log.frame.loc[keep].reset_index(drop=True)
    if frame.empty:
        raise DatasetError(f"no user has {minimum} or more interactions", code="EMPTY")
    return InteractionLog(frame)


def subsample_users(log: InteractionLog, n_users: int, seed: int) -> InteractionLog:
    """Keep the records of `n_users` users drawn uniformly without replacement."""
    users = pd.unique(log.frame["user"])
    if n_users < 1:
        raise ContractViolation(f"n_users must be >= 1, got {n_users}")
    if n_users >= len(users):
        return log
    rng = np.random.default_rng(seed)
    chosen = users[np.sort(rng.choice(len(users), size=n_users, replace=False))]
    frame = log.frame.loc[log.frame["user"].isin(chosen)].reset_index(drop=True)
    logger.info("[DATA] subsampled %d of %d users (%d records)", n_users, len(users), len(frame))
    return InteractionLog(frame)


def remap_ids(log: InteractionLog) -> Tuple[InteractionLog, IdMaps]:
    """Assign dense indices in order of first appearance."""
    user_codes, user_tokens = pd.factorize(log.frame["user"], sort=False)
    item_codes, item_tokens = pd.factorize(log.frame["item"], sort=False)
    frame = log.frame.assign(user=user_codes.astype(np.int64), item=item_codes.astype(np.int64))
    maps = IdMaps(tuple(user_tokens.tolist()), tuple(item_tokens.tolist()))
    return InteractionLog(frame), maps
