"""Leave-one-out train / validation / test split."""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from src.config import MIN_USER_INTERACTIONS
from src.dataio.types import InteractionLog, SplitSet
from src.primitives.exceptions import ContractViolation, SplitError

logger = logging.getLogger(__name__)


def leave_one_out_split(
    log: InteractionLog,
    seed: int,
    strict: bool = False,
    n_users: Optional[int] = None,
    n_items: Optional[int] = None,
) -> SplitSet:
    """Hold out one validation and one test interaction per user.

    With timestamps the latest record is the test item and the second-latest
    the validation item. Without them both are drawn uniformly at random,
    users visited in ascending index order so the result only depends on
    `seed`.

    Args:
        log: remapped log (dense integer ids).
        seed: seed for the random variant.
        strict: raise instead of dropping users with fewer than three records.
            Dropped users leave the index space: the survivors are renumbered
            0..n-1 in their original order, so every user index has training rows.
        n_users: index space size; defaults to max user id + 1. Passing it
            together with users that would be dropped is a contract violation,
            since the caller's id maps would no longer line up.
        n_items: index space size; defaults to max item id + 1.

    Raises:
        SplitError: in strict mode when some user has fewer than three records,
            or when no user has enough.
        ContractViolation: ids are not dense, or `n_users` is given while
            sparse users would be dropped.
    """
    if not log.is_dense():
        raise ContractViolation("leave_one_out_split needs dense ids; call remap_ids first")
    frame = log.frame
    users = frame["user"].to_numpy(np.int64)
    n_items = int(frame["item"].max()) + 1 if n_items is None else n_items

    if log.has_timestamps:
        order = np.lexsort((frame["timestamp"].to_numpy(), users))
    else:
        order = np.argsort(users, kind="stable")
    sorted_users = users[order]
    uniq, starts, counts = np.unique(sorted_users, return_index=True, return_counts=True)

    sparse = uniq[counts < MIN_USER_INTERACTIONS]
    if len(sparse):
        if strict:
            raise SplitError(
                f"{len(sparse)} users have fewer than {MIN_USER_INTERACTIONS} interactions (first: {sparse[0]})",
                code="SPARSE_USER",
            )
        if n_users is not None:
            raise ContractViolation(
                f"n_users={n_users} given but {len(sparse)} sparse users would be dropped; call drop_sparse_users before remap_ids"
            )
        logger.warning("[SPLIT] dropping %d users with fewer than %d interactions", len(sparse), MIN_USER_INTERACTIONS)

    kept = uniq[counts >= MIN_USER_INTERACTIONS]
    if not len(kept):
        raise SplitError(f"no user has {MIN_USER_INTERACTIONS} or more interactions", code="EMPTY")
    renumber = len(kept) < len(uniq)
    if n_users is None:
        n_users = len(kept) if renumber else int(users.max()) + 1

    rng = np.random.default_rng(seed)
    role = np.zeros(len(frame), dtype=np.int8)  # 0 train, 1 val, 2 test, -1 dropped
    for start, count in zip(starts, counts):
        if count < MIN_USER_INTERACTIONS:
            role[order[start:start + count]] = -1
            continue
        if log.has_timestamps:
            test_pos, val_pos = start + count - 1, start + count - 2
        else:
            picks = rng.choice(count, size=2, replace=False)
            test_pos, val_pos = start + picks[0], start + picks[1]
        role[order[test_pos]] = 2
        role[order[val_pos]] = 1

    def part(code: int, by_user: bool) -> InteractionLog:
        sub = frame.loc[role == code]
        if renumber:
            sub = sub.assign(user=np.searchsorted(kept, sub["user"].to_numpy(np.int64)))
        if by_user:
            sub = sub.sort_values("user", kind="mergesort")
        return InteractionLog(sub.reset_index(drop=True))

    split = SplitSet(
        train=part(0, by_user=False),
        validation=part(1, by_user=True),
        test=part(2, by_user=True),
        n_users=n_users,
        n_items=n_items,
        seed=seed,
    )
    logger.info(
        "[SPLIT] train=%d val=%d test=%d (timestamps=%s, seed=%d)",
        len(split.train), len(split.validation), len(split.test), log.has_timestamps, seed,
    )
    return split
