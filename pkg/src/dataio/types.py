"""Core data containers for interaction logs, id maps and leave-one-out splits."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Iterator, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import scipy.sparse as sp

from src.primitives.exceptions import ContractViolation

REQUIRED_COLUMNS = ("user", "item", "rating")


@dataclass(frozen=True, eq=False)
class InteractionLog:
    """Sparse user-item interaction set R, one row per (user, item) record.

    The frame holds columns `user`, `item`, `rating` and, when every record
    carries one, `timestamp` (integer seconds). Operations never mutate a
    log; they return a new one.
    """

    frame: pd.DataFrame

    def __post_init__(self) -> None:
        missing = [c for c in REQUIRED_COLUMNS if c not in self.frame.columns]
        if missing:
            raise ContractViolation(f"interaction frame lacks columns {missing}")

    @property
    def has_timestamps(self) -> bool:
        return "timestamp" in self.frame.columns

    @property
    def n_users(self) -> int:
        return int(self.frame["user"].nunique())

    @property
    def n_items(self) -> int:
        return int(self.frame["item"].nunique())

    def __len__(self) -> int:
        return len(self.frame)

    def records(self) -> Iterator[Tuple[Any, Any, float, Optional[int]]]:
        ts = self.frame["timestamp"] if self.has_timestamps else None
        for pos, (u, i, r) in enumerate(
            zip(self.frame["user"], self.frame["item"], self.frame["rating"])
        ):
            yield u, i, float(r), (int(ts.iat[pos]) if ts is not None else None)

    def is_dense(self) -> bool:
        """True when users and items are already integer indices."""
        return pd.api.types.is_integer_dtype(self.frame["user"]) and pd.api.types.is_integer_dtype(
            self.frame["item"]
        )

    @classmethod
    def from_records(cls, records: Sequence[Sequence[Any]]) -> "InteractionLog":
        """Build a log from (user, item[, rating[, timestamp]]) tuples."""
        users, items, ratings, stamps = [], [], [], []
        for rec in records:
            users.append(rec[0])
            items.append(rec[1])
            ratings.append(float(rec[2]) if len(rec) > 2 and rec[2] is not None else 1.0)
            stamps.append(rec[3] if len(rec) > 3 else None)
        frame = pd.DataFrame({"user": users, "item": items, "rating": np.asarray(ratings, dtype=np.float64)})
        if stamps and all(s is not None for s in stamps):
            frame["timestamp"] = np.asarray(stamps, dtype=np.int64)
        return cls(frame)


@dataclass(frozen=True)
class IdMaps:
    """Bijections between raw tokens and dense indices [0, |U|) / [0, |I|)."""

    user_tokens: Tuple[Any, ...]
    item_tokens: Tuple[Any, ...]

    @cached_property
    def user_index(self) -> Dict[Any, int]:
        return {tok: idx for idx, tok in enumerate(self.user_tokens)}

    @cached_property
    def item_index(self) -> Dict[Any, int]:
        return {tok: idx for idx, tok in enumerate(self.item_tokens)}

    @property
    def n_users(self) -> int:
        return len(self.user_tokens)

    @property
    def n_items(self) -> int:
        return len(self.item_tokens)

    def user_id(self, token: Any) -> int:
        return self.user_index[token]

    def item_id(self, token: Any) -> int:
        return self.item_index[token]

    def user_token(self, index: int) -> Any:
        return self.user_tokens[index]

    def item_token(self, index: int) -> Any:
        return self.item_tokens[index]


@dataclass(frozen=True, eq=False)
class SplitSet:
    """Leave-one-out split over dense indices.

    `validation` and `test` hold exactly one record per evaluated user,
    sorted by user index.
    """

    train: InteractionLog
    validation: InteractionLog
    test: InteractionLog
    n_users: int
    n_items: int
    seed: int = 0

    def held_out(self, role: str) -> Tuple[np.ndarray, np.ndarray]:
        """(users, items) arrays of the `val` or `test` part."""
        if role in ("val", "validation"):
            frame = self.validation.frame
        elif role == "test":
            frame = self.test.frame
        else:
            raise ContractViolation(f"unknown held-out role {role!r}")
        return frame["user"].to_numpy(np.int64), frame["item"].to_numpy(np.int64)

    def train_matrix(self) -> sp.csr_matrix:
        users = self.train.frame["user"].to_numpy(np.int64)
        items = self.train.frame["item"].to_numpy(np.int64)
        data = np.ones(len(users), dtype=np.float64)
        return sp.csr_matrix((data, (users, items)), shape=(self.n_users, self.n_items))
