"""Top-k recommendation lists with training items excluded."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import scipy.sparse as sp

from src.mf.model import MfModel
from src.primitives.exceptions import ContractViolation, DatasetError, NonFiniteError

SCORE_CHUNK = 1024


@dataclass(frozen=True, eq=False)
class RecLists:
    """users[r] is recommended items[r, 0..k-1], best first."""

    users: np.ndarray
    items: np.ndarray

    @property
    def k(self) -> int:
        return self.items.shape[1]

    def __len__(self) -> int:
        return len(self.users)

    def to_text(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for u, row in zip(self.users, self.items):
                f.write(f"{u}: {' '.join(str(i) for i in row)}\n")
        return path

    @classmethod
    def from_text(cls, path) -> "RecLists":
        users, rows = [], []
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            try:
                user, items = line.split(":")
                users.append(int(user))
                rows.append([int(i) for i in items.split()])
            except ValueError as e:
                raise DatasetError(f"{path}:{lineno}: malformed recommendation line", code="MALFORMED_LINE") from e
        if len({len(r) for r in rows}) > 1:
            raise DatasetError(f"{path}: recommendation lists differ in length", code="MALFORMED_LINE")
        return cls(np.asarray(users, dtype=np.int64), np.asarray(rows, dtype=np.int64).reshape(len(users), -1))


def recommend_topk(model: MfModel, train: sp.csr_matrix, k: int, users: Optional[np.ndarray] = None) -> RecLists:
    """Highest-scoring k items per user among items not in `train`.

    Equal scores are ordered by ascending item index.

    Raises:
        ContractViolation: when some user has fewer than k unseen items.
    """
    users = np.arange(model.n_users, dtype=np.int64) if users is None else np.asarray(users, dtype=np.int64)
    if train.shape != (model.n_users, model.n_items):
        raise ContractViolation(f"train matrix shape {train.shape} != model shape {(model.n_users, model.n_items)}")
    if k < 1:
        raise ContractViolation(f"k must be >= 1, got {k}")
    degree = np.diff(train.indptr)[users]
    if len(users) and k > model.n_items - int(degree.max()):
        raise ContractViolation(f"k={k} exceeds the unseen items of some user ({model.n_items - int(degree.max())})")

    out = np.empty((len(users), k), dtype=np.int64)
    item_t = model.item_emb.T.astype(np.float64)
    for start in range(0, len(users), SCORE_CHUNK):
        chunk = users[start:start + SCORE_CHUNK]
        scores = model.user_emb[chunk].astype(np.float64) @ item_t
        if not np.isfinite(scores).all():
            raise NonFiniteError("recommendation scores contain NaN or Inf")
        rows, cols = train[chunk].nonzero()
        scores[rows, cols] = -np.inf
        out[start:start + len(chunk)] = np.argsort(-scores, axis=1, kind="stable")[:, :k]
    return RecLists(users, out)
