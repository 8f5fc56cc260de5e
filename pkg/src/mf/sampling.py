"""Training-interaction index and BPR triple sampling."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np
import scipy.sparse as sp

from src.dataio.types import SplitSet
from src.primitives.exceptions import ContractViolation

logger = logging.getLogger(__name__)


class BprTriple(NamedTuple):
    user: int
    pos: int
    neg: int


@dataclass(frozen=True, eq=False)
class BprBatch:
    users: np.ndarray
    pos: np.ndarray
    neg: np.ndarray

    def __len__(self) -> int:
        return len(self.users)

    def __iter__(self) -> Iterator[BprTriple]:
        for u, i, j in zip(self.users, self.pos, self.neg):
            yield BprTriple(int(u), int(i), int(j))


class InteractionIndex:
    """CSR view of the training interactions with O(log n) membership tests."""

    def __init__(self, users: np.ndarray, items: np.ndarray, n_users: int, n_items: int):
        users = np.asarray(users, dtype=np.int64)
        items = np.asarray(items, dtype=np.int64)
        matrix = sp.csr_matrix((np.ones(len(users)), (users, items)), shape=(n_users, n_items))
        matrix.sum_duplicates()
        matrix.sort_indices()
        matrix.data[:] = 1.0
        self.matrix = matrix
        self.n_users = n_users
        self.n_items = n_items
        self.degree = np.diff(matrix.indptr)
        self.users = np.repeat(np.arange(n_users, dtype=np.int64), self.degree)
        self.items = matrix.indices.astype(np.int64)
        self._keys = self.users * n_items + self.items

        full = self.degree >= n_items
        if full.any():
            logger.warning("[BPR] %d users interacted with every item; they get no BPR updates", int(full.sum()))
        self.sampleable = np.flatnonzero(~full[self.users])

    @classmethod
    def from_split(cls, split: SplitSet) -> "InteractionIndex":
        frame = split.train.frame
        return cls(frame["user"].to_numpy(), frame["item"].to_numpy(), split.n_users, split.n_items)

    def __len__(self) -> int:
        return len(self.items)

    def contains(self, users: np.ndarray, items: np.ndarray) -> np.ndarray:
        keys = np.asarray(users, dtype=np.int64) * self.n_items + np.asarray(items, dtype=np.int64)
        if len(self._keys) == 0:
            return np.zeros(keys.shape, dtype=bool)
        pos = np.searchsorted(self._keys, keys)
        pos = np.minimum(pos, len(self._keys) - 1)
        return self._keys[pos] == keys

    def positives(self, user: int) -> np.ndarray:
        return self.matrix.indices[self.matrix.indptr[user]:self.matrix.indptr[user + 1]]

    def _negatives(self, users: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        neg = rng.integers(self.n_items, size=len(users))
        bad = self.contains(users, neg)
        while bad.any():
            neg[bad] = rng.integers(self.n_items, size=int(bad.sum()))
            bad[bad] = self.contains(users[bad], neg[bad])
        return neg

    def batch(self, positions: np.ndarray, rng: np.random.Generator) -> BprBatch:
        users = self.users[positions]
        return BprBatch(users, self.items[positions], self._negatives(users, rng))


def sample_bpr_triples(index: InteractionIndex, batch_size: int, rng: np.random.Generator) -> BprBatch:
    """Draw `batch_size` (u, i, j) with (u, i) a training positive and (u, j) not."""
    if batch_size < 1:
        raise ContractViolation(f"batch_size must be >= 1, got {batch_size}")
    if len(index.sampleable) == 0:
        raise ContractViolation("no user has an unobserved item to sample as negative")
    picks = index.sampleable[rng.integers(len(index.sampleable), size=batch_size)]
    return index.batch(picks, rng)


def iter_epoch_batches(index: InteractionIndex, batch_size: int, rng: np.random.Generator) -> Iterator[BprBatch]:
    """One pass over every sampleable positive in shuffled order."""
    if len(index.sampleable) == 0:
        raise ContractViolation("no user has an unobserved item to sample as negative")
    order = rng.permutation(index.sampleable)
    for start in range(0, len(order), batch_size):
        yield index.batch(order[start:start + batch_size], rng)
