from pathlib import Path

import numpy as np
import pytest

from src.dataio.split import leave_one_out_split
from src.dataio.transforms import remap_ids
from src.dataio.types import InteractionLog, SplitSet


@pytest.fixture
def two_cluster_split() -> SplitSet:
    """Users 0-1 like items 0-2, users 2-3 like items 3-5.

    Timestamps make each user's validation item the one cluster item they
    have not trained on; the test item is from the other cluster.
    """
    records = [
        ("a", 0, 1.0, 1), ("a", 1, 1.0, 2), ("a", 2, 1.0, 3), ("a", 3, 1.0, 4),
        ("b", 1, 1.0, 1), ("b", 2, 1.0, 2), ("b", 0, 1.0, 3), ("b", 4, 1.0, 4),
        ("c", 3, 1.0, 1), ("c", 4, 1.0, 2), ("c", 5, 1.0, 3), ("c", 0, 1.0, 4),
        ("d", 4, 1.0, 1), ("d", 5, 1.0, 2), ("d", 3, 1.0, 3), ("d", 1, 1.0, 4),
    ]
    log, _ = remap_ids(InteractionLog.from_records(records))
    return leave_one_out_split(log, seed=0)


@pytest.fixture
def synthetic_log() -> InteractionLog:
    """40 users x 30 items, 8 distinct items per user, skewed item popularity, timestamps."""
    rng = np.random.default_rng(7)
    pop = 1.0 / np.arange(1, 31)
    pop /= pop.sum()
    records = []
    for u in range(40):
        items = rng.choice(30, size=8, replace=False, p=pop)
        for t, i in enumerate(items):
            records.append((f"u{u}", f"i{i}", 4.0, 1000 * u + t))
    return InteractionLog.from_records(records)


@pytest.fixture
def synthetic_csv(tmp_path: Path, synthetic_log: InteractionLog) -> Path:
    path = tmp_path / "ratings.csv"
    lines = [f"{u},{i},{r},{t}" for u, i, r, t in synthetic_log.records()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
