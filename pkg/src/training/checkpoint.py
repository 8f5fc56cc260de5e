"""
AID: /src/training/checkpoint.py
Purpose: Binary model checkpoints.

Layout: one ASCII header line `divmf-ckpt v1 users=<n> items=<m> d=<d>`
followed by P then Q as little-endian float64, row-major.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from src.mf.model import MfModel
from src.primitives.exceptions import CheckpointShapeError, CorruptCheckpointError

logger = logging.getLogger(__name__)

MAGIC = "divmf-ckpt"
VERSION = "v1"
FLOAT = np.dtype("<f8")


def save_checkpoint(model: MfModel, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = f"{MAGIC} {VERSION} users={model.n_users} items={model.n_items} d={model.d}\n"
    with open(path, "wb") as f:
        f.write(header.encode("ascii"))
        f.write(np.ascontiguousarray(model.user_emb, dtype=FLOAT).tobytes())
        f.write(np.ascontiguousarray(model.item_emb, dtype=FLOAT).tobytes())
    logger.info("[CKPT] saved %s (%dx%d, %d items)", path, model.n_users, model.d, model.n_items)
    return path


def _read_header(data: bytes, path: Path) -> Tuple[int, int, int, int]:
    end = data.find(b"\n")
    if end < 0:
        raise CorruptCheckpointError(f"{path}: no header line")
    try:
        parts = data[:end].decode("ascii").split()
    except UnicodeDecodeError as e:
        raise CorruptCheckpointError(f"{path}: header is not ASCII") from e
    if len(parts) != 5 or parts[0] != MAGIC or parts[1] != VERSION:
        raise CorruptCheckpointError(f"{path}: not a {MAGIC} {VERSION} file")
    try:
        fields = {k: int(v) for k, v in (p.split("=", 1) for p in parts[2:])}
        return fields["users"], fields["items"], fields["d"], end + 1
    except (KeyError, ValueError) as e:
        raise CorruptCheckpointError(f"{path}: malformed header {data[:end]!r}") from e


def load_checkpoint(path, expected: Optional[Tuple[int, int]] = None) -> MfModel:
    """Read a checkpoint written by `save_checkpoint`.

    Args:
        expected: (n_users, n_items) the caller's dataset requires.

    Raises:
        CorruptCheckpointError: bad magic, bad header or truncated payload.
        CheckpointShapeError: payload or `expected` disagree with the header shape.
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise CorruptCheckpointError(f"cannot read {path}: {e}") from e
    n_users, n_items, d, offset = _read_header(data, path)
    payload = data[offset:]
    rows = n_users + n_items
    if len(payload) % FLOAT.itemsize:
        raise CorruptCheckpointError(f"{path}: truncated payload ({len(payload)} bytes)")
    count = len(payload) // FLOAT.itemsize
    if count != rows * d:
        if rows and count and count % rows == 0:
            raise CheckpointShapeError(f"{path}: header says d={d} but payload holds d={count // rows}")
        raise CorruptCheckpointError(f"{path}: payload has {count} floats, expected {rows * d}")
    if expected is not None and tuple(expected) != (n_users, n_items):
        raise CheckpointShapeError(
            f"{path}: checkpoint is {n_users} users x {n_items} items, dataset is {expected[0]} x {expected[1]}"
        )
    flat = np.frombuffer(payload, dtype=FLOAT).astype(np.float64)
    return MfModel(flat[:n_users * d].reshape(n_users, d).copy(), flat[n_users * d:].reshape(n_items, d).copy())
