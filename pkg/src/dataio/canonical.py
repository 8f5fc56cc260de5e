"""Canonical on-disk layout of a preprocessed dataset.

    <dir>/interactions.tsv   header `users=.. items=.. interactions=..`, rows `u<TAB>i<TAB>t`
    <dir>/split.tsv          same plus `seed=..` in the header and a role column
    <dir>/user_ids.tsv, item_ids.tsv   rows `index<TAB>raw token`

A missing timestamp is written as `-`.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, Tuple

import numpy as np
import pandas as pd

from src.dataio.types import IdMaps, InteractionLog, SplitSet
from src.primitives.exceptions import DatasetError

logger = logging.getLogger(__name__)

INTERACTIONS_FILE = "interactions.tsv"
SPLIT_FILE = "split.tsv"
USER_MAP_FILE = "user_ids.tsv"
ITEM_MAP_FILE = "item_ids.tsv"
ROLES = ("train", "val", "test")


def _header(**fields) -> str:
    return " ".join(f"{k}={v}" for k, v in fields.items()) + "\n"


def _parse_header(line: str, path: Path) -> Dict[str, int]:
    try:
        return {k: int(v) for k, v in (tok.split("=", 1) for tok in line.split())}
    except ValueError as e:
        raise DatasetError(f"{path}: bad header {line.strip()!r}", code="CANONICAL") from e


def _body(log: InteractionLog) -> pd.DataFrame:
    stamps = log.frame["timestamp"].astype(str) if log.has_timestamps else "-"
    return pd.DataFrame({"user": log.frame["user"], "item": log.frame["item"], "timestamp": stamps})


def _read_body(path: Path, names) -> pd.DataFrame:
    try:
        return pd.read_csv(path, sep="\t", header=None, names=names, skiprows=1, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DatasetError(f"cannot read {path}: {e}", code="CANONICAL") from e


def _to_log(body: pd.DataFrame) -> InteractionLog:
    frame = pd.DataFrame(
        {
            "user": body["user"].astype(np.int64).to_numpy(),
            "item": body["item"].astype(np.int64).to_numpy(),
            "rating": 1.0,
        }
    )
    if len(body) and (body["timestamp"] != "-").all():
        frame["timestamp"] = body["timestamp"].astype(np.int64).to_numpy()
    return InteractionLog(frame)


def write_dataset(log: InteractionLog, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(_header(users=log.n_users, items=log.n_items, interactions=len(log)))
        _body(log).to_csv(f, sep="\t", header=False, index=False, lineterminator="\n")
    return path


def read_dataset(path) -> Tuple[InteractionLog, Dict[str, int]]:
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"{path} does not exist", code="UNREADABLE")
    with open(path, encoding="utf-8") as f:
        header = _parse_header(f.readline(), path)
    log = _to_log(_read_body(path, ["user", "item", "timestamp"]))
    if header.get("interactions") != len(log):
        raise DatasetError(f"{path}: header promises {header.get('interactions')} rows, found {len(log)}", code="CANONICAL")
    return log, header


def write_split(split: SplitSet, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    parts = []
    for role, log in zip(ROLES, (split.train, split.validation, split.test)):
        parts.append(_body(log).assign(role=role))
    body = pd.concat(parts, ignore_index=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(_header(users=split.n_users, items=split.n_items, interactions=len(body), seed=split.seed))
        body.to_csv(f, sep="\t", header=False, index=False, lineterminator="\n")
    logger.info("[DATA] wrote split %s (%d rows, seed=%d)", path, len(body), split.seed)
    return path


def read_split(path) -> SplitSet:
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"{path} does not exist; run preprocess first", code="UNREADABLE")
    with open(path, encoding="utf-8") as f:
        header = _parse_header(f.readline(), path)
    body = _read_body(path, ["user", "item", "timestamp", "role"])
    unknown = set(body["role"]) - set(ROLES)
    if unknown:
        raise DatasetError(f"{path}: unknown roles {sorted(unknown)}", code="CANONICAL")
    logs = [_to_log(body.loc[body["role"] == role].reset_index(drop=True)) for role in ROLES]
    for key in ("users", "items"):
        if key not in header:
            raise DatasetError(f"{path}: header lacks {key}=", code="CANONICAL")
    return SplitSet(logs[0], logs[1], logs[2], header["users"], header["items"], header.get("seed", 0))


def _write_tokens(path: Path, tokens) -> None:
    pd.DataFrame({"index": range(len(tokens)), "token": list(tokens)}).to_csv(
        path, sep="\t", header=False, index=False, lineterminator="\n"
    )


def _read_tokens(path: Path) -> tuple:
    try:
        frame = pd.read_csv(path, sep="\t", header=None, names=["index", "token"], dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DatasetError(f"cannot read id map {path}: {e}", code="UNREADABLE") from e
    if not (frame["index"].astype(np.int64).to_numpy() == np.arange(len(frame))).all():
        raise DatasetError(f"{path}: indices are not 0..n-1 in order", code="CANONICAL")
    return tuple(frame["token"])


def write_id_maps(maps: IdMaps, directory) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    _write_tokens(directory / USER_MAP_FILE, maps.user_tokens)
    _write_tokens(directory / ITEM_MAP_FILE, maps.item_tokens)


def read_id_maps(directory) -> IdMaps:
    directory = Path(directory)
    return IdMaps(_read_tokens(directory / USER_MAP_FILE), _read_tokens(directory / ITEM_MAP_FILE))
