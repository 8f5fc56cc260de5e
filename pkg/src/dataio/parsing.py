"""Raw interaction file parsing.

Every supported dataset is a delimiter-separated text file with one record
per line. `FormatSpec` names the delimiter and the column layout; records
are deduplicated on (user, item), keeping the earliest occurrence.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.dataio.types import InteractionLog
from src.primitives.exceptions import DatasetError

logger = logging.getLogger(__name__)

KNOWN_COLUMNS = ("user", "item", "rating", "timestamp", "skip")


@dataclass(frozen=True)
class FormatSpec:
    delimiter: str = ","
    columns: Tuple[str, ...] = ("user", "item", "rating", "timestamp")
    header: bool = False
    regex: bool = False

    def __post_init__(self) -> None:
        unknown = [c for c in self.columns if c not in KNOWN_COLUMNS]
        if unknown:
            raise DatasetError(f"unknown column names {unknown}", code="FORMAT")
        if "user" not in self.columns or "item" not in self.columns:
            raise DatasetError("format needs both a user and an item column", code="FORMAT")

    def position(self, name: str) -> Optional[int]:
        return self.columns.index(name) if name in self.columns else None


FORMATS: Dict[str, FormatSpec] = {
    "csv": FormatSpec(","),
    "tsv": FormatSpec("\t"),
    "movielens": FormatSpec("::"),
    "whitespace": FormatSpec(r"\s+", ("user", "item", "rating"), regex=True),
    "gowalla": FormatSpec("\t", ("user", "timestamp", "skip", "skip", "item")),
}


def _splitter(spec: FormatSpec):
    if spec.regex:
        pattern = re.compile(spec.delimiter)
        return pattern.split
    return lambda line: line.split(spec.delimiter)


def _to_seconds(raw: List[str], path: Path) -> np.ndarray:
    numeric = pd.to_numeric(pd.Series(raw), errors="coerce")
    if not numeric.isna().any():
        return numeric.to_numpy().astype(np.int64)
    try:
        stamps = pd.to_datetime(pd.Series(raw), utc=True)
    except (ValueError, TypeError) as e:
        raise DatasetError(f"{path}: timestamps are neither integers nor ISO-8601: {e}", code="MALFORMED_LINE") from e
    seconds = (stamps - pd.Timestamp("1970-01-01", tz="UTC")) // pd.Timedelta(seconds=1)
    return seconds.to_numpy(np.int64)


def _deduplicate(frame: pd.DataFrame) -> pd.DataFrame:
    if "timestamp" in frame.columns:
        ordered = frame.sort_values("timestamp", kind="mergesort")
        kept = ordered.drop_duplicates(["user", "item"], keep="first").sort_index()
    else:
        kept = frame.drop_duplicates(["user", "item"], keep="first")
    return kept.reset_index(drop=True)


def parse_interactions(path, format_spec: FormatSpec = FORMATS["csv"]) -> InteractionLog:
    """Parse a raw interaction file into a deduplicated log.

    Ratings default to 1.0 when the column is absent or empty. Timestamps are
    kept only when every record has one.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8", errors="replace")
    except OSError as e:
        raise DatasetError(f"cannot read {path}: {e}", code="UNREADABLE") from e

    split = _splitter(format_spec)
    u_pos = format_spec.position("user")
    i_pos = format_spec.position("item")
    r_pos = format_spec.position("rating")
    t_pos = format_spec.position("timestamp")
    need = max(2, u_pos + 1, i_pos + 1)

    users: List[str] = []
    items: List[str] = []
    ratings: List[float] = []
    stamps: List[Optional[str]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if lineno == 1 and format_spec.header:
            continue
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in split(line)]
        if len(fields) < need:
            raise DatasetError(
                f"{path}:{lineno}: expected at least {need} fields, got {len(fields)}",
                code="MALFORMED_LINE",
            )
        users.append(fields[u_pos])
        items.append(fields[i_pos])
        rating = 1.0
        if r_pos is not None and r_pos < len(fields) and fields[r_pos]:
            try:
                rating = float(fields[r_pos])
            except ValueError as e:
                raise DatasetError(
                    f"{path}:{lineno}: rating {fields[r_pos]!r} is not a number", code="MALFORMED_LINE"
                ) from e
        ratings.append(rating)
        has_ts = t_pos is not None and t_pos < len(fields) and fields[t_pos] != ""
        stamps.append(fields[t_pos] if has_ts else None)

    if not users:
        raise DatasetError(f"{path}: no interactions found", code="EMPTY")

    frame = pd.DataFrame({"user": users, "item": items, "rating": np.asarray(ratings, dtype=np.float64)})
    present = sum(s is not None for s in stamps)
    if present == len(stamps):
        frame["timestamp"] = _to_seconds(stamps, path)
    elif present:
        logger.warning("[DATA] %s: %d of %d records lack a timestamp; ignoring timestamps", path, len(stamps) - present, len(stamps))

    deduped = _deduplicate(frame)
    if len(deduped) < len(frame):
        logger.info("[DATA] dropped %d duplicate (user, item) records", len(frame) - len(deduped))
    logger.info("[DATA] parsed %s: %d records, timestamps=%s", path.name, len(deduped), "timestamp" in deduped.columns)
    return InteractionLog(deduped)
