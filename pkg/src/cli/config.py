"""Run configuration: flat YAML file plus command-line overrides."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.config import DEFAULT_CORE
from src.dataio.parsing import FORMATS
from src.primitives.exceptions import ConfigError
from src.training.config import TrainConfig

logger = logging.getLogger(__name__)


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    input: Optional[Path] = None
    format: str = "csv"
    dataset_dir: Optional[Path] = None
    core: int = Field(DEFAULT_CORE, ge=0)
    split_seed: int = 0
    strict_split: bool = False
    subsample_users: Optional[int] = Field(None, ge=1)
    train: TrainConfig = Field(default_factory=TrainConfig)

    @field_validator("format")
    @classmethod
    def _known_format(cls, value: str) -> str:
        if value not in FORMATS:
            raise ValueError(f"unknown format {value!r}; expected one of {sorted(FORMATS)}")
        return value

    @model_validator(mode="after")
    def _input_exists(self) -> "RunConfig":
        if self.input is not None and not self.input.exists():
            raise ValueError(f"input file {self.input} does not exist")
        return self

    @classmethod
    def from_flat(cls, flat: Mapping[str, Any]) -> "RunConfig":
        train_keys = set(TrainConfig.model_fields)
        run = {k: v for k, v in flat.items() if k not in train_keys}
        train = {k: v for k, v in flat.items() if k in train_keys}
        try:
            return cls(**run, train=TrainConfig(**train))
        except ValidationError as e:
            raise ConfigError(str(e)) from e

    def to_flat(self) -> Dict[str, Any]:
        flat = self.model_dump(mode="json", exclude={"train"})
        flat.update(self.train.model_dump(mode="json"))
        return flat

    def require_dataset(self) -> Path:
        if self.dataset_dir is None:
            raise ConfigError("no dataset directory given (--data or `dataset_dir` in the config)")
        if not self.dataset_dir.is_dir():
            raise ConfigError(f"dataset directory {self.dataset_dir} does not exist; run preprocess first")
        return self.dataset_dir


def read_flat(path) -> Dict[str, Any]:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"{path} is not valid YAML: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must hold a flat key: value mapping")
    nested = [k for k, v in data.items() if isinstance(v, dict)]
    if nested:
        raise ConfigError(f"{path}: nested sections {nested} are not allowed; keys are flat")
    return data


def load_run_config(path=None, overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """Merge the config file (if any) with overrides; non-None overrides win."""
    flat = read_flat(path) if path is not None else {}
    for key, value in (overrides or {}).items():
        if value is not None:
            flat[key] = value
    cfg = RunConfig.from_flat(flat)
    logger.debug("[CLI] config %s", cfg.to_flat())
    return cfg


def dump_run_config(cfg: RunConfig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(yaml.safe_dump(cfg.to_flat(), sort_keys=True), encoding="utf-8")
    return path
