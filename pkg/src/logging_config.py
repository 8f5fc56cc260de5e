"""
AID: /src/logging_config.py
Purpose: One-time logging bootstrap for the `divmf` CLI and the experiment scripts.

Reports go to stdout; log records go to stderr and a rotating file, so a
command's stdout can be redirected into a results file untouched.
"""

import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

LOG_FORMAT = "%(asctime)s %(levelname)-8s [%(name)s] %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
DEFAULT_LOG_NAME = "divmf.log"
_OWNED = "_divmf_handler"


class _StderrHandler(logging.StreamHandler):
    """Writes to whatever `sys.stderr` is at emit time."""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def _logs_dir() -> Path:
    logs_dir = Path(__file__).resolve().parent.parent / "logs"
    try:
        logs_dir.mkdir(parents=True, exist_ok=True)
    except OSError:
        logs_dir = Path(os.getcwd()) / "logs"
        logs_dir.mkdir(parents=True, exist_ok=True)
    return logs_dir


def _owned_handlers(root: logging.Logger):
    return [h for h in root.handlers if getattr(h, _OWNED, False)]


def setup_logging(log_file: Optional[str] = None, level: int = logging.INFO) -> None:
    """Attach a rotating file handler and a stderr handler to the root logger.

    Calling it again only changes the level, so `main()` can run many times
    in one process (the CLI tests do) without stacking handlers. Handlers
    installed by someone else, such as pytest's capture, are left alone.
    """
    root = logging.getLogger()
    owned = _owned_handlers(root)
    if owned:
        for h in owned:
            h.setLevel(level)
        root.setLevel(level)
        return

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)
    path = Path(log_file) if log_file else _logs_dir() / DEFAULT_LOG_NAME
    path.parent.mkdir(parents=True, exist_ok=True)

    fh = RotatingFileHandler(path, maxBytes=5 * 1024 * 1024, backupCount=5, encoding="utf-8")
    ch = _StderrHandler()
    for h in (fh, ch):
        h.setLevel(level)
        h.setFormatter(formatter)
        setattr(h, _OWNED, True)
        root.addHandler(h)

    root.setLevel(level)
