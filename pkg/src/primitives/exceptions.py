"""
Coded exception hierarchy shared by every DivMF module.

Each error carries a machine-readable `code` next to its message so the CLI
can report failures uniformly (`error[<code>]: <message>`).
"""


class DivMFError(Exception):
    code = "DIVMF_ERROR"

    def __init__(self, message: str, code: str = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class DatasetError(DivMFError):
    """Unreadable, malformed or empty interaction data."""
    code = "DATASET"


class SplitError(DivMFError):
    code = "SPLIT"


class ConfigError(DivMFError):
    code = "CONFIG"


class ContractViolation(DivMFError):
    """A pre- or post-condition of a numeric operation does not hold."""
    code = "CONTRACT"


class NonFiniteError(DivMFError):
    """Scores or losses left the finite range; training diverged."""
    code = "NON_FINITE"


class CheckpointError(DivMFError):
    code = "CHECKPOINT"


class CorruptCheckpointError(CheckpointError):
    code = "CORRUPT_CHECKPOINT"


class CheckpointShapeError(CheckpointError):
    code = "CHECKPOINT_SHAPE"
