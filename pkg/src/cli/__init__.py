from src.cli.commands import cmd_eval, cmd_preprocess, cmd_stats, cmd_sweep, cmd_train
from src.cli.config import RunConfig, dump_run_config, load_run_config

__all__ = [
    "RunConfig",
    "cmd_eval",
    "cmd_preprocess",
    "cmd_stats",
    "cmd_sweep",
    "cmd_train",
    "dump_run_config",
    "load_run_config",
]
