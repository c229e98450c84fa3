"""Configuration, file formats, table caching, sweeps and the command line."""

from .checks import KINDS, run_check
from .cli import cli_dispatch
from .config import ConfigError, RunConfig
from .io import ZeroTable, load_ladder_cache, load_zero_table, save_ladder_cache, summary_csv
from .sweep import SweepResult, parse_sweep, run_sweep
from .tables import TableProvider

__all__ = [
    "KINDS", "ConfigError", "RunConfig", "SweepResult", "TableProvider", "ZeroTable",
    "cli_dispatch", "load_ladder_cache", "load_zero_table", "parse_sweep", "run_check",
    "run_sweep", "save_ladder_cache", "summary_csv",
]
