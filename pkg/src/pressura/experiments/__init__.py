"""Experiment presets, batch runner, plots and the command line."""

from .config import (DEFINING_FIELDS, PRESETS, ConfigError, ExperimentConfig, format_config,
                     load_config, load_config_file, preset_config, with_overrides)
from .plot import render_timeseries
from .runner import (AncestorError, BatchResult, RunArtifacts, replicate_seed, resolve_ancestor,
                     run_batch, run_experiment)
from .stats import STATS_COLUMNS, aggregate_rows, read_stats, write_aggregate

__all__ = [
    "DEFINING_FIELDS", "PRESETS", "ConfigError", "ExperimentConfig", "format_config",
    "load_config", "load_config_file", "preset_config", "with_overrides", "render_timeseries",
    "AncestorError", "BatchResult", "RunArtifacts", "replicate_seed", "resolve_ancestor",
    "run_batch", "run_experiment", "STATS_COLUMNS", "aggregate_rows", "read_stats",
    "write_aggregate",
]
