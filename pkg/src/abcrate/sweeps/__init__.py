"""Sweep configuration, execution, artifact emission, and the CLI."""

from .checks import CHECK_NAMES, CheckOutcome, run_checks
from .config import (
    AxisSpec,
    ConfigFileError,
    SweepKind,
    SweepSpec,
    default_spec,
    format_config,
    override,
    parse_config,
)
from .runner import SweepResult, SweepRow, axis_columns, emit_csv, manifest_path, run_sweep

__all__ = [
    "AxisSpec",
    "CHECK_NAMES",
    "CheckOutcome",
    "ConfigFileError",
    "SweepKind",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "axis_columns",
    "default_spec",
    "emit_csv",
    "format_config",
    "manifest_path",
    "override",
    "parse_config",
    "run_checks",
    "run_sweep",
]
