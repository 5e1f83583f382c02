"""Sweep execution and artifact emission.

Each axis point is an independent work item: the system configuration is
rebuilt from the base, the two rate estimators run, and the analytic
columns are evaluated. A failure at one point (for instance a declared
accuracy loss in the contour integral) is recorded on that row and the
sweep continues; the CSV then carries only the clean rows while the
manifest names the failed ones. Rows are produced and reduced in axis
order, so output bytes do not depend on how the work might be scheduled.
"""

from __future__ import annotations

import itertools
import math
import pathlib
import platform
import time
from dataclasses import dataclass, replace

import numpy as np
import scipy

from .. import __version__
from ..channel import ConfigError, SeedSpec, SystemConfig
from ..linalg import ConvergenceError, DegenerateInputError
from ..montecarlo import estimate_r1, estimate_r2
from ..specfun import AccuracyError, DomainError, analytic_rates
from .config import SweepKind, SweepSpec, format_config

__all__ = ["SweepRow", "SweepResult", "run_sweep", "emit_csv", "axis_columns"]

_RATE_COLUMNS = (
    "r1_mc", "r1_stderr", "r2_mc", "r2_stderr",
    "r1_lemma", "r2_exact", "r1_bar", "r2_bar",
)

_CSV_PREAMBLE = (
    "# rate columns in bps/Hz; *_stderr are Monte Carlo standard errors\n"
    "# SNR_dB = 10*log10(P/noise_var); SNR sweeps hold noise_var fixed and vary P\n"
)


@dataclass(frozen=True)
class SweepRow:
    axis: tuple
    r1_mc: float | None = None
    r1_stderr: float | None = None
    r2_mc: float | None = None
    r2_stderr: float | None = None
    r1_lemma: float | None = None
    r2_exact: float | None = None
    r1_bar: float | None = None
    r2_bar: float | None = None
    skipped: int = 0
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple[SweepRow, ...]
    versions: dict
    wall_time_s: float

    @property
    def failed_rows(self) -> tuple[SweepRow, ...]:
        return tuple(r for r in self.rows if r.failed)

    @property
    def draws_resampled(self) -> int:
        return sum(r.skipped for r in self.rows)


def axis_columns(spec: SweepSpec) -> tuple[str, ...]:
    return {
        SweepKind.SNR_SWEEP: ("SNR_dB",),
        SweepKind.ANTENNA_SWEEP: ("N",),
        SweepKind.GRID_NK: ("N", "K"),
    }[spec.kind]


def _point_config(spec: SweepSpec, axis: tuple) -> SystemConfig:
    base = spec.base
    if spec.kind is SweepKind.SNR_SWEEP:
        return replace(base, P=10.0 ** (axis[0] / 10.0) * base.noise_var)
    if spec.kind is SweepKind.ANTENNA_SWEEP:
        return replace(base, N=int(axis[0]))
    return replace(base, N=int(axis[0]), K=int(axis[1]))


def _point_seed(spec: SweepSpec, index: int) -> SeedSpec:
    # CRN: every point sees the same channel draws; independent: one
    # substream per point so estimates are uncorrelated across the axis
    if spec.crn:
        return spec.seed
    return SeedSpec(spec.seed.master_seed, spec.seed.stream_index + index)


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate every axis point; failures stay on their rows."""
    if spec.kind is SweepKind.VALIDATE:
        raise ValueError(
            "Validate is not a sweep; run the check suite via the CLI"
        )
    t0 = time.perf_counter()
    grids = [ax.values() for ax in spec.axes]
    rows = []
    for index, axis in enumerate(itertools.product(*grids)):
        axis = tuple(v.item() for v in axis)
        seed = _point_seed(spec, index)
        try:
            cfg = _point_config(spec, axis)
            e1 = estimate_r1(cfg, spec.n_samples, seed)
            e2 = estimate_r2(cfg, spec.n_samples, seed)
            ana = analytic_rates(cfg)
            for name, value in (
                ("r1_lemma", ana.r1_lemma_bound), ("r2_exact", ana.r2_exact),
                ("r1_bar", ana.r1_theorem_bound), ("r2_bar", ana.r2_theorem_bound),
            ):
                if not math.isfinite(value):
                    raise AccuracyError(
                        f"analytic column {name} is not finite: {value!r}",
                        estimate=value, error_bound=math.inf,
                    )
            rows.append(SweepRow(
                axis=axis,
                r1_mc=e1.mean_bps_hz, r1_stderr=e1.stderr,
                r2_mc=e2.mean_bps_hz, r2_stderr=e2.stderr,
                r1_lemma=ana.r1_lemma_bound, r2_exact=ana.r2_exact,
                r1_bar=ana.r1_theorem_bound, r2_bar=ana.r2_theorem_bound,
                skipped=e1.skipped + e2.skipped,
            ))
        except (AccuracyError, DomainError, ConfigError, ConvergenceError,
                DegenerateInputError, RuntimeError) as exc:
            rows.append(SweepRow(
                axis=axis, error=f"{type(exc).__name__}: {exc}",
            ))
    versions = {
        "package_version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }
    return SweepResult(
        spec=spec, rows=tuple(rows), versions=versions,
        wall_time_s=time.perf_counter() - t0,
    )


def _cell(value) -> str:
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def manifest_path(csv_path) -> pathlib.Path:
    return pathlib.Path(csv_path).with_suffix(".manifest.txt")


def emit_csv(result: SweepResult, path) -> None:
    """Write the delimited rows plus the sibling manifest.

    Clean rows only; failed points are named in the manifest's [run]
    section. Floats use their shortest round-trip representation, so a
    fixed (config, seed) pair reproduces the file byte for byte.
    """
    header = ",".join(axis_columns(result.spec) + _RATE_COLUMNS)
    lines = [_CSV_PREAMBLE + header]
    for row in result.rows:
        if row.failed:
            continue
        cells = [_cell(v) for v in row.axis]
        cells += [_cell(getattr(row, col)) for col in _RATE_COLUMNS]
        lines.append(",".join(cells))
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV {path!s}: {exc}") from exc

    run_info = dict(result.versions)
    run_info["wall_time_s"] = round(result.wall_time_s, 3)
    run_info["rows_total"] = len(result.rows)
    run_info["rows_failed"] = len(result.failed_rows)
    run_info["draws_resampled"] = result.draws_resampled
    for i, row in enumerate(result.failed_rows):
        axis = ",".join(_cell(v) for v in row.axis)
        run_info[f"failed_row_{i}"] = f"({axis}) {row.error}"
    mpath = manifest_path(path)
    try:
        with open(mpath, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(format_config(result.spec, run_info))
    except OSError as exc:
        raise OSError(f"cannot write manifest {mpath!s}: {exc}") from exc
