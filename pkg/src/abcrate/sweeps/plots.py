"""Headless figure rendering for sweep results.

One PNG per run, written next to the CSV with the same stem. Rendering is
a convenience view of the delimited data — the CSV stays the canonical
artifact and is byte-reproducible independently of anything here. Failed
rows simply leave gaps in the curves.
"""

from __future__ import annotations

import pathlib

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from .config import SweepKind
from .runner import SweepResult

__all__ = ["render_plots"]


def _column(rows, name):
    return np.array(
        [np.nan if r.failed else getattr(r, name) for r in rows], dtype=float
    )


def _curve_panels(result: SweepResult, x, xlabel, log_x):
    rows = result.rows
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.0, 4.2))
    ax1.errorbar(
        x, _column(rows, "r1_mc"), yerr=_column(rows, "r1_stderr"),
        fmt="o-", capsize=3, label="simulated",
    )
    ax1.plot(x, _column(rows, "r1_lemma"), "s--", label="analytic bound (tight)")
    ax1.plot(x, _column(rows, "r1_bar"), "^:", label="closed-form ceiling")
    ax1.set_title("direct stream")
    ax2.errorbar(
        x, _column(rows, "r2_mc"), yerr=_column(rows, "r2_stderr"),
        fmt="o-", capsize=3, label="simulated",
    )
    ax2.plot(x, _column(rows, "r2_exact"), "s--", label="closed form")
    ax2.plot(x, _column(rows, "r2_bar"), "^:", label="closed-form ceiling")
    ax2.set_title("backscatter stream")
    for ax in (ax1, ax2):
        if log_x:
            ax.set_xscale("log", base=2)
            ax.set_xticks(x, labels=[str(int(v)) for v in x])
        ax.set_xlabel(xlabel)
        ax.set_ylabel("ergodic rate (bps/Hz)")
        ax.grid(True, alpha=0.3)
        ax.legend()
    return fig


def _grid_figure(result: SweepResult):
    n_ax, k_ax = result.spec.axes
    n_vals, k_vals = n_ax.values(), k_ax.values()
    z = _column(result.rows, "r2_bar").reshape(len(n_vals), len(k_vals))
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    mesh = ax.pcolormesh(k_vals, n_vals, z, shading="nearest")
    cs = ax.contour(k_vals, n_vals, z, colors="white", linewidths=0.8)
    ax.clabel(cs, fontsize=7)
    fig.colorbar(mesh, ax=ax, label="backscatter rate ceiling (bps/Hz)")
    ax.set_xlabel("spreading periods K")
    ax.set_ylabel("receive antennas N")
    return fig


def render_plots(result: SweepResult, csv_path) -> list[pathlib.Path]:
    """Render the run's figure; returns the written paths."""
    if result.spec.kind is SweepKind.VALIDATE:
        raise ValueError("the check suite has no figure")
    out = pathlib.Path(csv_path).with_suffix(".png")
    if result.spec.kind is SweepKind.GRID_NK:
        fig = _grid_figure(result)
    else:
        x = result.spec.axes[0].values().astype(float)
        xlabel = (
            "SNR (dB)"
            if result.spec.kind is SweepKind.SNR_SWEEP
            else "receive antennas N"
        )
        fig = _curve_panels(
            result, x, xlabel,
            log_x=result.spec.kind is SweepKind.ANTENNA_SWEEP,
        )
    fig.tight_layout()
    fig.savefig(out, dpi=140)
    plt.close(fig)
    return [out]
