"""Ergodic-rate estimation over channel fading.

Per-draw work is addressed by a counter-based generator, so estimates are
bit-identical however the draw loop is partitioned: workers may each take a
slice of draw indices (``draw_offset``/``n``) and ship their per-draw
samples back; the final reduction is a single pass in draw order. The
average over the binary tag symbol is taken exactly (two-term mean), never
sampled. Draws whose beamforming fails (zero tag channel, power-iteration
non-convergence) are deterministically resampled at the next attempt index
and counted, so long runs cannot silently stall or drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, SeedSpec, SystemConfig, sample_channels
from .linalg import ConvergenceError, DegenerateInputError, inner
from .link import BeamformingSolution, snr_pair, solve_beamforming

__all__ = [
    "RateEstimate",
    "STATISTICS",
    "estimate_r1",
    "estimate_r2",
    "sample_statistic",
]

_LOG2E = 1.0 / math.log(2.0)
_MAX_ATTEMPTS = 64

# Samplable functionals of one realization (with the true beamformer):
#   Z: tag-to-receiver power seen by the direct-stream combiner, scaled to
#      unit-mean-2 exponential
#   A: product of Z and the matching source-to-tag projection power
#   sigma1m_sq: squared dominant singular value of the direct channel
#   hBC_norm_sq_x_hRBv_sq: tag-stream power product before scaling
STATISTICS = ("Z", "A", "sigma1m_sq", "hBC_norm_sq_x_hRBv_sq")


@dataclass(frozen=True)
class RateEstimate:
    """Monte Carlo mean with its standard error.

    ``stderr`` is the sample standard deviation (ddof=1) over sqrt(n);
    ``skipped`` counts resampled attempts due to degenerate draws.
    """

    mean_bps_hz: float
    stderr: float
    n_samples: int
    seed: SeedSpec
    skipped: int = 0


def _draw_solution(cfg: SystemConfig, seed: SeedSpec, draw: int):
    """Channel + beamforming for one draw, resampling failed attempts."""
    skips = 0
    for attempt in range(_MAX_ATTEMPTS):
        ch = sample_channels(cfg, seed, draw=draw, attempt=attempt)
        try:
            return ch, solve_beamforming(cfg, ch), skips
        except (DegenerateInputError, ConvergenceError):
            skips += 1
    raise RuntimeError(
        f"draw {draw} failed beamforming {_MAX_ATTEMPTS} times; "
        "configuration is numerically degenerate"
    )


def _reduce(samples: np.ndarray, n: int, seed: SeedSpec, skipped: int) -> RateEstimate:
    # single-threaded reduction in draw order (partition-shape independent)
    mean = float(np.mean(samples))
    stderr = float(np.std(samples, ddof=1) / math.sqrt(n))
    return RateEstimate(
        mean_bps_hz=mean, stderr=stderr, n_samples=n, seed=seed, skipped=skipped
    )


def _rate_sample_r1(cfg: SystemConfig, ch: ChannelRealization, bf: BeamformingSolution) -> float:
    p = snr_pair(cfg, ch, bf)
    return 0.5 * _LOG2E * (math.log1p(p.snr1_pos) + math.log1p(p.snr1_neg))


def _rate_sample_r2(cfg: SystemConfig, ch: ChannelRealization, bf: BeamformingSolution) -> float:
    p = snr_pair(cfg, ch, bf)
    return _LOG2E * math.log1p(p.snr2) / cfg.K


def _estimate(cfg, n, seed, per_draw, draw_offset) -> RateEstimate:
    if n < 2:
        raise ValueError(f"need n >= 2 samples for a standard error, got {n}")
    samples = np.empty(n)
    skipped = 0
    for i in range(n):
        ch, bf, sk = _draw_solution(cfg, seed, draw_offset + i)
        skipped += sk
        samples[i] = per_draw(cfg, ch, bf)
    return _reduce(samples, n, seed, skipped)


def estimate_r1(
    cfg: SystemConfig, n: int = 1000, seed: SeedSpec = SeedSpec(1234), *,
    draw_offset: int = 0,
) -> RateEstimate:
    """Ergodic rate of the direct stream (bps/Hz).

    Averages (1/2)[log2(1+SNR1|c=+1) + log2(1+SNR1|c=-1)] over ``n``
    channel draws; the tag-symbol average is exact for the binary alphabet.
    """
    return _estimate(cfg, n, seed, _rate_sample_r1, draw_offset)


def estimate_r2(
    cfg: SystemConfig, n: int = 1000, seed: SeedSpec = SeedSpec(1234), *,
    draw_offset: int = 0,
) -> RateEstimate:
    """Ergodic rate of the tag stream (bps/Hz): mean of (1/K) log2(1+SNR2)."""
    return _estimate(cfg, n, seed, _rate_sample_r2, draw_offset)


def sample_statistic(
    cfg: SystemConfig,
    seed: SeedSpec,
    which: str,
    n: int,
    *,
    draw_offset: int = 0,
) -> np.ndarray:
    """Draw ``n`` i.i.d. values of one per-realization functional.

    Each value comes from a fresh channel realization with its true
    beamformer. Returns a 1-D float array in draw order.
    """
    if which not in STATISTICS:
        raise ValueError(f"unknown statistic {which!r}; choose from {STATISTICS}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    out = np.empty(n)
    for i in range(n):
        ch, bf, _ = _draw_solution(cfg, seed, draw_offset + i)
        if which == "Z":
            out[i] = 2.0 / cfg.varBC * abs(inner(bf.u1m, ch.hBC)) ** 2
        elif which == "A":
            z = 2.0 / cfg.varBC * abs(inner(bf.u1m, ch.hBC)) ** 2
            x = 2.0 / cfg.varRB * abs(inner(ch.hRB, bf.v1m)) ** 2
            out[i] = z * x
        elif which == "sigma1m_sq":
            out[i] = bf.sigma1m**2
        else:  # hBC_norm_sq_x_hRBv_sq
            out[i] = float(np.sum(np.abs(ch.hBC) ** 2)) * abs(
                inner(ch.hRB, bf.v1m)
            ) ** 2
    return out
