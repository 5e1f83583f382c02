"""Per-realization link physics: beamforming, equivalent channel, SNRs.

The receiver decodes the direct stream with a combiner matched to the
dominant direction of the direct channel, cancels it, then decodes the tag
stream with a combiner matched to the tag-to-receiver channel. Everything
here is deterministic given one channel realization; averaging over fading
and over the tag symbol lives in the Monte Carlo layer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, SystemConfig
from .linalg import DegenerateInputError, DimensionError, dominant_singular_triplet, inner

__all__ = [
    "BeamformingSolution",
    "SnrPair",
    "solve_beamforming",
    "equivalent_channel",
    "snr_primary_given_c",
    "snr_secondary",
    "snr_pair",
]


@dataclass(frozen=True)
class BeamformingSolution:
    """Transmit/receive vectors for one realization.

    ``sigma1m``, ``u1m``, ``v1m`` form the dominant singular triplet of the
    direct channel; the transmit beamformer ``w`` equals ``v1m`` and the
    direct-stream combiner ``vs`` equals ``u1m``. ``vc`` is the unit-norm
    tag-stream combiner, the normalized tag-to-receiver channel.
    """

    sigma1m: float
    u1m: np.ndarray
    v1m: np.ndarray
    w: np.ndarray
    vs: np.ndarray
    vc: np.ndarray
    degenerate: bool = False


@dataclass(frozen=True)
class SnrPair:
    """Both conditional direct-stream SNRs and the tag-stream SNR."""

    snr1_pos: float  # direct stream, tag symbol +1
    snr1_neg: float  # direct stream, tag symbol -1
    snr2: float  # tag stream after cancellation and matched combining

    def __post_init__(self):
        for name in ("snr1_pos", "snr1_neg", "snr2"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and nonnegative, got {v!r}")


def solve_beamforming(
    cfg: SystemConfig, ch: ChannelRealization, tol: float = 1e-10, max_iter: int = 20000
) -> BeamformingSolution:
    """Select beamformer/combiners for one realization.

    Raises:
        DegenerateInputError: tag-to-receiver channel is numerically zero
            (its matched combiner is undefined); callers running long draw
            loops should skip and resample.
        ConvergenceError: propagated from the power iteration.
    """
    if ch.H1.shape != (cfg.N, cfg.M):
        raise DimensionError(
            f"direct channel shape {ch.H1.shape} does not match config ({cfg.N}, {cfg.M})"
        )
    trip = dominant_singular_triplet(ch.H1, tol=tol, max_iter=max_iter)
    nbc = np.linalg.norm(ch.hBC)
    if nbc == 0.0:
        raise DegenerateInputError("zero tag-to-receiver channel; combiner undefined")
    return BeamformingSolution(
        sigma1m=trip.sigma,
        u1m=trip.left,
        v1m=trip.right,
        w=trip.right,
        vs=trip.left,
        vc=ch.hBC / nbc,
        degenerate=trip.degenerate,
    )


def equivalent_channel(
    ch: ChannelRealization, bf: BeamformingSolution, alpha: float, c: float
) -> np.ndarray:
    """Direct channel plus the tag's scaled rank-one reflection path."""
    n, m = ch.H1.shape
    if ch.hBC.shape != (n,) or ch.hRB.shape != (m,):
        raise DimensionError(
            f"tag-path vectors {ch.hBC.shape}/{ch.hRB.shape} do not match "
            f"direct channel {ch.H1.shape}"
        )
    return ch.H1 + (alpha * c) * np.outer(ch.hBC, ch.hRB.conj())


def snr_primary_given_c(
    cfg: SystemConfig, ch: ChannelRealization, bf: BeamformingSolution, c: float
) -> float:
    """Direct-stream SNR conditioned on the tag symbol.

    The combiner/beamformer pair puts the direct term exactly on the
    dominant singular value, so only the rank-one tag path needs a fresh
    projection: gain = sigma1m + alpha*c*(vs^H hBC)(hRB^H w).
    """
    cross = inner(bf.vs, ch.hBC) * inner(ch.hRB, bf.w)
    gain = bf.sigma1m + cfg.alpha * c * cross
    return cfg.P * abs(gain) ** 2 / cfg.noise_var


def snr_secondary(
    cfg: SystemConfig, ch: ChannelRealization, bf: BeamformingSolution
) -> float:
    """Tag-stream SNR after cancellation, matched combining, and despreading.

    Matched combining turns the projection |vc^H hBC|^2 into the full
    channel energy, leaving K*P*alpha^2*||hBC||^2*|hRB^H w|^2/noise_var.
    """
    e_bc = float(np.sum(np.abs(ch.hBC) ** 2))
    g_rb = abs(inner(ch.hRB, bf.w)) ** 2
    return cfg.K * cfg.P * cfg.alpha**2 * e_bc * g_rb / cfg.noise_var


def snr_pair(
    cfg: SystemConfig, ch: ChannelRealization, bf: BeamformingSolution
) -> SnrPair:
    """Evaluate both conditional direct-stream SNRs and the tag-stream SNR."""
    return SnrPair(
        snr1_pos=snr_primary_given_c(cfg, ch, bf, +1.0),
        snr1_neg=snr_primary_given_c(cfg, ch, bf, -1.0),
        snr2=snr_secondary(cfg, ch, bf),
    )
