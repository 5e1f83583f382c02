"""System parameterization and reproducible Rayleigh channel generation.

One fading block consists of the direct matrix ``H1`` (receiver antennas x
source antennas), the source-to-tag row channel ``hRB`` and the tag-to-
receiver column channel ``hBC``, all i.i.d. circularly-symmetric complex
Gaussian. Randomness is counter-based (Philox): the generator for a draw is
keyed by (master_seed, stream_index) and countered by (attempt, draw_index,
domain), so any sample can be regenerated in isolation and results are
bit-identical no matter how the draw loop is batched or parallelized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SystemConfig",
    "SeedSpec",
    "ChannelRealization",
    "ConfigError",
    "generator",
    "sample_channels",
    "sample_btx_symbol",
    "DOMAIN_CHANNELS",
    "DOMAIN_SYMBOL",
]

# Counter-word domains keeping channel draws and tag-symbol draws on
# non-overlapping Philox blocks for the same (seed, draw_index).
DOMAIN_CHANNELS = 0
DOMAIN_SYMBOL = 1


class ConfigError(ValueError):
    """A configuration value violates its documented range."""


@dataclass(frozen=True)
class SystemConfig:
    """Scalar parameters of the cooperative backscatter link.

    Attributes:
        M: transmit antennas at the RF source.
        N: receive antennas at the cooperative receiver.
        K: tag symbol periods spanned per source symbol period.
        alpha: tag reflection coefficient, in (0, 1].
        P: source transmit power (mean squared symbol amplitude).
        noise_var: receiver noise variance per antenna.
        var1: per-entry variance of the direct channel matrix.
        varRB: per-entry variance of the source-to-tag channel.
        varBC: per-entry variance of the tag-to-receiver channel.
    """

    M: int = 64
    N: int = 4
    K: int = 15
    alpha: float = 0.5
    P: float = 1.0
    noise_var: float = 1.0
    var1: float = 1.0
    varRB: float = 1.0
    varBC: float = 1.0

    def __post_init__(self):
        for name in ("M", "N", "K"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ConfigError(f"{name} must be an integer >= 1, got {v!r}")
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigError(f"alpha must lie in (0, 1], got {self.alpha!r}")
        for name in ("P", "noise_var", "var1", "varRB", "varBC"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float, np.floating)) and v > 0.0 and np.isfinite(v)):
                raise ConfigError(f"{name} must be a positive finite real, got {v!r}")


@dataclass(frozen=True)
class SeedSpec:
    """Reproducibility handle: a master seed plus a substream index.

    Distinct ``stream_index`` values address disjoint Philox key space and
    give statistically independent substreams under one master seed.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError(
                f"master_seed must fit in 64 bits, got {self.master_seed!r}"
            )
        if not 0 <= self.stream_index < 2**64:
            raise ConfigError(
                f"stream_index must be a nonnegative 64-bit integer, got {self.stream_index!r}"
            )


@dataclass(frozen=True)
class ChannelRealization:
    """One fading block: direct matrix and the two tag-path vectors."""

    H1: np.ndarray  # (N, M) complex
    hRB: np.ndarray  # (M,) complex
    hBC: np.ndarray  # (N,) complex


def generator(
    seed: SeedSpec, draw: int = 0, domain: int = DOMAIN_CHANNELS, attempt: int = 0
) -> np.random.Generator:
    """Counter-based generator for one (draw, domain, attempt) address."""
    if draw < 0 or attempt < 0:
        raise ConfigError("draw and attempt indices must be nonnegative")
    bg = np.random.Philox(
        counter=np.array([0, attempt, draw, domain], dtype=np.uint64),
        key=np.array([seed.master_seed, seed.stream_index], dtype=np.uint64),
    )
    return np.random.Generator(bg)


def _cgauss(rng: np.random.Generator, shape, var: float) -> np.ndarray:
    # Real/imaginary split carries var/2 each so E[|h|^2] = var. The fixed
    # real-then-imaginary draw order is part of the reproducibility contract.
    scale = np.sqrt(var / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def sample_channels(
    cfg: SystemConfig, seed: SeedSpec, draw: int = 0, attempt: int = 0
) -> ChannelRealization:
    """Draw one independent Rayleigh fading block.

    Entries of the three channels are mutually independent zero-mean
    circularly-symmetric Gaussians with per-entry variances ``var1``,
    ``varRB``, ``varBC``. Pure function of (cfg, seed, draw, attempt).
    """
    rng = generator(seed, draw, DOMAIN_CHANNELS, attempt)
    H1 = _cgauss(rng, (cfg.N, cfg.M), cfg.var1)
    hRB = _cgauss(rng, cfg.M, cfg.varRB)
    hBC = _cgauss(rng, cfg.N, cfg.varBC)
    return ChannelRealization(H1=H1, hRB=hRB, hBC=hBC)


def sample_btx_symbol(seed: SeedSpec, draw: int = 0) -> float:
    """Draw one tag symbol, +1 or -1 equiprobably."""
    rng = generator(seed, draw, DOMAIN_SYMBOL)
    return 1.0 if rng.integers(0, 2) else -1.0
