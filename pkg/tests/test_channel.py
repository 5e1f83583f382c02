"""Tests for configuration validation and channel sampling statistics."""

import numpy as np
import pytest
from scipy import stats

from abcrate.channel import (
    ChannelRealization,
    ConfigError,
    SeedSpec,
    SystemConfig,
    sample_btx_symbol,
    sample_channels,
)

SEED = SeedSpec(master_seed=1234, stream_index=0)


# ------------------------------------------------------------- configs


def test_defaults_match_documented_operating_point():
    cfg = SystemConfig()
    assert (cfg.M, cfg.N, cfg.K) == (64, 4, 15)
    assert cfg.alpha == 0.5
    assert cfg.noise_var == 1.0
    assert cfg.var1 == cfg.varRB == cfg.varBC == 1.0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"M": 0},
        {"N": -1},
        {"K": 0},
        {"M": 2.5},
        {"alpha": 0.0},
        {"alpha": 1.5},
        {"P": 0.0},
        {"P": -1.0},
        {"noise_var": 0.0},
        {"var1": -2.0},
        {"varRB": 0.0},
        {"varBC": float("inf")},
    ],
)
def test_invalid_config_rejected(kwargs):
    with pytest.raises(ConfigError):
        SystemConfig(**kwargs)


def test_seedspec_range_checks():
    SeedSpec(master_seed=2**64 - 1, stream_index=0)
    with pytest.raises(ConfigError):
        SeedSpec(master_seed=-1)
    with pytest.raises(ConfigError):
        SeedSpec(master_seed=2**64)
    with pytest.raises(ConfigError):
        SeedSpec(master_seed=1, stream_index=-3)


# ------------------------------------------------------------ sampling


def test_shapes_match_config():
    cfg = SystemConfig(M=5, N=3)
    ch = sample_channels(cfg, SEED)
    assert ch.H1.shape == (3, 5)
    assert ch.hRB.shape == (5,)
    assert ch.hBC.shape == (3,)


def test_vanishing_variance_gives_tiny_entries():
    cfg = SystemConfig(M=4, N=4, var1=1e-14)
    ch = sample_channels(cfg, SEED)
    assert np.all(np.abs(ch.H1) < 1e-6)


def test_reproducible_and_draws_distinct():
    cfg = SystemConfig(M=3, N=2)
    a = sample_channels(cfg, SEED, draw=17)
    b = sample_channels(cfg, SEED, draw=17)
    assert np.array_equal(a.H1, b.H1)
    assert np.array_equal(a.hRB, b.hRB)
    assert np.array_equal(a.hBC, b.hBC)
    c = sample_channels(cfg, SEED, draw=18)
    assert not np.array_equal(a.H1, c.H1)
    d = sample_channels(cfg, SEED, draw=17, attempt=1)
    assert not np.array_equal(a.H1, d.H1)


def test_per_entry_variance_of_direct_channel():
    """Sample second moment of H1 entries over 1e5 draws sits at var1."""
    cfg = SystemConfig(M=2, N=2, var1=1.0)
    acc = 0.0
    n = 100_000
    for i in range(n):
        ch = sample_channels(cfg, SEED, draw=i)
        acc += np.mean(np.abs(ch.H1) ** 2)
    assert acc / n == pytest.approx(1.0, abs=0.02)


def test_tag_channel_energy_moment():
    """E[||hBC||^2] = N * varBC: 4.0 +/- 0.05 at N=4, unit variance."""
    cfg = SystemConfig(M=1, N=4, varBC=1.0)
    acc = 0.0
    n = 100_000
    for i in range(n):
        acc += np.sum(np.abs(sample_channels(cfg, SEED, draw=i).hBC) ** 2)
    assert acc / n == pytest.approx(4.0, abs=0.05)


def test_entry_modulus_squared_is_exponential():
    """KS test of |H1[0,0]|^2 / var1 against Exponential(1), p > 0.01."""
    cfg = SystemConfig(M=1, N=1, var1=2.0)
    z = np.array(
        [
            np.abs(sample_channels(cfg, SEED, draw=i).H1[0, 0]) ** 2 / cfg.var1
            for i in range(10_000)
        ]
    )
    assert stats.kstest(z, "expon").pvalue > 0.01


def test_channel_cross_independence():
    cfg = SystemConfig(M=2, N=2)
    a = np.empty(10_000)
    b = np.empty(10_000)
    for i in range(10_000):
        ch = sample_channels(cfg, SEED, draw=i)
        a[i] = np.abs(ch.H1[0, 0]) ** 2
        b[i] = np.abs(ch.hBC[0]) ** 2
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.05


def test_substream_independence():
    cfg = SystemConfig(M=1, N=1)
    s0 = SeedSpec(master_seed=1234, stream_index=0)
    s1 = SeedSpec(master_seed=1234, stream_index=1)
    a = np.empty(10_000)
    b = np.empty(10_000)
    for i in range(10_000):
        a[i] = sample_channels(cfg, s0, draw=i).H1[0, 0].real
        b[i] = sample_channels(cfg, s1, draw=i).H1[0, 0].real
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.05
    assert not np.array_equal(a, b)


# ---------------------------------------------------------- tag symbol


def test_btx_symbol_alphabet_and_moments():
    n = 100_000
    c = np.array([sample_btx_symbol(SEED, draw=i) for i in range(n)])
    assert np.all(c * c == 1.0)
    assert np.mean(c) == pytest.approx(0.0, abs=0.01)
    assert np.var(c) == pytest.approx(1.0, abs=0.01)


def test_btx_symbol_independent_of_channel_domain():
    # same (seed, draw) addresses disjoint counter blocks per domain
    cfg = SystemConfig(M=1, N=1)
    ch = sample_channels(cfg, SEED, draw=5)
    c = sample_btx_symbol(SEED, draw=5)
    assert c in (-1.0, 1.0)
    assert ch.H1[0, 0] != c  # trivially different objects; draws not aliased


def test_realization_is_plain_dataclass():
    cfg = SystemConfig(M=2, N=2)
    ch = sample_channels(cfg, SEED)
    assert isinstance(ch, ChannelRealization)
