import pytest

from abcrate.channel import SeedSpec, SystemConfig
from abcrate.montecarlo import sample_statistic


@pytest.fixture(scope="session")
def sigma1m_sq_64():
    """2000 draws of the squared dominant singular value at M = N = 64.

    Shared session-wide: the large-array spectral statistic is the slowest
    sampled quantity and several checks consume the same draws.
    """
    cfg = SystemConfig(M=64, N=64)
    return sample_statistic(cfg, SeedSpec(1234), "sigma1m_sq", 2000)
