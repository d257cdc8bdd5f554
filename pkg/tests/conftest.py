import numpy as np
import pytest

from resolvent_order.certify import SamplerConfig


@pytest.fixture
def cfg():
    """Small sampling plan: fast but plenty to catch O(1) violations."""
    return SamplerConfig(seed=42, n_pairs=200)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
