import os

import numpy as np
import pytest
from dotenv import load_dotenv

from ple_estimation import ChannelParams, PairSampleSet, SpaceConfig

load_dotenv()


def pytest_collection_modifyitems(config, items):
    if os.environ.get("PLE_RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="set PLE_RUN_SLOW=1 to run long Monte Carlo tests")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def samples_from(delta_p, l_hat, n_hat=None, dimension=2):
    """Wrap raw arrays in a PairSampleSet with consecutive rank pairs."""
    delta_p = np.asarray(delta_p, dtype=float)
    l_hat = np.asarray(l_hat, dtype=float)
    n = delta_p.size
    pairs = np.column_stack((np.arange(1, n + 1), np.arange(2, n + 2)))
    return PairSampleSet(
        delta_p=delta_p,
        l_hat=l_hat,
        rank_pairs=pairs,
        n_hat=n + 1 if n_hat is None else n_hat,
        dimension=dimension,
    )


def rank_pair_samples(n_hat, gamma, sigma, gen, dimension=2):
    """Pair samples over all ranks of n_hat nodes with ΔP = γ·L̂ + noise."""
    i_idx, j_idx = np.triu_indices(n_hat, k=1)
    i_hat, j_hat = i_idx + 1, j_idx + 1
    l_hat = (10.0 / dimension) * np.log10(i_hat / j_hat)
    delta_p = gamma * l_hat + gen.normal(0.0, sigma, size=l_hat.size)
    return PairSampleSet(
        delta_p=delta_p,
        l_hat=l_hat,
        rank_pairs=np.column_stack((i_hat, j_hat)),
        n_hat=n_hat,
        dimension=dimension,
    )


@pytest.fixture
def rng():
    """A fixed-seed generator."""
    return np.random.default_rng(20240601)


@pytest.fixture
def make_samples():
    """Factory for PairSampleSets from raw arrays."""
    return samples_from


@pytest.fixture
def make_rank_samples():
    """Factory for noisy pair samples over all rank pairs."""
    return rank_pair_samples


@pytest.fixture
def noisy_samples(rng):
    """Realistic pair samples: 15 ranked nodes, γ = 4, σ = 6 dB."""
    return rank_pair_samples(15, 4.0, 6.0, rng)


@pytest.fixture
def space_2d():
    """A 400 m disc at 0.005 nodes per square metre."""
    return SpaceConfig(dimension=2, field_radius=400.0, density=0.005)


@pytest.fixture
def channel_params():
    """Free-space constant at 2401 MHz, γ = 3, σ = 4 dB."""
    return ChannelParams(ple=3.0, shadow_sigma=4.0)
