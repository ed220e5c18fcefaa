import numpy as np
import pytest

from smoothrenyi import MarkovChain, block_spectrum


@pytest.fixture(scope="session")
def bernoulli_chain():
    """Memoryless binary source emitting 1 with probability 0.3."""
    return MarkovChain.iid([0.7, 0.3])


@pytest.fixture(scope="session")
def sticky_chain():
    """Two-state chain with transition rows (0.9, 0.1) and (0.2, 0.8)."""
    return MarkovChain.from_transition([[0.9, 0.1], [0.2, 0.8]])


@pytest.fixture(scope="session")
def fair_chain():
    return MarkovChain.iid([0.5, 0.5])


@pytest.fixture(scope="session")
def spectrum_cache():
    """Session cache for block spectra (the large ones are expensive)."""
    cache = {}

    def get(chain, n):
        key = (id(chain), n)
        if key not in cache:
            cache[key] = block_spectrum(chain, n)
        return cache[key]

    return get


def random_distribution(rng: np.random.Generator, m: int, concentration: float = 1.0):
    return rng.dirichlet(np.full(m, concentration))
