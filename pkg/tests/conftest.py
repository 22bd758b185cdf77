import numpy as np
import pytest


def random_density(rng, dim, rank=None):
    """Ginibre-distributed random density matrix."""
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def rho1_paper(d):
    """Damped Bell state written out entry by entry."""
    return np.array(
        [[(1 + d * d) / 2, 0, 0, (1 - d) / 2],
         [0, (1 - d) * d / 2, 0, 0],
         [0, 0, (1 - d) * d / 2, 0],
         [(1 - d) / 2, 0, 0, (1 - d) ** 2 / 2]],
        dtype=complex,
    )
