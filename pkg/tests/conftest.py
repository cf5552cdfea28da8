import numpy as np
import pytest

from dephasure.spectral import GaussianSpectrum


@pytest.fixture
def paper_spec():
    return GaussianSpectrum(s=5.0, omega_p=1.0, gamma_p=0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_density_matrix(rng, rank=4):
    w = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = w @ w.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, n=2):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
