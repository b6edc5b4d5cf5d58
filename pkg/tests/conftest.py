import numpy as np
import pytest

from collisional_thermometry.linops import DensityOperator, QubitRegister


def random_density_matrix(rng, m):
    """Random full-rank density matrix on m qubits (Wishart construction)."""
    dim = 2**m
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_hermitian(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2


def as_state(mat, labels=None):
    m = int(np.log2(mat.shape[0]))
    labels = labels or tuple(f"q{i}" for i in range(m))
    return DensityOperator(mat, QubitRegister(tuple(labels)))


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)
