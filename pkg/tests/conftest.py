import numpy as np
import pytest

from kmsspec.matrix import KmsParams, build_kms


def residual(n, rho, lam, y):
    """||K y - lam y||_inf / (||K||_inf ||y||_inf)."""
    k = build_kms(KmsParams(n, rho))
    y = np.asarray(y)
    knorm = np.max(np.sum(np.abs(k), axis=1))
    return float(np.max(np.abs(k @ y - lam * y)) / (knorm * np.max(np.abs(y))))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
