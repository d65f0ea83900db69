import numpy as np
import pytest


@pytest.fixture
def counter():
    """2 x 2 x 2 tensor with frontal slices I and diag(1, -1)."""
    A = np.zeros((2, 2, 2))
    A[:, :, 0] = np.eye(2)
    A[:, :, 1] = np.diag([1.0, -1.0])
    return A


@pytest.fixture
def tubes():
    a = np.array([2.0, 4.0, 6.0, 8.0]).reshape(1, 1, 4)
    b = np.array([1.0, -1.0, 1.0, 0.0]).reshape(1, 1, 4)
    return a, b


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
