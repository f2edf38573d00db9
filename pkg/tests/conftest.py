import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "matsketch",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("matsketch")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_orthonormal(rng, rows, cols):
    q, _ = np.linalg.qr(rng.normal(size=(rows, cols)))
    return q


def matrix_with_singular_values(rng, m, n, values):
    values = np.asarray(values, dtype=float)
    u = random_orthonormal(rng, m, values.size)
    v = random_orthonormal(rng, n, values.size)
    return (u * values) @ v.T
