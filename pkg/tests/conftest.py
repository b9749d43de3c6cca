import numpy as np
import pytest

from zakvmo.core import sample_function


@pytest.fixture(scope="session")
def gauss64():
    return sample_function("gaussian", (-8, 8), 64)


@pytest.fixture(scope="session")
def box64():
    return sample_function("box", (0, 1), 64)


@pytest.fixture(scope="session")
def box_sine64():
    return sample_function("box_sine", (0, 1), 64)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def embed_pair(f, g):
    """Zero-extend two sampled functions onto a common grid."""
    assert f.samples_per_unit == g.samples_per_unit
    s = f.samples_per_unit
    lo = min(f.k_min, g.k_min)
    hi = max(f.k_max, g.k_max)
    a = np.zeros((hi - lo) * s, dtype=np.complex128)
    b = np.zeros((hi - lo) * s, dtype=np.complex128)
    a[(f.k_min - lo) * s : (f.k_min - lo) * s + len(f.values)] = f.values
    b[(g.k_min - lo) * s : (g.k_min - lo) * s + len(g.values)] = g.values
    return a, b


def l2_distance(f, g):
    a, b = embed_pair(f, g)
    return float(np.linalg.norm(a - b) / np.sqrt(f.samples_per_unit))
