import numpy as np
import pytest

from nmqlle.classes import LabeledDataset
from nmqlle.utils import synth_manifold


def anisotropic_plane(n: int, dim: int, seed: int = 0, stretch=(3.0, 1.0)):
    """Points of a stretched unit square carried into R^dim, plus their 2-D coordinates."""
    rng = np.random.default_rng(seed)
    uv = rng.uniform(size=(n, 2)) * np.asarray(stretch)
    frame, _ = np.linalg.qr(rng.standard_normal((dim, 2)))
    return uv @ frame.T, uv


def whiten(T: np.ndarray) -> np.ndarray:
    T0 = T - T.mean(axis=0)
    values, vectors = np.linalg.eigh(T0.T @ T0 / T0.shape[0])
    return T0 @ vectors @ np.diag(values ** -0.5) @ vectors.T


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def circle():
    t = 2.0 * np.pi * np.arange(8) / 8
    return np.column_stack([np.cos(t), np.sin(t)])


@pytest.fixture
def plane_fixture():
    return synth_manifold("plane", 500, noise=0.0, seed=3, dim=10)


@pytest.fixture
def blobs():
    rng = np.random.default_rng(7)
    features = np.vstack([rng.normal(0.0, 0.1, (10, 4)), rng.normal(10.0, 0.1, (10, 4))])
    labels = np.repeat([0, 1], 10)
    return LabeledDataset(features=features, labels=labels, name="blobs")


@pytest.fixture
def small_roll():
    ds, params = synth_manifold("swiss_roll", 300, noise=0.0, seed=11)
    return ds, params
