import numpy as np

from ..classes import PcaModel
from ..utils.numerics import pca_bases


def pca_fit(X: np.ndarray, d: int) -> PcaModel:
    """Mean-centred projection on the top-d principal directions."""
    X = np.asarray(X, dtype=np.float64)
    N, D = X.shape
    if not 1 <= d <= min(N, D):
        raise ValueError(f"d={d} must lie in [1, min(N, D)] = [1, {min(N, D)}]")
    mean = X.mean(axis=0)
    centred = X - mean
    # a large common offset leaves rounding in the first pass
    centred -= centred.mean(axis=0)
    tangent, _, singular_values = pca_bases(centred, d)
    variance = np.zeros(d)
    top = min(d, singular_values.size)
    variance[:top] = singular_values[:top] ** 2 / N
    return PcaModel(mean=mean, basis=tangent, explained_variance=variance)


def pca_transform(model: PcaModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.mean.shape[0]:
        raise ValueError(f"expected inputs with {model.mean.shape[0]} columns, got shape {X.shape}")
    return (X - model.mean) @ model.basis
