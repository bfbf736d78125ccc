from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.special import expit

from .config import QlleConfig


@dataclass(frozen=True)
class NeighborGraph:
    """KNN structure with quasi-curvature scores and the retained-neighbour mask.

    Rows of every (P, k) array follow ascending distance. ``curvature_scores`` and
    ``curvature`` always describe the full pre-pruning neighbourhood; pruning only
    touches ``retained``.
    """

    neighbors: np.ndarray
    distances: np.ndarray
    curvature_scores: np.ndarray
    curvature: np.ndarray
    degenerate: np.ndarray
    retained: np.ndarray

    @property
    def size(self) -> int:
        return self.neighbors.shape[0]

    @property
    def k(self) -> int:
        return self.neighbors.shape[1]

    @property
    def neighbor_counts(self) -> np.ndarray:
        return self.retained.sum(axis=1)

    def neighborhood(self, i: int) -> np.ndarray:
        return self.neighbors[i][self.retained[i]]

    def with_updates(self, **changes) -> "NeighborGraph":
        return replace(self, **changes)


@dataclass(frozen=True)
class WeightMatrix:
    matrix: sparse.csr_matrix

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=1)).ravel()

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass(frozen=True)
class Embedding:
    coordinates: np.ndarray
    curvature_weights: np.ndarray
    eigenvalues: np.ndarray

    @property
    def objective(self) -> float:
        # Y = sqrt(P) V, so the weighted reconstruction cost is P times the eigenvalue sum
        return float(self.coordinates.shape[0] * np.sum(self.eigenvalues))


@dataclass(frozen=True)
class ElmModel:
    """Single hidden layer network with frozen random input weights.

    ``input_weights`` is (hidden, D), ``biases`` (hidden,), ``output_weights``
    (hidden, d). Inputs pass through the affine scaler ``(x - shift) * scale``
    fitted on the training landmarks before reaching the hidden layer.
    """

    input_weights: np.ndarray
    biases: np.ndarray
    output_weights: np.ndarray
    scaler_shift: np.ndarray
    scaler_scale: np.ndarray
    ridge: float = 0.0
    seed: int = 0
    activation: str = "sigmoid"

    @property
    def hidden_count(self) -> int:
        return self.input_weights.shape[0]

    @property
    def input_dim(self) -> int:
        return self.input_weights.shape[1]

    @property
    def output_dim(self) -> int:
        return self.output_weights.shape[1]

    def scale(self, X: np.ndarray) -> np.ndarray:
        return (X - self.scaler_shift) * self.scaler_scale

    def hidden(self, X: np.ndarray) -> np.ndarray:
        return expit(self.scale(X) @ self.input_weights.T + self.biases)


@dataclass(frozen=True)
class NmQlleModel:
    landmark_indices: np.ndarray
    landmark_features: np.ndarray
    landmark_embedding: np.ndarray
    elm: ElmModel
    qlle_config: QlleConfig
    neighbor_counts: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    selection: str = "random"

    @property
    def n_landmarks(self) -> int:
        return self.landmark_indices.shape[0]

    @property
    def dim(self) -> int:
        return self.landmark_embedding.shape[1]

    def transform(self, X: np.ndarray) -> np.ndarray:
        from ..nodes.elm import elm_map

        return elm_map(self.elm, X)


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    basis: np.ndarray
    explained_variance: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def transform(self, X: np.ndarray) -> np.ndarray:
        from ..nodes.pca import pca_transform

        return pca_transform(self, X)


@dataclass(frozen=True)
class LabeledDataset:
    features: np.ndarray
    labels: np.ndarray
    name: str = "dataset"
    label_values: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.features.ndim != 2:
            raise ValueError(f"features must be 2-D, got shape {self.features.shape}")
        if self.features.shape[0] != self.labels.shape[0]:
            raise ValueError(
                f"{self.features.shape[0]} feature rows but {self.labels.shape[0]} labels"
            )

    @property
    def size(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    @property
    def original_labels(self) -> np.ndarray:
        if self.label_values is None:
            return self.labels
        return self.label_values[self.labels]
