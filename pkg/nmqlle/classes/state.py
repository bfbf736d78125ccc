from typing import Any, Dict, Literal

from typing_extensions import NotRequired, Required, TypedDict

import numpy as np

from .config import QlleConfig
from .models import ElmModel, Embedding, NeighborGraph, NmQlleModel, WeightMatrix


# Define the QLLE fit state
class QlleState(TypedDict, total=False):
    features: Required[np.ndarray]
    config: Required[QlleConfig]
    neighbor_graph: NeighborGraph
    weights: WeightMatrix
    embedding: Embedding
    timings: Dict[str, float]


class NmQlleState(TypedDict, total=False):
    features: Required[np.ndarray]
    config: Required[QlleConfig]
    landmark_count: Required[int]
    hidden: Required[int]
    seed: Required[int]
    ridge: NotRequired[float]
    selection: NotRequired[Literal["random", "kmeans"]]
    kmeans_iters: NotRequired[int]
    landmark_indices: np.ndarray
    landmark_graph: NeighborGraph
    landmark_embedding: Embedding
    elm: ElmModel
    model: NmQlleModel
    timings: Dict[str, Any]
