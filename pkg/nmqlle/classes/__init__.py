from .config import PRESETS, OosConfig, QlleConfig, RunConfig
from .errors import DatasetError, EmbeddingError, QlleError, StageError, WeightSolveError
from .models import (
    ElmModel,
    Embedding,
    LabeledDataset,
    NeighborGraph,
    NmQlleModel,
    PcaModel,
    WeightMatrix,
)
from .report import DimensionRecord, RetrievalReport
from .state import NmQlleState, QlleState

__all__ = [
    "PRESETS", "OosConfig", "QlleConfig", "RunConfig",
    "DatasetError", "EmbeddingError", "QlleError", "StageError", "WeightSolveError",
    "ElmModel", "Embedding", "LabeledDataset", "NeighborGraph", "NmQlleModel",
    "PcaModel", "WeightMatrix",
    "DimensionRecord", "RetrievalReport",
    "NmQlleState", "QlleState",
]
