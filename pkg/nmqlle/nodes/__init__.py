from .elm import ElmTrainer, elm_map, elm_train
from .embedding import SpectralEmbedder, embedding
from .landmarks import LandmarkSelector, select_landmarks_kmeans, select_landmarks_random
from .neighborhood import CurvatureScorer, NeighborPruner, NeighborSearch, knn, prune, quasi_curvature
from .pca import pca_fit, pca_transform
from .reconstruction import WeightSolver, reconstruction_weights

__all__ = [
    "ElmTrainer", "elm_map", "elm_train",
    "SpectralEmbedder", "embedding",
    "LandmarkSelector", "select_landmarks_kmeans", "select_landmarks_random",
    "CurvatureScorer", "NeighborPruner", "NeighborSearch", "knn", "prune", "quasi_curvature",
    "pca_fit", "pca_transform",
    "WeightSolver", "reconstruction_weights",
]
