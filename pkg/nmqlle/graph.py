import logging
import time
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
from langgraph.graph import StateGraph

from .classes import (
    Embedding,
    NeighborGraph,
    NmQlleModel,
    NmQlleState,
    QlleConfig,
    QlleState,
    StageError,
    WeightMatrix,
)
from .nodes import (
    CurvatureScorer,
    ElmTrainer,
    LandmarkSelector,
    NeighborPruner,
    NeighborSearch,
    SpectralEmbedder,
    WeightSolver,
)

logger = logging.getLogger(__name__)


def _stage(name: str, fn: Callable[[Dict[str, Any]], Dict[str, Any]]):
    """Wrap a node so failures carry the stage name and wall time lands in ``timings``."""

    def run(state: Dict[str, Any]) -> Dict[str, Any]:
        started = time.perf_counter()
        try:
            update = fn(state)
        except StageError:
            raise
        except Exception as e:
            logger.error(f"Stage {name} failed: {e}")
            raise StageError(name, e) from e
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        logger.info(f"Stage {name} finished in {elapsed_ms:.1f} ms")
        return {**update, "timings": {**state.get("timings", {}), name: elapsed_ms}}

    return run


class QllePipeline:
    """knn -> quasi_curvature -> prune -> reconstruct -> embed."""

    def __init__(self):
        self._init_nodes()
        self._build_workflow()
        self.graph = self.workflow.compile()

    def _init_nodes(self):
        """Initialize all workflow nodes"""
        self.neighbor_search = NeighborSearch()
        self.curvature_scorer = CurvatureScorer()
        self.neighbor_pruner = NeighborPruner()
        self.weight_solver = WeightSolver()
        self.spectral_embedder = SpectralEmbedder()

    def _build_workflow(self):
        """Configure the state graph workflow"""
        self.workflow = StateGraph(QlleState)

        self.workflow.add_node("knn", _stage("knn", self.neighbor_search.run))
        self.workflow.add_node("quasi_curvature", _stage("quasi_curvature", self.curvature_scorer.run))
        self.workflow.add_node("prune", _stage("prune", self.neighbor_pruner.run))
        self.workflow.add_node("reconstruct", _stage("reconstruct", self.weight_solver.run))
        self.workflow.add_node("embed", _stage("embed", self.spectral_embedder.run))

        self.workflow.set_entry_point("knn")
        self.workflow.set_finish_point("embed")
        self.workflow.add_edge("knn", "quasi_curvature")
        self.workflow.add_edge("quasi_curvature", "prune")
        self.workflow.add_edge("prune", "reconstruct")
        self.workflow.add_edge("reconstruct", "embed")

    def run(self, X: np.ndarray, cfg: QlleConfig) -> QlleState:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or not np.all(np.isfinite(X)):
            raise ValueError("features must be a finite 2-D array")
        if X.shape[0] <= cfg.k:
            raise ValueError(f"need more samples than neighbours: P={X.shape[0]}, k={cfg.k}")
        state: QlleState = {"features": X, "config": cfg, "timings": {}}
        return self.graph.invoke(state)

    def compile(self):
        return self.workflow.compile()


class NmQllePipeline:
    """select_landmarks -> embed_landmarks (QLLE) -> train_elm -> assemble."""

    def __init__(self, qlle: Optional[QllePipeline] = None):
        self.qlle = qlle or QllePipeline()
        self._init_nodes()
        self._build_workflow()
        self.graph = self.workflow.compile()

    def _init_nodes(self):
        self.landmark_selector = LandmarkSelector()
        self.elm_trainer = ElmTrainer()

    def _embed_landmarks(self, state: NmQlleState) -> Dict[str, Any]:
        indices = state["landmark_indices"]
        result = self.qlle.run(state["features"][indices], state["config"])
        return {"landmark_graph": result["neighbor_graph"], "landmark_embedding": result["embedding"]}

    def _assemble(self, state: NmQlleState) -> Dict[str, Any]:
        indices = state["landmark_indices"]
        model = NmQlleModel(
            landmark_indices=indices,
            landmark_features=state["features"][indices],
            landmark_embedding=state["landmark_embedding"].coordinates,
            elm=state["elm"],
            qlle_config=state["config"],
            neighbor_counts=state["landmark_graph"].neighbor_counts.astype(np.int64),
            selection=state.get("selection", "random"),
        )
        return {"model": model}

    def _build_workflow(self):
        self.workflow = StateGraph(NmQlleState)

        self.workflow.add_node("select_landmarks", _stage("select_landmarks", self.landmark_selector.run))
        self.workflow.add_node("embed_landmarks", _stage("embed_landmarks", self._embed_landmarks))
        self.workflow.add_node("train_elm", _stage("train_elm", self.elm_trainer.run))
        self.workflow.add_node("assemble", _stage("assemble", self._assemble))

        self.workflow.set_entry_point("select_landmarks")
        self.workflow.set_finish_point("assemble")
        self.workflow.add_edge("select_landmarks", "embed_landmarks")
        self.workflow.add_edge("embed_landmarks", "train_elm")
        self.workflow.add_edge("train_elm", "assemble")

    def run(
        self,
        X: np.ndarray,
        cfg: QlleConfig,
        landmarks: int,
        hidden: int = 1000,
        seed: int = 0,
        ridge: float = 0.0,
        selection: str = "random",
        kmeans_iters: int = 100,
    ) -> NmQlleState:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or not np.all(np.isfinite(X)):
            raise ValueError("features must be a finite 2-D array")
        if landmarks > X.shape[0]:
            raise ValueError(f"landmark count P={landmarks} exceeds sample count N={X.shape[0]}")
        if landmarks <= cfg.k:
            raise ValueError(f"landmark count P={landmarks} must exceed k={cfg.k}")
        state: NmQlleState = {
            "features": X, "config": cfg, "landmark_count": landmarks, "hidden": hidden,
            "seed": seed, "ridge": ridge, "selection": selection, "kmeans_iters": kmeans_iters,
            "timings": {},
        }
        return self.graph.invoke(state)

    def compile(self):
        return self.workflow.compile()


_pipelines: Dict[str, Any] = {}


def _pipeline(kind: str):
    if kind not in _pipelines:
        _pipelines[kind] = NmQllePipeline() if kind == "nm_qlle" else QllePipeline()
    return _pipelines[kind]


def fit_qlle(X: np.ndarray, cfg: QlleConfig) -> Tuple[Embedding, NeighborGraph, WeightMatrix]:
    """Quasi-curvature LLE of all rows of X."""
    state = _pipeline("qlle").run(X, cfg)
    return state["embedding"], state["neighbor_graph"], state["weights"]


def fit_nm_qlle(
    X: np.ndarray,
    cfg: QlleConfig,
    landmarks: int,
    hidden: int = 1000,
    seed: int = 0,
    ridge: float = 0.0,
    selection: str = "random",
    kmeans_iters: int = 100,
) -> NmQlleModel:
    """Embed a landmark subset with QLLE and learn the ELM map that extends it to any x."""
    state = _pipeline("nm_qlle").run(X, cfg, landmarks, hidden, seed, ridge, selection, kmeans_iters)
    return state["model"]
