import logging
from typing import Any, Dict

import numpy as np
from scipy.spatial.distance import cdist

from ..classes import NeighborGraph, QlleState
from ..utils.numerics import pca_bases

logger = logging.getLogger(__name__)

BLOCK_ROWS = 1024


def knn(X: np.ndarray, k: int) -> NeighborGraph:
    """Exact Euclidean k-nearest neighbours; ties go to the lower sample index."""
    X = np.asarray(X, dtype=np.float64)
    P = X.shape[0]
    if not 1 <= k <= P - 1:
        raise ValueError(f"k={k} must lie in [1, P-1] = [1, {P - 1}]")

    neighbors = np.empty((P, k), dtype=np.int64)
    distances = np.empty((P, k))
    for start in range(0, P, BLOCK_ROWS):
        stop = min(start + BLOCK_ROWS, P)
        block = cdist(X[start:stop], X)
        block[np.arange(stop - start), np.arange(start, stop)] = np.inf
        order = np.argsort(block, axis=1, kind="stable")[:, :k]
        neighbors[start:stop] = order
        distances[start:stop] = np.take_along_axis(block, order, axis=1)

    return NeighborGraph(
        neighbors=neighbors,
        distances=distances,
        curvature_scores=np.zeros((P, k)),
        curvature=np.zeros(P),
        degenerate=np.zeros((P, k), dtype=bool),
        retained=np.ones((P, k), dtype=bool),
    )


def quasi_curvature(graph: NeighborGraph, X: np.ndarray, d: int) -> NeighborGraph:
    """Score how far each neighbour direction leaves the local tangent plane.

    For sample i with neighbourhood mean m_i, each unit direction
    (x_ij - m_i) / |x_ij - m_i| is projected on the normal basis of the centred
    neighbourhood (principal directions d+1 .. rank). ``c_ij`` is the length of
    that projection divided by k and ``c_i`` their sum, so c_ij <= 1/k and c_i <= 1.
    """
    X = np.asarray(X, dtype=np.float64)
    k = graph.k
    if k < d + 1:
        raise ValueError(f"quasi-curvature needs k >= d+1, got k={k}, d={d}")

    scores = np.zeros((graph.size, k))
    degenerate = np.zeros((graph.size, k), dtype=bool)
    for i in range(graph.size):
        local = X[graph.neighbors[i]]
        centred = local - local.mean(axis=0)
        centred -= centred.mean(axis=0)
        _, normal, _ = pca_bases(centred, d)
        norms = np.linalg.norm(centred, axis=1)
        flat = norms <= np.finfo(np.float64).eps * max(1.0, norms.max())
        degenerate[i] = flat
        if normal.shape[1] == 0:
            continue
        directions = centred[~flat] / norms[~flat, None]
        scores[i, ~flat] = np.linalg.norm(directions @ normal, axis=1) / k

    if n_flat := int(degenerate.sum()):
        logger.warning(f"{n_flat} neighbour directions coincide with their neighbourhood mean")
    curvature = scores.sum(axis=1)
    logger.info(
        f"Quasi-curvature computed for {graph.size} samples: "
        f"mean c_i={curvature.mean():.4g}, max c_i={curvature.max(initial=0.0):.4g}"
    )
    return graph.with_updates(curvature_scores=scores, curvature=curvature, degenerate=degenerate)


def resolve_threshold(graph: NeighborGraph, eta: float, eta_mode: str = "absolute") -> float:
    """Turn the configured eta into an absolute c_ij cut-off."""
    if eta_mode == "absolute":
        return float(eta)
    if eta_mode == "quantile":
        if not 0.0 <= eta <= 1.0:
            raise ValueError(f"quantile eta must lie in [0, 1], got {eta}")
        return float(np.quantile(graph.curvature_scores, eta))
    raise ValueError(f"Unknown eta mode {eta_mode!r}")


def prune(graph: NeighborGraph, eta: float, min_k: int) -> NeighborGraph:
    """Drop neighbours with c_ij > eta while always keeping the min_k nearest."""
    floor = max(0, min(int(min_k), graph.k))
    keep = graph.curvature_scores <= eta
    keep[:, :floor] = True
    retained = graph.retained & keep
    retained[:, :floor] = True
    dropped = int(graph.retained.sum() - retained.sum())
    logger.info(f"Pruned {dropped} neighbours above eta={eta:.4g} (floor {floor})")
    return graph.with_updates(retained=retained)


class NeighborSearch:
    """Builds the initial KNN graph on the fit features."""

    def run(self, state: QlleState) -> Dict[str, Any]:
        cfg = state["config"]
        return {"neighbor_graph": knn(state["features"], cfg.k)}


class CurvatureScorer:
    def run(self, state: QlleState) -> Dict[str, Any]:
        cfg = state["config"]
        graph = quasi_curvature(state["neighbor_graph"], state["features"], cfg.d)
        return {"neighbor_graph": graph}


class NeighborPruner:
    def run(self, state: QlleState) -> Dict[str, Any]:
        cfg = state["config"]
        graph = state["neighbor_graph"]
        threshold = resolve_threshold(graph, cfg.eta, cfg.eta_mode)
        return {"neighbor_graph": prune(graph, threshold, cfg.neighbor_floor)}
