import logging
from typing import Any, Dict

import numpy as np
from scipy import linalg, sparse

from ..classes import NeighborGraph, QlleState, WeightMatrix, WeightSolveError

logger = logging.getLogger(__name__)


def local_weights(x: np.ndarray, neighbors: np.ndarray, reg: float, regularize: bool, index: int = -1) -> np.ndarray:
    """Affine reconstruction weights of ``x`` from the rows of ``neighbors`` (sum to one).

    With a Tikhonov term the regularised Gram system G w = 1 is solved and w rescaled.
    Without one, the constrained problem is solved through its KKT system, which stays
    regular whenever the neighbours are affinely independent even if G is singular.
    """
    C = neighbors - x
    G = C @ C.T
    n = G.shape[0]
    ridge = 0.0
    if regularize or n > C.shape[1]:
        trace = np.trace(G)
        ridge = reg * trace if trace > 0 else reg
    try:
        if ridge > 0:
            w = linalg.solve(G + ridge * np.eye(n), np.ones(n), assume_a="sym")
        else:
            kkt = np.block([[G, np.ones((n, 1))], [np.ones((1, n)), np.zeros((1, 1))]])
            rhs = np.append(np.zeros(n), 1.0)
            w = linalg.solve(kkt, rhs, assume_a="sym")[:n]
    except (linalg.LinAlgError, ValueError) as e:
        raise WeightSolveError(index, str(e)) from e
    total = w.sum()
    if not np.all(np.isfinite(w)) or abs(total) <= np.finfo(np.float64).tiny:
        raise WeightSolveError(index)
    return w / total


def reconstruction_weights(
    X: np.ndarray, graph: NeighborGraph, reg: float = 1e-3, regularize: str = "always"
) -> WeightMatrix:
    """Solve the constrained local least-squares problem for every retained neighbourhood.

    The Tikhonov term ``reg * tr(G)`` is always added when a neighbourhood has more
    members than feature dimensions (G is singular there); ``regularize="always"``
    adds it to every neighbourhood.
    """
    X = np.asarray(X, dtype=np.float64)
    P = graph.size
    counts = graph.neighbor_counts
    if counts.min(initial=1) < 1:
        raise ValueError("every neighbourhood needs at least one retained neighbour")

    rows = np.repeat(np.arange(P), counts)
    cols = np.empty(rows.shape[0], dtype=np.int64)
    vals = np.empty(rows.shape[0])
    offset = 0
    for i in range(P):
        members = graph.neighborhood(i)
        w = local_weights(X[i], X[members], reg, regularize == "always", index=i)
        cols[offset:offset + members.size] = members
        vals[offset:offset + members.size] = w
        offset += members.size

    W = sparse.csr_matrix((vals, (rows, cols)), shape=(P, P))
    logger.info(f"Solved reconstruction weights for {P} samples ({W.nnz} non-zeros)")
    return WeightMatrix(matrix=W)


class WeightSolver:
    def run(self, state: QlleState) -> Dict[str, Any]:
        cfg = state["config"]
        weights = reconstruction_weights(state["features"], state["neighbor_graph"], cfg.reg, cfg.regularize)
        return {"weights": weights}
