import logging
from typing import Any, Dict

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from ..classes import Embedding, EmbeddingError, QlleState, WeightMatrix
from ..utils.numerics import canonicalize_signs, smallest_eigvecs

logger = logging.getLogger(__name__)

FLAT_CURVATURE = 1e-12
CURVATURE_OFFSET = 1e-6


def stabilized_weights(c: np.ndarray, invert: bool = False) -> np.ndarray:
    """Per-sample weights c' for the embedding cost.

    c' = c + 1e-6 max(c), or all ones when every c_i is (numerically) zero so that
    flat data reduces to plain LLE. ``invert`` uses 1/c' instead.
    """
    c = np.asarray(c, dtype=np.float64)
    if np.any(c < 0) or not np.all(np.isfinite(c)):
        raise ValueError("curvatures must be finite and non-negative")
    peak = float(c.max(initial=0.0))
    if peak <= FLAT_CURVATURE:
        return np.ones_like(c)
    weights = c + CURVATURE_OFFSET * peak
    return 1.0 / weights if invert else weights


def alignment_matrix(W: WeightMatrix, weights: np.ndarray) -> np.ndarray:
    """Dense M = (I - W)^T diag(c') (I - W)."""
    A = sparse.identity(W.size, format="csr") - W.matrix
    M = (A.T @ sparse.diags(weights) @ A).toarray()
    return 0.5 * (M + M.T)


def _householder(P: int) -> np.ndarray:
    # reflector u with (I - 2uu^T) e_1 = 1/sqrt(P)
    u = np.full(P, 1.0 / np.sqrt(P))
    u[0] -= 1.0
    norm = np.linalg.norm(u)
    return u / norm if norm > 0 else u


def embedding(W: WeightMatrix, c: np.ndarray, d: int, invert: bool = False) -> Embedding:
    """Bottom non-constant eigenvectors of the curvature-weighted alignment matrix.

    The constant vector spans the null space of M whenever the rows of W sum to one.
    It is removed exactly with a Householder reflection H whose first column is
    1/sqrt(P); the remaining block of H M H then holds eigenpairs 2..d+1 of M.
    Coordinates are scaled to Y^T Y / P = I.
    """
    P = W.size
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    if P < d + 1:
        raise EmbeddingError(f"need at least d+1={d + 1} samples, got {P}")
    n_components, labels = connected_components(W.matrix, directed=True, connection="weak")
    if n_components > 1:
        sizes = np.bincount(labels)
        logger.warning(f"Neighbour graph splits into {n_components} components of sizes {sorted(sizes.tolist())}")
        raise EmbeddingError(
            f"neighbour graph is disconnected ({n_components} components); increase k or min_k"
        )
    weights = stabilized_weights(c, invert)
    M = alignment_matrix(W, weights)

    u = _householder(P)
    Mu = M @ u
    uMu = float(u @ Mu)
    HMH = M - 2.0 * np.outer(u, Mu) - 2.0 * np.outer(Mu, u) + 4.0 * uMu * np.outer(u, u)
    HMH = 0.5 * (HMH + HMH.T)
    values, V = smallest_eigvecs(HMH[1:, 1:], d)

    scale = max(1.0, float(np.abs(M).max(initial=0.0)))
    if values[0] < -1e-10 * scale:
        raise EmbeddingError(f"alignment matrix is not positive semi-definite (eigenvalue {values[0]:.3e})")
    if P > d + 1 and values[0] <= 1e-14 * scale:
        # expected for exactly affine data
        logger.debug(f"Smallest non-constant eigenvalue {values[0]:.3e} is numerically zero")

    padded = np.vstack([np.zeros((1, d)), V])
    vectors = padded - 2.0 * np.outer(u, u @ padded)
    coordinates = canonicalize_signs(vectors * np.sqrt(P))
    return Embedding(coordinates=coordinates, curvature_weights=weights, eigenvalues=np.maximum(values, 0.0))


class SpectralEmbedder:
    def run(self, state: QlleState) -> Dict[str, Any]:
        cfg = state["config"]
        graph = state["neighbor_graph"]
        result = embedding(state["weights"], graph.curvature, cfg.d, cfg.invert_curvature)
        logger.info(f"Embedded {result.coordinates.shape[0]} samples into d={cfg.d}, eigenvalues {result.eigenvalues}")
        return {"embedding": result}
