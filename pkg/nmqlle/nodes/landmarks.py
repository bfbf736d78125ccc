import logging
from typing import Any, Dict

import numpy as np
from scipy.spatial.distance import cdist

from ..classes import NmQlleState

logger = logging.getLogger(__name__)


def select_landmarks_random(N: int, P: int, seed: int = 0) -> np.ndarray:
    """P distinct indices drawn uniformly without replacement."""
    if not 1 <= P <= N:
        raise ValueError(f"landmark count P={P} must lie in [1, N] = [1, {N}]")
    rng = np.random.default_rng(seed)
    return rng.choice(N, size=P, replace=False).astype(np.int64)


def _lloyd(X: np.ndarray, P: int, iters: int, rng: np.random.Generator) -> np.ndarray:
    centers = X[rng.choice(X.shape[0], size=P, replace=False)].copy()
    assignment = None
    for iteration in range(iters):
        dist = cdist(X, centers)
        new_assignment = np.argmin(dist, axis=1)
        if assignment is not None and np.array_equal(new_assignment, assignment):
            logger.debug(f"k-means converged after {iteration} iterations")
            break
        assignment = new_assignment
        own = dist[np.arange(X.shape[0]), assignment]
        counts = np.bincount(assignment, minlength=P)
        sums = np.zeros_like(centers)
        np.add.at(sums, assignment, X)
        nonempty = counts > 0
        centers[nonempty] = sums[nonempty] / counts[nonempty, None]

        # empty clusters restart from the points farthest from their centre
        if (~nonempty).any():
            far = np.argsort(-own, kind="stable")
            for slot, sample in zip(np.flatnonzero(~nonempty), far):
                centers[slot] = X[sample]
            logger.debug(f"Reseeded {int((~nonempty).sum())} empty clusters")
    return centers


def select_landmarks_kmeans(X: np.ndarray, P: int, iters: int = 100, seed: int = 0) -> np.ndarray:
    """Lloyd k-means, then each final centre is replaced by its nearest unused sample."""
    X = np.asarray(X, dtype=np.float64)
    N = X.shape[0]
    if not 1 <= P <= N:
        raise ValueError(f"landmark count P={P} must lie in [1, N] = [1, {N}]")
    rng = np.random.default_rng(seed)
    centers = _lloyd(X, P, iters, rng)

    taken = np.zeros(N, dtype=bool)
    indices = np.empty(P, dtype=np.int64)
    dist = cdist(centers, X)
    for c in range(P):
        for sample in np.argsort(dist[c], kind="stable"):
            if not taken[sample]:
                taken[sample] = True
                indices[c] = sample
                break
    return indices


class LandmarkSelector:
    def run(self, state: NmQlleState) -> Dict[str, Any]:
        X = state["features"]
        P = state["landmark_count"]
        selection = state.get("selection", "random")
        if selection == "kmeans":
            indices = select_landmarks_kmeans(X, P, state.get("kmeans_iters", 100), state["seed"])
        elif selection == "random":
            indices = select_landmarks_random(X.shape[0], P, state["seed"])
        else:
            raise ValueError(f"Unknown landmark selection {selection!r}")
        logger.info(f"Selected {P} of {X.shape[0]} samples as landmarks ({selection})")
        return {"landmark_indices": indices}
