from typing import Tuple

import numpy as np
from scipy.spatial.distance import cdist

BLOCK_ROWS = 512


def precision_at_k(Y: np.ndarray, labels: np.ndarray, returns: int) -> Tuple[float, np.ndarray]:
    """Leave-one-in retrieval precision.

    Every sample queries all other samples; the ``returns`` nearest by Euclidean
    distance are retrieved (ties go to the lower index) and precision is the share
    of them carrying the query's label.
    """
    Y = np.asarray(Y, dtype=np.float64)
    labels = np.asarray(labels)
    N = Y.shape[0]
    if labels.shape[0] != N:
        raise ValueError(f"{N} rows but {labels.shape[0]} labels")
    if not 1 <= returns <= N - 1:
        raise ValueError(f"returns={returns} must lie in [1, N-1] = [1, {N - 1}]")

    per_query = np.empty(N)
    for start in range(0, N, BLOCK_ROWS):
        stop = min(start + BLOCK_ROWS, N)
        rows = np.arange(stop - start)
        dist = cdist(Y[start:stop], Y)
        dist[rows, np.arange(start, stop)] = np.inf
        kth = np.partition(dist, returns - 1, axis=1)[:, returns - 1, None]

        closer = dist < kth
        # fill the remaining slots with tied candidates in index order
        tied = dist == kth
        slots = returns - closer.sum(axis=1, keepdims=True)
        chosen = closer | (tied & (np.cumsum(tied, axis=1) <= slots))

        same = labels[None, :] == labels[start:stop, None]
        per_query[start:stop] = (chosen & same).sum(axis=1) / returns
    return float(per_query.mean()), per_query
