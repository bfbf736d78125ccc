"""Dense linear-algebra primitives shared by every pipeline stage.

All functions are pure: they never mutate their inputs and hold no state, so they
can be called from several threads at once.
"""

import logging
from typing import Tuple

import numpy as np
from scipy import linalg
from scipy.linalg import orthogonal_procrustes

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10


def _check_finite(M: np.ndarray, name: str) -> np.ndarray:
    M = np.asarray(M, dtype=np.float64)
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return M


def canonicalize_signs(V: np.ndarray) -> np.ndarray:
    """Flip columns so that the largest-magnitude entry of each is positive."""
    if V.size == 0:
        return V
    pivots = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[pivots, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def pca_bases(
    Xc: np.ndarray, d: int, tol: float = DEFAULT_TOL
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split the row space of a centred block into tangent and normal bases.

    Args:
        Xc: (k, D) block whose column means are zero. Centring is the caller's job.
        d: tangent dimension, 1 <= d <= min(k, D).
        tol: singular values below ``tol * sigma_max`` count as zero.

    Returns:
        (tangent (D, d), normal (D, rank - d), singular values (rank,))
    """
    Xc = _check_finite(Xc, "Xc")
    if Xc.ndim != 2:
        raise ValueError(f"Xc must be 2-D, got shape {Xc.shape}")
    k, D = Xc.shape
    if not 1 <= d <= min(k, D):
        raise ValueError(f"d={d} must lie in [1, min(k, D)] = [1, {min(k, D)}]")
    scale = max(1.0, float(np.abs(Xc).max(initial=0.0)))
    if np.abs(Xc.mean(axis=0)).max(initial=0.0) > 1e-10 * scale:
        raise ValueError("Xc must be centred (column means zero)")

    _, s, Vt = linalg.svd(Xc, full_matrices=False)
    rank = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    V = canonicalize_signs(Vt.T)
    tangent = V[:, :d]
    normal = V[:, d:rank] if rank > d else np.zeros((D, 0))
    return tangent, normal, s[:rank]


def pinv(M: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse through a truncated SVD."""
    M = _check_finite(M, "M")
    m, n = M.shape
    if M.size == 0:
        return np.zeros((n, m))
    U, s, Vt = linalg.svd(M, full_matrices=False)
    if s[0] == 0:
        return np.zeros((n, m))
    keep = s > tol * s[0]
    inv_s = np.zeros_like(s)
    inv_s[keep] = 1.0 / s[keep]
    return (Vt.T * inv_s) @ U.T


def smallest_eigvecs(S: np.ndarray, m: int) -> Tuple[np.ndarray, np.ndarray]:
    """Return the ``m`` algebraically smallest eigenpairs of a symmetric matrix."""
    S = _check_finite(S, "S")
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"S must be square, got shape {S.shape}")
    P = S.shape[0]
    if not 0 <= m <= P:
        raise ValueError(f"m={m} must lie in [0, {P}]")
    norm = float(np.abs(S).max(initial=0.0))
    if np.abs(S - S.T).max(initial=0.0) > 1e-8 * max(1.0, norm):
        raise ValueError("S is not symmetric")
    if m == 0:
        return np.zeros(0), np.zeros((P, 0))
    values, vectors = linalg.eigh(S, subset_by_index=[0, m - 1])
    return values, canonicalize_signs(vectors)


def procrustes_error(A: np.ndarray, B: np.ndarray) -> float:
    """Relative residual of the best similarity transform taking B onto A."""
    A = _check_finite(A, "A")
    B = _check_finite(B, "B")
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    N, d = A.shape
    if N < d:
        raise ValueError(f"need at least as many rows as columns, got {A.shape}")
    A0 = A - A.mean(axis=0)
    B0 = B - B.mean(axis=0)
    norm_a = np.linalg.norm(A0)
    if norm_a == 0:
        raise ValueError("A has zero variance")
    norm_b2 = float(np.sum(B0 * B0))
    if norm_b2 == 0:
        return 1.0
    R, singular_sum = orthogonal_procrustes(B0, A0)
    s = singular_sum / norm_b2
    return float(np.linalg.norm(A0 - s * (B0 @ R)) / norm_a)
