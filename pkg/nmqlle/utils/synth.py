import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..classes import LabeledDataset

logger = logging.getLogger(__name__)

KINDS = ("swiss_roll", "plane", "sphere")
N_CLASSES = 10


@dataclass(frozen=True)
class SynthParams:
    """Ground truth kept next to a generated manifold sample."""

    kind: str
    coordinates: np.ndarray
    clean: np.ndarray
    frame: Optional[np.ndarray] = None
    radius: float = 1.0


def _frame(rng: np.random.Generator, rows: int, dim: int) -> np.ndarray:
    # orthonormal rows spanning a random subspace of R^dim
    q, _ = np.linalg.qr(rng.standard_normal((dim, rows)))
    return q.T


def _bins(values: np.ndarray) -> np.ndarray:
    lo, hi = values.min(), values.max()
    if hi <= lo:
        return np.zeros(values.shape[0], dtype=np.int64)
    return np.minimum(((values - lo) / (hi - lo) * N_CLASSES).astype(np.int64), N_CLASSES - 1)


def spiral_arc_length(t: np.ndarray) -> np.ndarray:
    """Arc length of the spiral r = t from 0 to t."""
    return 0.5 * (t * np.sqrt(1.0 + t * t) + np.arcsinh(t))


def synth_manifold(
    kind: str,
    n: int,
    noise: float = 0.0,
    seed: int = 0,
    dim: Optional[int] = None,
    radius: float = 1.0,
) -> Tuple[LabeledDataset, SynthParams]:
    """Sample a parametric manifold with labels from 10 bins of its first parameter.

    swiss_roll: (t cos t, h, t sin t), t = 1.5 pi (1 + 2u), h = 21 v; ground truth is
    (arc length, h). plane: uniform unit square mapped by an orthonormal 2 x dim frame.
    sphere: uniform on the sphere of ``radius``; ground truth is (polar, azimuth).
    For dim > 3 the swiss roll and sphere are carried into R^dim by a random frame.
    """
    if kind not in KINDS:
        raise ValueError(f"Unknown manifold kind {kind!r}; expected one of {KINDS}")
    if n < 10:
        raise ValueError(f"need at least 10 samples, got {n}")
    rng = np.random.default_rng(seed)
    dim = 3 if dim is None else int(dim)
    frame = None

    if kind == "swiss_roll":
        if dim < 3:
            raise ValueError("swiss_roll needs dim >= 3")
        t = 1.5 * np.pi * (1.0 + 2.0 * rng.uniform(size=n))
        h = 21.0 * rng.uniform(size=n)
        clean = np.column_stack([t * np.cos(t), h, t * np.sin(t)])
        truth = np.column_stack([spiral_arc_length(t), h])
        labels = _bins(t)
    elif kind == "plane":
        if dim < 2:
            raise ValueError("plane needs dim >= 2")
        truth = rng.uniform(size=(n, 2))
        frame = _frame(rng, 2, dim)
        clean = truth @ frame
        labels = _bins(truth[:, 0])
    else:
        if dim < 3:
            raise ValueError("sphere needs dim >= 3")
        g = rng.standard_normal((n, 3))
        unit = g / np.linalg.norm(g, axis=1, keepdims=True)
        clean = radius * unit
        polar = np.arccos(np.clip(unit[:, 2], -1.0, 1.0))
        azimuth = np.arctan2(unit[:, 1], unit[:, 0])
        truth = np.column_stack([polar, azimuth])
        labels = _bins(polar)

    if kind != "plane" and dim > 3:
        frame = _frame(rng, 3, dim)
        clean = clean @ frame

    features = clean + noise * rng.standard_normal(clean.shape) if noise > 0 else clean.copy()
    logger.info(f"Generated {kind} sample: {n} x {features.shape[1]}, noise={noise}")
    dataset = LabeledDataset(
        features=features, labels=labels, name=kind, label_values=np.arange(N_CLASSES, dtype=np.int64)
    )
    return dataset, SynthParams(kind=kind, coordinates=truth, clean=clean, frame=frame, radius=radius)
