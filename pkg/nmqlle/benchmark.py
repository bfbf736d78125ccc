"""Retrieval precision and per-query cost of each reduction method over a range of d."""

import logging
import time
from typing import Callable, Iterable, Optional, Tuple

import numpy as np

from .classes import DimensionRecord, LabeledDataset, NmQlleModel, OosConfig, QlleConfig, RetrievalReport
from .graph import fit_nm_qlle, fit_qlle
from .nodes import pca_fit, select_landmarks_random
from .utils import precision_at_k

logger = logging.getLogger(__name__)

METHODS = ("nm_qlle", "qlle", "pca", "original")


def _ms(started: float) -> float:
    return (time.perf_counter() - started) * 1000.0


def _fit_and_map(
    ds: LabeledDataset, method: str, qlle: QlleConfig, oos: OosConfig
) -> Tuple[float, float, np.ndarray]:
    """Return (fit_ms, transform_ms, Y) for one method at ``qlle.d``."""
    X = ds.features
    if method == "nm_qlle":
        started = time.perf_counter()
        model = fit_nm_qlle(
            X, qlle, landmarks=oos.landmarks, hidden=oos.hidden, seed=oos.seed,
            ridge=oos.ridge, selection=oos.selection, kmeans_iters=oos.kmeans_iters,
        )
        fit_ms = _ms(started)
        started = time.perf_counter()
        Y = model.transform(X)
        return fit_ms, _ms(started), Y
    if method == "qlle":
        # no explicit map: embedding every sample is the transform
        started = time.perf_counter()
        result, _, _ = fit_qlle(X, qlle)
        fit_ms = _ms(started)
        return fit_ms, fit_ms, result.coordinates
    if method == "pca":
        started = time.perf_counter()
        model = pca_fit(X, qlle.d)
        fit_ms = _ms(started)
        started = time.perf_counter()
        Y = model.transform(X)
        return fit_ms, _ms(started), Y
    raise ValueError(f"Unknown method {method!r}; expected one of {', '.join(METHODS)}")


def _evaluate(ds: LabeledDataset, Y: np.ndarray, returns: int) -> Tuple[float, float]:
    started = time.perf_counter()
    precision, _ = precision_at_k(Y, ds.labels, returns)
    return precision, _ms(started)


def sweep(
    ds: LabeledDataset,
    method: str,
    d_list: Iterable[int],
    qlle: Optional[QlleConfig] = None,
    oos: Optional[OosConfig] = None,
    returns: int = 20,
    adapt_k: bool = True,
) -> RetrievalReport:
    """Fit, map and rank the whole dataset once per target dimension.

    ``mean_query_ms`` is (transform + ranking) / N, so reduction time is part of the
    query cost. A failing d is recorded with its error and the sweep moves on.
    """
    method = method.replace("-", "_")
    if method not in METHODS:
        raise ValueError(f"Unknown method {method!r}; expected one of {', '.join(METHODS)}")
    qlle = qlle or QlleConfig()
    oos = oos or OosConfig()
    report = RetrievalReport(method=method, dataset=ds.name, returns=returns)
    N = ds.size

    if method == "original":
        precision, rank_ms = _evaluate(ds, ds.features, returns)
        report.records.append(DimensionRecord(
            d=ds.dim, mean_precision=precision, mean_query_ms=rank_ms / N, fit_ms=0.0,
        ))
        logger.info(f"original (D={ds.dim}): precision {precision:.4f}")
        return report

    for d in d_list:
        try:
            cfg = qlle.for_dim(d, adapt_k=adapt_k)
            fit_ms, transform_ms, Y = _fit_and_map(ds, method, cfg, oos)
            precision, rank_ms = _evaluate(ds, Y, returns)
        except Exception as e:
            logger.warning(f"{method} failed at d={d}: {type(e).__name__}: {e}")
            report.records.append(DimensionRecord(d=d, error=f"{type(e).__name__}: {e}"))
            continue
        report.records.append(DimensionRecord(
            d=d, mean_precision=precision, mean_query_ms=(transform_ms + rank_ms) / N, fit_ms=fit_ms,
        ))
        logger.info(f"{method} d={d}: precision {precision:.4f}, fit {fit_ms:.1f} ms")

    if not report.successful:
        logger.error(f"{method}: every target dimension failed")
    return report


def _query_indices(N: int, exclude: np.ndarray, queries: int, seed: int) -> np.ndarray:
    pool = np.setdiff1d(np.arange(N), exclude)
    if pool.size == 0:
        pool = np.arange(N)
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(pool, size=min(queries, pool.size), replace=False))


def _mean_ms(fn: Callable[[int], object], indices: np.ndarray) -> float:
    elapsed = []
    for i in indices:
        started = time.perf_counter()
        fn(int(i))
        elapsed.append(_ms(started))
    return float(np.mean(elapsed)) if elapsed else 0.0


def refit_query_ms(
    ds: LabeledDataset, qlle: QlleConfig, landmarks: int, seed: int = 0, queries: int = 10
) -> float:
    """Mean cost of embedding one new query without a map: rerun QLLE on landmarks + query."""
    base = select_landmarks_random(ds.size, landmarks, seed)
    indices = _query_indices(ds.size, base, queries, seed + 1)

    def refit(i: int):
        fit_qlle(ds.features[np.append(base, i)], qlle)

    return _mean_ms(refit, indices)


def map_query_ms(ds: LabeledDataset, model: NmQlleModel, seed: int = 0, queries: int = 10) -> float:
    """Mean cost of embedding one new query through the learned map."""
    indices = _query_indices(ds.size, model.landmark_indices, queries, seed + 1)
    return _mean_ms(lambda i: model.transform(ds.features[i : i + 1]), indices)
