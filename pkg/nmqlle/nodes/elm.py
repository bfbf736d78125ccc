import logging
from typing import Any, Dict, Tuple

import numpy as np
from scipy import linalg

from ..classes import ElmModel, NmQlleState
from ..utils.numerics import pinv

logger = logging.getLogger(__name__)


def fit_scaler(X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Per-dimension affine map sending [min, max] onto [-1, 1]; constant columns go to 0."""
    lo = X.min(axis=0)
    hi = X.max(axis=0)
    span = hi - lo
    scale = np.ones_like(span)
    np.divide(2.0, span, out=scale, where=span > 0)
    return (hi + lo) / 2.0, scale


def elm_train(Xhat: np.ndarray, Yhat: np.ndarray, hidden: int = 1000, seed: int = 0, ridge: float = 0.0) -> ElmModel:
    """Fit the output weights of a sigmoid ELM so that H beta approximates Yhat.

    beta = pinv(H) Yhat for ``ridge == 0``, otherwise (H^T H + ridge I)^-1 H^T Yhat.
    """
    Xhat = np.asarray(Xhat, dtype=np.float64)
    Yhat = np.asarray(Yhat, dtype=np.float64)
    if Yhat.ndim == 1:
        Yhat = Yhat[:, None]
    if Xhat.ndim != 2 or Xhat.shape[0] != Yhat.shape[0]:
        raise ValueError(f"landmarks {Xhat.shape} and targets {Yhat.shape} do not match")
    if Xhat.shape[0] < 1 or hidden < 1:
        raise ValueError("need at least one landmark and one hidden node")
    if ridge < 0:
        raise ValueError(f"ridge must be non-negative, got {ridge}")

    shift, scale = fit_scaler(Xhat)
    rng = np.random.default_rng(seed)
    A = rng.uniform(-1.0, 1.0, size=(hidden, Xhat.shape[1]))
    b = rng.uniform(-1.0, 1.0, size=hidden)
    draft = ElmModel(
        input_weights=A, biases=b, output_weights=np.zeros((hidden, Yhat.shape[1])),
        scaler_shift=shift, scaler_scale=scale, ridge=float(ridge), seed=int(seed),
    )
    H = draft.hidden(Xhat)
    if not np.all(np.isfinite(H)):
        raise ValueError("hidden layer produced non-finite activations")

    if ridge == 0:
        beta = pinv(H) @ Yhat
    else:
        beta = linalg.solve(H.T @ H + ridge * np.eye(hidden), H.T @ Yhat, assume_a="pos")

    residual = np.linalg.norm(H @ beta - Yhat)
    logger.info(f"Trained ELM with {hidden} hidden nodes on {Xhat.shape[0]} landmarks, residual {residual:.3e}")
    return ElmModel(
        input_weights=A, biases=b, output_weights=beta,
        scaler_shift=shift, scaler_scale=scale, ridge=float(ridge), seed=int(seed),
    )


def hidden_layer(model: ElmModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.input_dim:
        raise ValueError(f"expected inputs with {model.input_dim} columns, got shape {X.shape}")
    return model.hidden(X)


def elm_map(model: ElmModel, X: np.ndarray) -> np.ndarray:
    """Explicit map f(x) = sum_i beta_i g(a_i . scale(x) + b_i), row-wise."""
    return hidden_layer(model, X) @ model.output_weights


class ElmTrainer:
    def run(self, state: NmQlleState) -> Dict[str, Any]:
        indices = state["landmark_indices"]
        elm = elm_train(
            state["features"][indices],
            state["landmark_embedding"].coordinates,
            hidden=state["hidden"],
            seed=state["seed"],
            ridge=state.get("ridge", 0.0),
        )
        return {"elm": elm}
