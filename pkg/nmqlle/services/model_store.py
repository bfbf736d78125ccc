"""Self-describing JSON documents for trained models.

Arrays are stored as ``{"dtype", "shape", "data"}`` with little-endian bytes in
base64, so a save/load round trip is exact. Keys are sorted, which makes the bytes
of a document a pure function of the model.
"""

import base64
import logging
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
import orjson

from ..classes import ElmModel, NmQlleModel, PcaModel, QlleConfig

logger = logging.getLogger(__name__)

FORMAT = "nmqlle-model"
VERSION = 1

Model = Union[NmQlleModel, PcaModel]


def encode_array(a: np.ndarray) -> Dict[str, Any]:
    a = np.asarray(a)
    dtype = "<i8" if np.issubdtype(a.dtype, np.integer) else "<f8"
    data = np.ascontiguousarray(a, dtype=dtype)
    return {"dtype": dtype, "shape": list(data.shape), "data": base64.b64encode(data.tobytes()).decode("ascii")}


def decode_array(doc: Dict[str, Any]) -> np.ndarray:
    if doc.get("dtype") not in ("<f8", "<i8"):
        raise ValueError(f"Unsupported array dtype {doc.get('dtype')!r}")
    native = np.int64 if doc["dtype"] == "<i8" else np.float64
    raw = base64.b64decode(doc["data"])
    return np.frombuffer(raw, dtype=doc["dtype"]).reshape(doc["shape"]).astype(native)


def _config_doc(cfg: QlleConfig) -> Dict[str, Any]:
    doc = cfg.model_dump()
    # JSON has no infinity; keep it as text
    if not np.isfinite(doc["eta"]):
        doc["eta"] = repr(doc["eta"])
    return doc


def _config_from(doc: Dict[str, Any]) -> QlleConfig:
    return QlleConfig(**{**doc, "eta": float(doc["eta"])})


def _elm_doc(elm: ElmModel) -> Dict[str, Any]:
    return {
        "activation": elm.activation,
        "hidden_count": elm.hidden_count,
        "seed": elm.seed,
        "ridge": elm.ridge,
        "input_weights": encode_array(elm.input_weights),
        "biases": encode_array(elm.biases),
        "output_weights": encode_array(elm.output_weights),
        "scaler": {"shift": encode_array(elm.scaler_shift), "scale": encode_array(elm.scaler_scale)},
    }


def _elm_from(doc: Dict[str, Any]) -> ElmModel:
    return ElmModel(
        input_weights=decode_array(doc["input_weights"]),
        biases=decode_array(doc["biases"]),
        output_weights=decode_array(doc["output_weights"]),
        scaler_shift=decode_array(doc["scaler"]["shift"]),
        scaler_scale=decode_array(doc["scaler"]["scale"]),
        ridge=float(doc["ridge"]),
        seed=int(doc["seed"]),
        activation=doc.get("activation", "sigmoid"),
    )


def model_to_dict(model: Model) -> Dict[str, Any]:
    if isinstance(model, NmQlleModel):
        return {
            "format": FORMAT,
            "version": VERSION,
            "kind": "nm_qlle",
            "shapes": {
                "landmarks": model.n_landmarks,
                "input_dim": model.elm.input_dim,
                "output_dim": model.dim,
                "hidden": model.elm.hidden_count,
            },
            "selection": model.selection,
            "qlle_config": _config_doc(model.qlle_config),
            "landmark_indices": encode_array(model.landmark_indices),
            "landmark_features": encode_array(model.landmark_features),
            "landmark_embedding": encode_array(model.landmark_embedding),
            "neighbor_counts": encode_array(model.neighbor_counts),
            "elm": _elm_doc(model.elm),
        }
    if isinstance(model, PcaModel):
        return {
            "format": FORMAT,
            "version": VERSION,
            "kind": "pca",
            "shapes": {"input_dim": model.mean.shape[0], "output_dim": model.dim},
            "mean": encode_array(model.mean),
            "basis": encode_array(model.basis),
            "explained_variance": encode_array(model.explained_variance),
        }
    raise TypeError(f"Cannot serialize {type(model).__name__}")


def model_from_dict(doc: Dict[str, Any]) -> Model:
    if doc.get("format") != FORMAT:
        raise ValueError(f"Not a model document (format={doc.get('format')!r})")
    if doc.get("version") != VERSION:
        raise ValueError(f"Unsupported model version {doc.get('version')!r}")
    kind = doc.get("kind")
    if kind == "nm_qlle":
        return NmQlleModel(
            landmark_indices=decode_array(doc["landmark_indices"]),
            landmark_features=decode_array(doc["landmark_features"]),
            landmark_embedding=decode_array(doc["landmark_embedding"]),
            elm=_elm_from(doc["elm"]),
            qlle_config=_config_from(doc["qlle_config"]),
            neighbor_counts=decode_array(doc["neighbor_counts"]),
            selection=doc.get("selection", "random"),
        )
    if kind == "pca":
        return PcaModel(
            mean=decode_array(doc["mean"]),
            basis=decode_array(doc["basis"]),
            explained_variance=decode_array(doc["explained_variance"]),
        )
    raise ValueError(f"Unknown model kind {kind!r}")


def dumps_model(model: Model) -> bytes:
    return orjson.dumps(model_to_dict(model), option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2)


def loads_model(blob: Union[bytes, str]) -> Model:
    return model_from_dict(orjson.loads(blob))


def save_model(model: Model, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dumps_model(model))
    logger.info(f"Saved {type(model).__name__} to {path}")
    return path


def load_model(path: Union[str, Path]) -> Model:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Model file not found: {path}")
    return loads_model(path.read_bytes())
