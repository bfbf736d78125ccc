import csv
import logging
import struct
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..classes import DatasetError, LabeledDataset

logger = logging.getLogger(__name__)

MAGIC = b"QLEB"
VERSION = 1
HEADER = struct.Struct("<4sIQQ")

PathLike = Union[str, Path]


def infer_format(path: PathLike) -> str:
    return "csv" if Path(path).suffix.lower() in (".csv", ".txt") else "f32bin"


def _dense_labels(path: PathLike, raw: np.ndarray, features: np.ndarray, name: str) -> LabeledDataset:
    if features.shape[0] == 0:
        raise DatasetError(path, "no rows")
    bad = np.argwhere(~np.isfinite(features))
    if bad.size:
        row, col = bad[0]
        raise DatasetError(path, f"non-finite value at row {row}, column {col}")
    values, labels = np.unique(raw, return_inverse=True)
    return LabeledDataset(
        features=features, labels=labels.astype(np.int64), name=name, label_values=values
    )


def _read_csv(path: Path) -> LabeledDataset:
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None:
            raise DatasetError(path, "no rows")
        header = [h.strip() for h in header]
        if not header or header[0] != "label":
            raise DatasetError(path, "header must start with 'label'", line=1)
        width = len(header) - 1
        labels, rows = [], []
        for line_no, record in enumerate(reader, start=2):
            if not record or all(not cell.strip() for cell in record):
                continue
            if len(record) != width + 1:
                raise DatasetError(path, f"expected {width + 1} fields, got {len(record)}", line=line_no)
            try:
                labels.append(int(record[0]))
                values = [float(cell) for cell in record[1:]]
            except ValueError as e:
                raise DatasetError(path, f"cannot parse row: {e}", line=line_no) from e
            if not all(np.isfinite(values)):
                col = next(j for j, v in enumerate(values) if not np.isfinite(v))
                raise DatasetError(path, f"non-finite value in column f{col}", line=line_no)
            rows.append(values)
    features = np.asarray(rows, dtype=np.float64).reshape(len(rows), width)
    return _dense_labels(path, np.asarray(labels, dtype=np.int64), features, path.stem)


def _read_f32bin(path: Path) -> LabeledDataset:
    blob = path.read_bytes()
    if not blob:
        raise DatasetError(path, "no rows")
    if len(blob) < HEADER.size:
        raise DatasetError(path, "truncated header")
    magic, version, n, dim = HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise DatasetError(path, f"bad magic {magic!r}")
    if version != VERSION:
        raise DatasetError(path, f"unsupported version {version}")
    expected = HEADER.size + 4 * n * dim + 4 * n
    if len(blob) != expected:
        raise DatasetError(path, f"expected {expected} bytes for {n} x {dim}, found {len(blob)}")
    features = np.frombuffer(blob, dtype="<f4", count=n * dim, offset=HEADER.size).reshape(n, dim)
    raw = np.frombuffer(blob, dtype="<i4", count=n, offset=HEADER.size + 4 * n * dim)
    return _dense_labels(path, raw.astype(np.int64), features.astype(np.float64), path.stem)


def load_features(path: PathLike, fmt: Optional[str] = None) -> LabeledDataset:
    """Read a labelled feature file (``csv`` or ``f32bin``); labels become 0..C-1."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Dataset file not found: {path}")
    fmt = fmt or infer_format(path)
    if fmt == "csv":
        dataset = _read_csv(path)
    elif fmt == "f32bin":
        dataset = _read_f32bin(path)
    else:
        raise ValueError(f"Unknown feature format {fmt!r}")
    logger.info(f"Loaded {dataset.size} x {dataset.dim} features from {path} ({fmt})")
    return dataset


def write_csv(dataset: LabeledDataset, path: PathLike) -> Path:
    return _write_rows(Path(path), dataset.original_labels, dataset.features)


def write_embedding_csv(labels: np.ndarray, Y: np.ndarray, path: PathLike) -> Path:
    return _write_rows(Path(path), labels, Y)


def _write_rows(path: Path, labels: np.ndarray, values: np.ndarray) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["label"] + [f"f{j}" for j in range(values.shape[1])])
        for label, row in zip(labels, values):
            writer.writerow([int(label)] + [repr(float(v)) for v in row])
    return path


def write_f32bin(dataset: LabeledDataset, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n, dim = dataset.features.shape
    with open(path, "wb") as f:
        f.write(HEADER.pack(MAGIC, VERSION, n, dim))
        f.write(np.ascontiguousarray(dataset.features, dtype="<f4").tobytes())
        f.write(np.ascontiguousarray(dataset.original_labels, dtype="<i4").tobytes())
    return path


def write_features(dataset: LabeledDataset, path: PathLike, fmt: Optional[str] = None) -> Path:
    fmt = fmt or infer_format(path)
    return write_csv(dataset, path) if fmt == "csv" else write_f32bin(dataset, path)
