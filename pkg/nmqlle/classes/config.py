import math
from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

EtaMode = Literal["absolute", "quantile"]
Method = Literal["nm_qlle", "qlle", "pca", "original"]
Selection = Literal["random", "kmeans"]


class QlleConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    k: int = Field(10, ge=1)
    eta: float = 0.9
    eta_mode: EtaMode = "quantile"
    d: int = Field(2, ge=1)
    min_k: Optional[int] = None
    reg: float = Field(1e-3, ge=0.0)
    regularize: Literal["always", "auto"] = "always"
    invert_curvature: bool = False

    @model_validator(mode="after")
    def check_neighborhood(self) -> "QlleConfig":
        if self.k < self.d + 1:
            raise ValueError(f"k={self.k} must be at least d+1={self.d + 1}")
        if self.min_k is not None and not (self.d + 1 <= self.min_k <= self.k):
            raise ValueError(f"min_k={self.min_k} must lie in [d+1, k] = [{self.d + 1}, {self.k}]")
        if math.isnan(self.eta):
            raise ValueError("eta must not be NaN")
        if self.eta_mode == "quantile" and not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"quantile eta must lie in [0, 1], got {self.eta}")
        return self

    @property
    def neighbor_floor(self) -> int:
        return self.min_k if self.min_k is not None else self.d + 1

    def for_dim(self, d: int, adapt_k: bool = True) -> "QlleConfig":
        """Copy for another target dimension; ``adapt_k`` grows k (and clears min_k) as needed."""
        k = max(self.k, d + 1) if adapt_k else self.k
        min_k = self.min_k if self.min_k is not None and d + 1 <= self.min_k <= k else None
        return QlleConfig(**{**self.model_dump(), "d": d, "k": k, "min_k": min_k})


class OosConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    landmarks: int = Field(600, ge=1)
    hidden: int = Field(1000, ge=1)
    ridge: float = Field(0.0, ge=0.0)
    seed: int = 0
    selection: Selection = "random"
    kmeans_iters: int = Field(100, ge=1)


# Benchmark collections: returns and landmark counts used for each of them
PRESETS = {
    "corel1k": {"returns": 20, "landmarks": 600, "hidden": 1000, "k": 8, "d": list(range(10, 101, 10))},
    "corel10k": {"returns": 12, "landmarks": 2000, "hidden": 1000, "k": 8, "d": list(range(10, 101, 10))},
    "cifar10": {"returns": 500, "landmarks": 3000, "hidden": 1000, "k": 8, "d": list(range(10, 101, 10))},
}


def parse_dims(value) -> List[int]:
    """Accept ``a:b:s`` (inclusive range), ``a,b,c``, a single int, or a list."""
    if isinstance(value, int):
        return [value]
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    text = str(value).strip()
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        if len(parts) == 2:
            parts.append(1)
        if len(parts) != 3 or parts[2] <= 0:
            raise ValueError(f"Invalid range {text!r}; expected a:b or a:b:s with s > 0")
        start, stop, step = parts
        return list(range(start, stop + 1, step))
    return [int(p) for p in text.split(",") if p.strip()]


class RunConfig(BaseModel):
    """Everything a CLI run needs; validated before any compute starts."""

    model_config = ConfigDict(extra="forbid")

    data: Optional[Path] = None
    format: Optional[Literal["csv", "f32bin"]] = None
    methods: List[Method] = ["nm_qlle"]
    k: int = 10
    eta: float = 0.9
    eta_mode: EtaMode = "quantile"
    d: List[int] = [2]
    min_k: Optional[int] = None
    reg: float = 1e-3
    invert_curvature: bool = False
    landmarks: int = 600
    hidden: int = 1000
    ridge: float = 0.0
    seed: int = 0
    selection: Selection = "random"
    kmeans_iters: int = 100
    returns: int = 20
    adapt_k: bool = True
    out: Optional[Path] = None
    report_format: Optional[Literal["csv", "json"]] = None

    @field_validator("methods", mode="before")
    @classmethod
    def normalize_methods(cls, value):
        if isinstance(value, str):
            value = value.split(",")
        return [str(m).strip().replace("-", "_") for m in value if str(m).strip()]

    @field_validator("d", mode="before")
    @classmethod
    def expand_dims(cls, value):
        return parse_dims(value)

    @field_validator("d")
    @classmethod
    def positive_dims(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("at least one target dimension is required")
        if any(v < 1 for v in value):
            raise ValueError(f"target dimensions must be positive, got {value}")
        return value

    @field_validator("returns")
    @classmethod
    def positive_returns(cls, value: int) -> int:
        if value < 1:
            raise ValueError("returns must be positive")
        return value

    @model_validator(mode="after")
    def check_method_configs(self) -> "RunConfig":
        # building the per-method configs runs their validators up front
        self.oos_config()
        if any(m in ("nm_qlle", "qlle") for m in self.methods):
            for d in self.d:
                self.qlle_config(d)
        return self

    def qlle_config(self, d: Optional[int] = None) -> QlleConfig:
        """QLLE settings for one target dimension; min_k is dropped where it falls outside [d+1, k]."""
        d = self.d[0] if d is None else d
        base = QlleConfig.model_construct(
            k=self.k, eta=self.eta, eta_mode=self.eta_mode, d=1, min_k=self.min_k,
            reg=self.reg, regularize="always", invert_curvature=self.invert_curvature,
        )
        return base.for_dim(d, adapt_k=self.adapt_k)

    def oos_config(self) -> OosConfig:
        return OosConfig(
            landmarks=self.landmarks, hidden=self.hidden, ridge=self.ridge,
            seed=self.seed, selection=self.selection, kmeans_iters=self.kmeans_iters,
        )
