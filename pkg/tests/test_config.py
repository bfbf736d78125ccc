import pytest
from pydantic import ValidationError

from nmqlle.classes import OosConfig, QlleConfig, RunConfig
from nmqlle.classes.config import parse_dims


class TestQlleConfig:
    def test_defaults(self):
        cfg = QlleConfig()
        assert (cfg.k, cfg.eta, cfg.eta_mode, cfg.d, cfg.reg) == (10, 0.9, "quantile", 2, 1e-3)
        assert cfg.neighbor_floor == 3

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"k": 2, "d": 2},
            {"d": 0},
            {"reg": -1.0},
            {"min_k": 2, "d": 2},
            {"min_k": 11},
            {"eta": 1.5},
            {"eta": float("nan"), "eta_mode": "absolute"},
            {"unknown": 1},
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            QlleConfig(**kwargs)

    def test_absolute_eta_may_be_infinite(self):
        assert QlleConfig(eta=float("inf"), eta_mode="absolute").eta == float("inf")

    def test_for_dim_grows_k(self):
        cfg = QlleConfig(k=8, d=2, min_k=4)
        wide = cfg.for_dim(20)
        assert (wide.k, wide.d, wide.min_k) == (21, 20, None)
        assert cfg.for_dim(3).min_k == 4
        with pytest.raises(ValidationError):
            cfg.for_dim(20, adapt_k=False)

    def test_frozen(self):
        with pytest.raises(ValidationError):
            QlleConfig().k = 3


class TestParseDims:
    @pytest.mark.parametrize(
        "value, expected",
        [
            ("10:100:10", list(range(10, 101, 10))),
            ("2:4", [2, 3, 4]),
            ("5,7", [5, 7]),
            ("3", [3]),
            (4, [4]),
            ([1, 2], [1, 2]),
        ],
    )
    def test_forms(self, value, expected):
        assert parse_dims(value) == expected

    def test_bad_step(self):
        with pytest.raises(ValueError):
            parse_dims("1:10:0")


class TestRunConfig:
    def test_methods_are_normalised(self):
        cfg = RunConfig(methods="nm-qlle, pca", d="2:3")
        assert cfg.methods == ["nm_qlle", "pca"]
        assert cfg.d == [2, 3]

    def test_unknown_method(self):
        with pytest.raises(ValidationError):
            RunConfig(methods="isomap")

    def test_validates_every_dimension_up_front(self):
        with pytest.raises(ValidationError):
            RunConfig(methods="qlle", d="2,5", k=4, adapt_k=False)
        assert RunConfig(methods="pca", d="2,5", k=4, adapt_k=False).d == [2, 5]

    def test_oos_config(self):
        cfg = RunConfig(landmarks=300, hidden=500, ridge=1e-6, seed=4, selection="kmeans")
        assert cfg.oos_config() == OosConfig(landmarks=300, hidden=500, ridge=1e-6, seed=4, selection="kmeans")

    def test_rejects_non_positive_returns(self):
        with pytest.raises(ValidationError):
            RunConfig(returns=0)

    def test_min_k_is_kept_only_where_it_fits(self):
        cfg = RunConfig(methods="qlle", d="2,10", k=8, min_k=3)
        low, high = cfg.qlle_config(2), cfg.qlle_config(10)
        assert (low.k, low.min_k, low.neighbor_floor) == (8, 3, 3)
        assert (high.k, high.min_k, high.neighbor_floor) == (11, None, 11)

    def test_qlle_config_matches_for_dim(self):
        cfg = RunConfig(methods="nm_qlle", d="2:6:2", k=6, eta=0.5, eta_mode="absolute", reg=1e-4)
        base = QlleConfig(k=6, eta=0.5, eta_mode="absolute", reg=1e-4)
        for d in cfg.d:
            assert cfg.qlle_config(d) == base.for_dim(d)
