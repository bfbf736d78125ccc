import csv

import numpy as np
import pytest
from click.testing import CliRunner

from nmqlle.cli import _run_config, cli
from nmqlle.services import load_features, load_model, load_report_csv
from nmqlle.utils import precision_at_k, synth_manifold


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def roll_csv(runner, tmp_path):
    path = tmp_path / "roll.csv"
    result = runner.invoke(cli, ["synth", "--kind", "swiss_roll", "--n", "200", "--seed", "1", "--out", str(path)])
    assert result.exit_code == 0, result.output
    return path


FIT_ARGS = ["--landmarks", "80", "--hidden", "100", "--k", "8", "--d", "2", "--seed", "7"]


def _read_embedding(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    header, body = rows[0], rows[1:]
    labels = np.array([int(r[0]) for r in body])
    values = np.array([[float(v) for v in r[1:]] for r in body])
    return header, labels, values


class TestSynthCommand:
    def test_binary_output(self, runner, tmp_path):
        path = tmp_path / "roll.bin"
        result = runner.invoke(cli, ["synth", "--kind", "swiss_roll", "--n", "2000", "--seed", "1", "--out", str(path)])
        assert result.exit_code == 0, result.output
        ds = load_features(path)
        assert ds.features.shape == (2000, 3)
        expected, _ = synth_manifold("swiss_roll", 2000, seed=1)
        np.testing.assert_array_equal(ds.features, expected.features.astype(np.float32))

    def test_csv_reload_is_exact(self, runner, roll_csv):
        expected, _ = synth_manifold("swiss_roll", 200, seed=1)
        ds = load_features(roll_csv)
        np.testing.assert_array_equal(ds.features, expected.features)
        np.testing.assert_array_equal(ds.original_labels, expected.labels)

    def test_plane_rank(self, runner, tmp_path):
        path = tmp_path / "plane.csv"
        runner.invoke(cli, ["synth", "--kind", "plane", "--n", "100", "--dim", "6", "--out", str(path)])
        X = load_features(path).features
        s = np.linalg.svd(X - X.mean(axis=0), compute_uv=False)
        assert s[2] <= 1e-10 * s[0]


class TestFitCommand:
    def test_summary_and_model(self, runner, roll_csv, tmp_path):
        out = tmp_path / "model.json"
        result = runner.invoke(cli, ["fit", "--method", "nm-qlle", "--data", str(roll_csv), *FIT_ARGS, "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert "P=80" in result.output
        assert "k_i min/mean/max=" in result.output
        model = load_model(out)
        assert model.n_landmarks == 80
        assert model.elm.seed == 7

    def test_byte_identical_reruns(self, runner, roll_csv, tmp_path):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        for out in (first, second):
            result = runner.invoke(cli, ["fit", "--data", str(roll_csv), *FIT_ARGS, "--out", str(out)])
            assert result.exit_code == 0, result.output
        assert first.read_bytes() == second.read_bytes()

    def test_pca(self, runner, roll_csv, tmp_path):
        out = tmp_path / "pca.json"
        result = runner.invoke(cli, ["fit", "--method", "pca", "--data", str(roll_csv), "--d", "2", "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert load_model(out).dim == 2

    def test_missing_file_is_a_usage_error(self, runner, tmp_path):
        missing = tmp_path / "nowhere.csv"
        result = runner.invoke(cli, ["fit", "--data", str(missing), "--out", str(tmp_path / "m.json")])
        assert result.exit_code == 2
        assert "nowhere.csv" in result.output

    def test_invalid_config_is_rejected_before_compute(self, runner, roll_csv, tmp_path):
        result = runner.invoke(cli, ["fit", "--data", str(roll_csv), "--eta", "1.5", "--out", str(tmp_path / "m.json")])
        assert result.exit_code == 2
        assert not (tmp_path / "m.json").exists()

    def test_compute_failure_exits_one(self, runner, roll_csv, tmp_path):
        result = runner.invoke(cli, ["fit", "--data", str(roll_csv), "--landmarks", "500", "--out", str(tmp_path / "m.json")])
        assert result.exit_code == 1

    def test_config_file_with_flag_override(self, runner, roll_csv, tmp_path):
        config = tmp_path / "run.yaml"
        config.write_text(f"data: {roll_csv}\nlandmarks: 60\nhidden: 90\nk: 8\nd: 2\nseed: 3\n")
        out = tmp_path / "model.json"
        result = runner.invoke(cli, ["fit", "--config", str(config), "--landmarks", "70", "--out", str(out)])
        assert result.exit_code == 0, result.output
        model = load_model(out)
        assert model.n_landmarks == 70
        assert model.elm.hidden_count == 90


class TestTransformCommand:
    def test_matches_in_process_sweep(self, runner, roll_csv, tmp_path):
        model_path, embedded = tmp_path / "model.json", tmp_path / "embedded.csv"
        runner.invoke(cli, ["fit", "--data", str(roll_csv), *FIT_ARGS, "--out", str(model_path)])
        result = runner.invoke(cli, ["transform", str(model_path), "--data", str(roll_csv), "--out", str(embedded)])
        assert result.exit_code == 0, result.output

        header, labels, Y = _read_embedding(embedded)
        assert header == ["label", "f0", "f1"]
        ds = load_features(roll_csv)
        np.testing.assert_array_equal(labels, ds.original_labels)
        np.testing.assert_array_equal(Y, load_model(model_path).transform(ds.features))

        report_path = tmp_path / "sweep.csv"
        runner.invoke(cli, ["sweep", "--methods", "nm-qlle", "--data", str(roll_csv), *FIT_ARGS,
                            "--returns", "10", "--out", str(report_path)])
        (report,) = load_report_csv(report_path)
        expected, _ = precision_at_k(Y, ds.labels, 10)
        assert report.records[0].mean_precision == expected

    def test_dimension_mismatch(self, runner, roll_csv, tmp_path):
        model_path = tmp_path / "model.json"
        runner.invoke(cli, ["fit", "--method", "pca", "--data", str(roll_csv), "--d", "2", "--out", str(model_path)])
        other = tmp_path / "plane.csv"
        runner.invoke(cli, ["synth", "--kind", "plane", "--n", "20", "--dim", "5", "--out", str(other)])
        result = runner.invoke(cli, ["transform", str(model_path), "--data", str(other), "--out", str(tmp_path / "y.csv")])
        assert result.exit_code == 1

    def test_empty_data_file(self, runner, roll_csv, tmp_path):
        model_path = tmp_path / "model.json"
        runner.invoke(cli, ["fit", "--method", "pca", "--data", str(roll_csv), "--d", "2", "--out", str(model_path)])
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        result = runner.invoke(cli, ["transform", str(model_path), "--data", str(empty), "--out", str(tmp_path / "y.csv")])
        assert result.exit_code == 2


class TestSweepCommand:
    ARGS = ["--methods", "nm-qlle,pca,original", "--d", "1,2,5", "--returns", "10",
            "--landmarks", "80", "--hidden", "100", "--k", "8", "--seed", "1"]

    def test_partial_failure_still_succeeds(self, runner, roll_csv, tmp_path):
        out = tmp_path / "report.csv"
        result = runner.invoke(cli, ["sweep", "--data", str(roll_csv), *self.ARGS, "--out", str(out)])
        assert result.exit_code == 0, result.output
        reports = {r.method: r for r in load_report_csv(out)}
        assert [r.d for r in reports["pca"].records] == [1, 2, 5]
        assert [r.ok for r in reports["pca"].records] == [True, True, False]
        assert [r.ok for r in reports["nm_qlle"].records] == [True, True, False]
        assert [r.d for r in reports["original"].records] == [3]

    def test_seeded_reruns_write_identical_reports(self, runner, roll_csv, tmp_path):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        for out in (first, second):
            result = runner.invoke(cli, ["sweep", "--data", str(roll_csv), *self.ARGS, "--no-timings", "--out", str(out)])
            assert result.exit_code == 0, result.output
        assert first.read_bytes() == second.read_bytes()

    def test_every_dimension_failing_exits_one(self, runner, roll_csv, tmp_path):
        result = runner.invoke(cli, ["sweep", "--data", str(roll_csv), "--methods", "pca", "--d", "9",
                                     "--returns", "5", "--out", str(tmp_path / "r.csv")])
        assert result.exit_code == 1

    def test_min_k_only_applies_where_it_fits(self, runner, roll_csv, tmp_path):
        out = tmp_path / "r.csv"
        result = runner.invoke(cli, ["sweep", "--data", str(roll_csv), "--methods", "nm-qlle", "--d", "1,2",
                                     "--min-k", "2", "--returns", "10", "--landmarks", "80", "--hidden", "100",
                                     "--k", "8", "--seed", "1", "--out", str(out)])
        assert result.exit_code == 0, result.output
        (report,) = load_report_csv(out)
        assert [(r.d, r.ok) for r in report.records] == [(1, True), (2, True)]

    def test_toml_config(self, runner, roll_csv, tmp_path):
        config = tmp_path / "sweep.toml"
        config.write_text(f'data = "{roll_csv}"\nmethods = ["pca"]\nd = "1:2"\nreturns = 5\n')
        out = tmp_path / "r.json"
        result = runner.invoke(cli, ["sweep", "--config", str(config), "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert out.exists()

    def test_returns_too_large(self, runner, roll_csv, tmp_path):
        result = runner.invoke(cli, ["sweep", "--data", str(roll_csv), "--methods", "pca", "--d", "2",
                                     "--returns", "200", "--out", str(tmp_path / "r.csv")])
        assert result.exit_code == 2


def test_preset_fills_defaults_and_flags_win():
    cfg = _run_config(None, "corel10k", {"returns": None, "landmarks": 50})
    assert cfg.returns == 12
    assert cfg.landmarks == 50
    assert cfg.d == list(range(10, 101, 10))
    assert cfg.k == 8
