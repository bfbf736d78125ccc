import numpy as np
import pytest

from nmqlle.benchmark import map_query_ms, refit_query_ms, sweep
from nmqlle.classes import DimensionRecord, OosConfig, QlleConfig, RetrievalReport
from nmqlle.graph import fit_nm_qlle
from nmqlle.services import export_report, load_report_csv, load_report_json
from nmqlle.services.report_service import CSV_COLUMNS
from nmqlle.utils import precision_at_k, synth_manifold


@pytest.fixture
def roll():
    ds, _ = synth_manifold("swiss_roll", 240, noise=0.0, seed=8)
    return ds


class TestSweep:
    def test_original_is_a_single_passthrough_record(self, blobs):
        report = sweep(blobs, "original", [1, 2], returns=9)
        assert len(report.records) == 1
        record = report.records[0]
        assert record.d == blobs.dim
        assert record.mean_precision == 1.0
        assert record.fit_ms == 0.0

    def test_pca_on_plane_matches_ground_truth(self, plane_fixture):
        ds, params = plane_fixture
        report = sweep(ds, "pca", [2], returns=10)
        expected, _ = precision_at_k(params.coordinates, ds.labels, 10)
        assert report.records[0].mean_precision == pytest.approx(expected)

    def test_failed_dimension_is_recorded(self, roll):
        report = sweep(roll, "pca", [1, 2, 5], returns=5)
        assert [r.d for r in report.records] == [1, 2, 5]
        assert report.records[2].error is not None
        assert report.records[2].mean_precision is None
        assert [r.ok for r in report.records] == [True, True, False]

    def test_summary_arithmetic(self, roll):
        report = sweep(roll, "qlle", [1, 2], qlle=QlleConfig(k=8, d=2), returns=5)
        precisions = [r.mean_precision for r in report.records]
        assert report.mean_precision == pytest.approx(np.mean(precisions), abs=0)
        assert report.max_precision == max(precisions)
        assert all(r.mean_query_ms > 0 and r.fit_ms > 0 for r in report.records)

    def test_nm_qlle_is_reproducible(self, roll):
        oos = OosConfig(landmarks=100, hidden=150, seed=2)
        first = sweep(roll, "nm-qlle", [2, 3], qlle=QlleConfig(k=6, d=2), oos=oos, returns=5)
        second = sweep(roll, "nm_qlle", [2, 3], qlle=QlleConfig(k=6, d=2), oos=oos, returns=5)
        assert first.method == "nm_qlle"
        assert [r.mean_precision for r in first.records] == [r.mean_precision for r in second.records]
        assert all(r.ok for r in first.records)

    def test_adapt_k_grows_the_neighbourhood(self, roll):
        report = sweep(roll, "qlle", [8], qlle=QlleConfig(k=4, d=2), returns=5, adapt_k=False)
        assert not report.records[0].ok
        report = sweep(roll, "qlle", [3], qlle=QlleConfig(k=4, d=2), returns=5, adapt_k=True)
        assert report.records[0].ok

    def test_unknown_method(self, roll):
        with pytest.raises(ValueError):
            sweep(roll, "isomap", [2])


class TestQueryTiming:
    def test_helpers_return_positive_means(self, roll):
        cfg = QlleConfig(k=6, d=2)
        model = fit_nm_qlle(roll.features, cfg, landmarks=60, hidden=80, seed=1)
        assert refit_query_ms(roll, cfg, landmarks=60, seed=1, queries=3) > 0
        assert map_query_ms(roll, model, seed=1, queries=3) > 0

    @pytest.mark.slow
    def test_explicit_map_beats_refitting(self):
        ds, _ = synth_manifold("swiss_roll", 2000, noise=0.0, seed=0)
        cfg = QlleConfig(k=8, d=2)
        model = fit_nm_qlle(ds.features, cfg, landmarks=300, hidden=1000, seed=0)
        refit = refit_query_ms(ds, cfg, landmarks=300, seed=0, queries=5)
        mapped = map_query_ms(ds, model, seed=0, queries=50)
        assert mapped * 10 <= refit

    @pytest.mark.slow
    def test_reduced_ranking_beats_full_dimension(self):
        ds, _ = synth_manifold("plane", 2000, seed=0, dim=50)
        full = sweep(ds, "original", [], returns=20)
        reduced = sweep(ds, "pca", [2], returns=20)
        assert reduced.records[0].mean_query_ms < full.records[0].mean_query_ms


class TestReports:
    def _report(self, method, ds=(2, 4)):
        return RetrievalReport(
            method=method, dataset="toy", returns=5,
            records=[DimensionRecord(d=d, mean_precision=0.1 * d, mean_query_ms=0.5, fit_ms=3.0) for d in ds],
        )

    def test_empty_report_is_header_only(self, tmp_path):
        path = export_report(RetrievalReport(method="pca"), tmp_path / "empty.csv")
        assert path.read_text().splitlines() == [",".join(CSV_COLUMNS)]

    def test_json_round_trip(self, tmp_path):
        report = self._report("pca")
        report.records.append(DimensionRecord(d=9, error="ValueError: too large"))
        path = export_report(report, tmp_path / "report.json")
        (back,) = load_report_json(path)
        assert back == report
        assert back.mean_precision == pytest.approx(0.3)

    def test_csv_of_two_methods(self, tmp_path):
        reports = [self._report("pca"), self._report("nm_qlle")]
        path = export_report(reports, tmp_path / "sweep.csv")
        assert len(path.read_text().splitlines()) == 1 + 2 * 2
        back = load_report_csv(path)
        assert [r.method for r in back] == ["pca", "nm_qlle"]
        for original, loaded in zip(reports, back):
            assert loaded.records == original.records

    def test_without_timings(self, tmp_path):
        path = export_report(self._report("pca"), tmp_path / "plain.csv", include_timings=False)
        rows = path.read_text().splitlines()[1:]
        assert rows[0] == "pca,2,0.2,,"

    def test_failed_rows_keep_their_place(self, tmp_path):
        report = RetrievalReport(method="qlle", records=[DimensionRecord(d=3, error="boom")])
        back = load_report_csv(export_report(report, tmp_path / "failed.csv"))
        assert not back[0].records[0].ok
