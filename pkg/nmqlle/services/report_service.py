import csv
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

import orjson

from ..classes import DimensionRecord, RetrievalReport

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["method", "d", "mean_precision", "mean_query_ms", "fit_ms"]

PathLike = Union[str, Path]


def _cell(value: Optional[float]) -> str:
    return "" if value is None else repr(float(value))


def export_report(
    reports: Union[RetrievalReport, Sequence[RetrievalReport]],
    path: PathLike,
    fmt: Optional[str] = None,
    include_timings: bool = True,
) -> Path:
    """Write one row per (method, d). CSV columns: method,d,mean_precision,mean_query_ms,fit_ms.

    Failed records keep their row with empty metric cells; the JSON form also
    carries the error text and the summary fields. Without ``include_timings`` the
    timing cells are left empty, so reruns of a seeded sweep give identical files.
    """
    if isinstance(reports, RetrievalReport):
        reports = [reports]
    if not include_timings:
        reports = [strip_timings(report) for report in reports]
    path = Path(path)
    fmt = fmt or ("json" if path.suffix.lower() == ".json" else "csv")
    path.parent.mkdir(parents=True, exist_ok=True)

    if fmt == "json":
        payload = [report.model_dump() for report in reports]
        path.write_bytes(orjson.dumps(payload, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS))
    elif fmt == "csv":
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(CSV_COLUMNS)
            for report in reports:
                for record in report.records:
                    writer.writerow([
                        report.method,
                        record.d,
                        _cell(record.mean_precision),
                        _cell(record.mean_query_ms),
                        _cell(record.fit_ms),
                    ])
    else:
        raise ValueError(f"Unknown report format {fmt!r}")
    logger.info(f"Wrote {sum(len(r.records) for r in reports)} report rows to {path}")
    return path


def load_report_json(path: PathLike) -> List[RetrievalReport]:
    return [RetrievalReport.model_validate(doc) for doc in orjson.loads(Path(path).read_bytes())]


def load_report_csv(path: PathLike) -> List[RetrievalReport]:
    """Rebuild reports (method and records only) from the CSV form."""
    reports: dict = {}
    with open(path, newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            report = reports.setdefault(row["method"], RetrievalReport(method=row["method"]))
            report.records.append(DimensionRecord(
                d=int(row["d"]),
                mean_precision=float(row["mean_precision"]) if row["mean_precision"] else None,
                mean_query_ms=float(row["mean_query_ms"]) if row["mean_query_ms"] else None,
                fit_ms=float(row["fit_ms"]) if row["fit_ms"] else None,
                error=None if row["mean_precision"] else "failed",
            ))
    return list(reports.values())


def strip_timings(report: RetrievalReport) -> RetrievalReport:
    records = [r.model_copy(update={"mean_query_ms": None, "fit_ms": None}) for r in report.records]
    return report.model_copy(update={"records": records})
