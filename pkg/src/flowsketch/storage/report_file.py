"""Report CSVs and their JSON sidecars. UTF-8, ',' separated, '.' decimals."""

import csv
import io
import json
from pathlib import Path

from ..errors import FormatError
from ..models.experiment import SummaryRow
from ..models.report import HeavyHitterReport, HeavyHitterRow
from .atomic import atomic_write_text

REPORT_COLUMNS = ("rank", "flow_id", "true_count", "estimated_count", "abs_error", "rel_error")
SUMMARY_COLUMNS = ("d", "w", "seed", "mean_abs_err", "precision", "recall", "updates_per_sec")


def _fmt(value: float, places: int = 6) -> str:
    return f"{value:.{places}f}"


def _to_csv(header: tuple[str, ...], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def encode_report(report: HeavyHitterReport) -> str:
    return _to_csv(REPORT_COLUMNS, [
        [str(r.rank), str(r.flow_id), str(r.true_count), str(r.estimated_count),
         str(r.abs_error), _fmt(r.rel_error)]
        for r in report.rows
    ])


def report_aggregates(report: HeavyHitterReport, **context: object) -> dict:
    return {
        **context,
        "k": report.k,
        "items_ingested": report.items_ingested,
        "precision": report.precision,
        "recall": report.recall,
        "mean_abs_err": report.mean_abs_error,
        "estimated_top": list(report.estimated_top),
    }


def write_report(report: HeavyHitterReport, path: Path, **context: object) -> tuple[Path, Path]:
    """Writes the per-flow CSV and a one-line JSON sidecar next to it."""
    path = Path(path)
    sidecar = path.with_suffix(".json")
    atomic_write_text(path, encode_report(report))
    atomic_write_text(sidecar, json.dumps(report_aggregates(report, **context), sort_keys=True) + "\n")
    return path, sidecar


def read_report(path: Path) -> list[HeavyHitterRow]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != REPORT_COLUMNS:
            raise FormatError(f"{path}: unexpected report columns {reader.fieldnames}")
        return [
            HeavyHitterRow(
                rank=int(row["rank"]),
                flow_id=int(row["flow_id"]),
                true_count=int(row["true_count"]),
                estimated_count=int(row["estimated_count"]),
            )
            for row in reader
        ]


def encode_summary(rows: list[SummaryRow], with_timing: bool = True) -> str:
    header = SUMMARY_COLUMNS if with_timing else SUMMARY_COLUMNS[:-1]
    lines = []
    for r in rows:
        line = [str(r.depth), str(r.width), str(r.seed),
                _fmt(r.mean_abs_error), _fmt(r.precision), _fmt(r.recall)]
        if with_timing:
            line.append(_fmt(r.updates_per_sec, 1))
        lines.append(line)
    return _to_csv(header, lines)


def write_summary(rows: list[SummaryRow], path: Path) -> Path:
    atomic_write_text(path, encode_summary(rows))
    return path


def read_summary(path: Path) -> list[SummaryRow]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != SUMMARY_COLUMNS:
            raise FormatError(f"{path}: unexpected summary columns {reader.fieldnames}")
        return [
            SummaryRow(
                depth=int(row["d"]),
                width=int(row["w"]),
                seed=int(row["seed"]),
                mean_abs_error=float(row["mean_abs_err"]),
                precision=float(row["precision"]),
                recall=float(row["recall"]),
                updates_per_sec=float(row["updates_per_sec"]),
            )
            for row in reader
        ]
