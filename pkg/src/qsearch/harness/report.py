"""CSV and JSON output with a frozen, byte-stable layout.

CSV files start with a schema comment line, use LF line endings and UTF-8,
and print reals with 17 significant digits so they round-trip exactly.
Adding a column means bumping ``SCHEMA_VERSION``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path

try:
    import fcntl
except ImportError:  # pragma: no cover - non-POSIX
    fcntl = None

from ..errors import ArgumentError
from ..record import ExperimentRecord

SCHEMA_VERSION = 1
SCHEMA_LINE = f"# qsearch-report schema={SCHEMA_VERSION}"
SWEEP_SCHEMA_LINE = f"# qsearch-sweep schema={SCHEMA_VERSION}"
SWEEP_COLUMNS = ["eta", "success_measured", "success_analytic_2x2"]


def format_cell(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _csv_text(header_line: str, columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    return header_line + "\n" + buf.getvalue()


def _write_text(path: Path, text: str):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc


def records_csv(records) -> str:
    rows = sorted(records, key=lambda r: r.sort_key)
    cols = ExperimentRecord.columns()
    return _csv_text(SCHEMA_LINE, cols, ([getattr(r, c) for c in cols] for r in rows))


def records_json(records) -> str:
    rows = sorted(records, key=lambda r: r.sort_key)
    return json.dumps([r.as_dict() for r in rows], indent=2) + "\n"


def write_report(records, out_dir, stem: str = "report") -> tuple:
    """Write ``<stem>.csv`` and ``<stem>.json`` under ``out_dir``; returns both paths."""
    records = list(records)
    if not records:
        raise ArgumentError("no records to report")
    out_dir = Path(out_dir)
    csv_path, json_path = out_dir / f"{stem}.csv", out_dir / f"{stem}.json"
    _write_text(csv_path, records_csv(records))
    _write_text(json_path, records_json(records))
    return csv_path, json_path


def record_path(out_dir, record: ExperimentRecord) -> Path:
    """Stable file name from the problem id and parameter string."""
    digest = hashlib.sha1(record.parameters.encode("utf-8")).hexdigest()[:12]
    return Path(out_dir) / "records" / f"{record.problem_id}__{digest}.json"


def write_record(out_dir, record: ExperimentRecord) -> Path:
    path = record_path(out_dir, record)
    _write_text(path, json.dumps(record.as_dict(), indent=2) + "\n")
    return path


def append_summary(out_dir, record: ExperimentRecord) -> Path:
    """Append one row to ``summary.csv``, writing the header on first use.

    An exclusive lock keeps concurrent runs from interleaving rows.
    """
    path = Path(out_dir) / "summary.csv"
    cols = ExperimentRecord.columns()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "a", encoding="utf-8", newline="") as fh:
            if fcntl is not None:
                fcntl.flock(fh, fcntl.LOCK_EX)
            if fh.tell() == 0:
                fh.write(_csv_text(SCHEMA_LINE, cols, []))
            buf = io.StringIO()
            csv.writer(buf, lineterminator="\n").writerow(
                [format_cell(getattr(record, c)) for c in cols]
            )
            fh.write(buf.getvalue())
    except OSError as exc:
        raise OSError(exc.errno, f"cannot append to {path}: {exc.strerror}") from exc
    return path


def load_records(directory) -> list:
    """Every JSON record under ``directory/records`` (or ``directory`` itself)."""
    directory = Path(directory)
    sub = directory / "records"
    root = sub if sub.is_dir() else directory
    records = []
    for path in sorted(root.glob("*.json")):
        data = json.loads(path.read_text(encoding="utf-8"))
        if isinstance(data, dict) and set(data) == set(ExperimentRecord.columns()):
            records.append(ExperimentRecord(**data))
    return records


def sweep_csv(rows) -> str:
    return _csv_text(SWEEP_SCHEMA_LINE, SWEEP_COLUMNS, rows)
