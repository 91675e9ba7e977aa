"""File formats: prediction records, curve tables, and run reports.

The record schema is one row per sample with header
``id,y_true,y_pred,confidence`` plus an optional trailing ``rejected``
column (0/1).  A JSON mirror uses the same field names.  Floats are
written with their shortest round-tripping representation, so CSV to JSON
to CSV is lossless for finite values; an infinite rejection quality is
serialized as the string "inf" and an undefined nonrejected accuracy as an
empty CSV field or JSON null.
"""

from __future__ import annotations

import csv
import hashlib
import io as _stdio
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DataFormatError, InputError
from .measures import LabeledPredictions, OperatingPoint, PartitionCounts

__all__ = [
    "PredictionRecord",
    "RunReport",
    "CSV_HEADER",
    "CSV_HEADER_REJECTED",
    "read_records",
    "read_records_csv",
    "read_records_json",
    "write_records_csv",
    "write_records_json",
    "records_to_predictions",
    "records_have_rejected",
    "input_digest",
    "format_float",
    "parse_optional_float",
    "phi_for_json",
    "phi_for_csv",
    "parse_phi",
    "point_to_dict",
    "counts_to_dict",
    "curve_csv_text",
    "parse_curve_csv",
    "matrix_csv_text",
]

CSV_HEADER = ["id", "y_true", "y_pred", "confidence"]
CSV_HEADER_REJECTED = CSV_HEADER + ["rejected"]


@dataclass(frozen=True)
class PredictionRecord:
    """One evaluated sample; confidence and rejected are optional."""

    id: str
    y_true: int
    y_pred: int
    confidence: float | None = None
    rejected: int | None = None


@dataclass
class RunReport:
    """Top-level JSON payload every command emits: metadata plus results."""

    meta: dict
    points: list = field(default_factory=list)
    comparisons: list = field(default_factory=list)
    beta_matrix: dict | None = None

    def to_dict(self) -> dict:
        out = {"meta": self.meta, "points": self.points, "comparisons": self.comparisons}
        if self.beta_matrix is not None:
            out["beta_matrix"] = self.beta_matrix
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def format_float(value: float) -> str:
    """Shortest decimal string that parses back to the same double."""
    return repr(float(value))


def parse_optional_float(text: str, where: str) -> float | None:
    if text == "":
        return None
    try:
        return float(text)
    except ValueError:
        raise DataFormatError(f"{where}: {text!r} is not a number") from None


def phi_for_json(phi: float):
    return "inf" if math.isinf(phi) else phi


def phi_for_csv(phi: float) -> str:
    return "inf" if math.isinf(phi) else format_float(phi)


def parse_phi(value) -> float:
    if value == "inf":
        return math.inf
    return float(value)


def _parse_label(text: str, column: str, where: str) -> int:
    try:
        label = int(text)
    except ValueError:
        raise DataFormatError(f"{where}: {column} {text!r} is not an integer") from None
    if label < 1:
        raise DataFormatError(f"{where}: {column} must be >= 1 (0 is reserved for rejection)")
    return label


def _parse_rejected(value, where: str) -> int:
    if value in (0, 1):
        return int(value)
    if value in ("0", "1"):
        return int(value)
    raise DataFormatError(f"{where}: rejected must be 0 or 1, got {value!r}")


def read_records(path: str) -> list[PredictionRecord]:
    """Load prediction records, JSON for .json paths and CSV otherwise."""
    if str(path).lower().endswith(".json"):
        return read_records_json(path)
    return read_records_csv(path)


def read_records_csv(path: str) -> list[PredictionRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: empty file") from None
        if header == CSV_HEADER:
            has_rejected = False
        elif header == CSV_HEADER_REJECTED:
            has_rejected = True
        else:
            raise DataFormatError(
                f"{path} line 1: header must be {','.join(CSV_HEADER)} "
                f"optionally followed by ,rejected; got {','.join(header)!r}"
            )
        expected = len(header)
        for lineno, row in enumerate(reader, start=2):
            where = f"{path} line {lineno}"
            if len(row) != expected:
                raise DataFormatError(f"{where}: expected {expected} fields, got {len(row)}")
            records.append(
                PredictionRecord(
                    id=row[0],
                    y_true=_parse_label(row[1], "y_true", where),
                    y_pred=_parse_label(row[2], "y_pred", where),
                    confidence=parse_optional_float(row[3], f"{where}: confidence"),
                    rejected=_parse_rejected(row[4], where) if has_rejected else None,
                )
            )
    if not records:
        raise DataFormatError(f"{path}: no data rows")
    return records


def read_records_json(path: str) -> list[PredictionRecord]:
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"{path}: invalid JSON ({exc})") from None
    if isinstance(payload, dict) and "records" in payload:
        payload = payload["records"]
    if not isinstance(payload, list) or not payload:
        raise DataFormatError(f"{path}: expected a nonempty array of record objects")
    records = []
    for idx, obj in enumerate(payload):
        where = f"{path} record {idx}"
        if not isinstance(obj, dict):
            raise DataFormatError(f"{where}: expected an object")
        missing = [k for k in ("id", "y_true", "y_pred") if k not in obj]
        if missing:
            raise DataFormatError(f"{where}: missing fields {missing}")
        confidence = obj.get("confidence")
        if confidence is not None and not isinstance(confidence, (int, float)):
            raise DataFormatError(f"{where}: confidence must be a number or null")
        rejected = obj.get("rejected")
        records.append(
            PredictionRecord(
                id=str(obj["id"]),
                y_true=_parse_label(str(obj["y_true"]), "y_true", where),
                y_pred=_parse_label(str(obj["y_pred"]), "y_pred", where),
                confidence=None if confidence is None else float(confidence),
                rejected=None if rejected is None else _parse_rejected(rejected, where),
            )
        )
    return records


def write_records_csv(records: list[PredictionRecord], path: str) -> None:
    include_rejected = records_have_rejected(records)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER_REJECTED if include_rejected else CSV_HEADER)
        for rec in records:
            row = [
                rec.id,
                str(rec.y_true),
                str(rec.y_pred),
                "" if rec.confidence is None else format_float(rec.confidence),
            ]
            if include_rejected:
                row.append(str(rec.rejected))
            writer.writerow(row)


def write_records_json(records: list[PredictionRecord], path: str) -> None:
    payload = []
    for rec in records:
        obj = {"id": rec.id, "y_true": rec.y_true, "y_pred": rec.y_pred,
               "confidence": rec.confidence}
        if rec.rejected is not None:
            obj["rejected"] = rec.rejected
        payload.append(obj)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def records_have_rejected(records: list[PredictionRecord]) -> bool:
    """Whether the records carry a usable rejected column (all or nothing)."""
    flags = [rec.rejected is not None for rec in records]
    if any(flags) and not all(flags):
        raise DataFormatError("rejected is set on some records but not all")
    return all(flags)


def records_to_predictions(records: list[PredictionRecord]) -> tuple[LabeledPredictions, np.ndarray | None]:
    """Convert records to arrays; the mask is None without a rejected column.

    Missing confidences become NaN so their presence stays visible; a file
    with no confidence at all yields confidence=None.
    """
    y_true = np.array([rec.y_true for rec in records], dtype=np.int64)
    y_pred = np.array([rec.y_pred for rec in records], dtype=np.int64)
    conf_values = [rec.confidence for rec in records]
    if all(v is None for v in conf_values):
        confidence = None
    else:
        confidence = np.array(
            [math.nan if v is None else float(v) for v in conf_values], dtype=np.float64
        )
    mask = None
    if records_have_rejected(records):
        mask = np.array([rec.rejected for rec in records], dtype=np.int64)
    return LabeledPredictions(y_true=y_true, y_pred=y_pred, confidence=confidence), mask


def input_digest(path: str) -> str:
    """SHA-256 of the raw file bytes, for auditable cross-file comparisons."""
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def counts_to_dict(counts: PartitionCounts) -> dict:
    return {"an": counts.an, "mn": counts.mn, "ar": counts.ar, "mr": counts.mr}


def point_to_dict(point: OperatingPoint, counts: PartitionCounts | None = None) -> dict:
    out = {
        "r": point.r,
        "A": point.A,
        "Q": point.Q,
        "phi": phi_for_json(point.phi),
        "n": point.n,
    }
    if counts is not None:
        out["counts"] = counts_to_dict(counts)
    return out


def curve_csv_text(points: list[OperatingPoint]) -> str:
    """Plot-ready table, one row per achievable cut: r, A, Q, phi."""
    buf = _stdio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "A", "Q", "phi"])
    for p in points:
        writer.writerow([
            format_float(p.r),
            "" if p.A is None else format_float(p.A),
            format_float(p.Q),
            phi_for_csv(p.phi),
        ])
    return buf.getvalue()


def parse_curve_csv(path: str) -> list[tuple[float, float | None, float, float]]:
    """Read back a curve table as (r, A, Q, phi) tuples."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["r", "A", "Q", "phi"]:
            raise DataFormatError(f"{path} line 1: expected header r,A,Q,phi")
        for lineno, row in enumerate(reader, start=2):
            where = f"{path} line {lineno}"
            if len(row) != 4:
                raise DataFormatError(f"{where}: expected 4 fields, got {len(row)}")
            try:
                rows.append((
                    float(row[0]),
                    parse_optional_float(row[1], f"{where}: A"),
                    float(row[2]),
                    parse_phi(row[3]),
                ))
            except ValueError:
                raise DataFormatError(f"{where}: malformed numeric field") from None
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    return rows


def matrix_csv_text(point_r: list[float], matrix: list[list[float | None]],
                    min_rho: list[float | None]) -> str:
    """Beta matrix as CSV: point fraction, one column per reference, min-rho column."""
    buf = _stdio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["point_r"] + [format_float(r) for r in point_r] + ["min_rho_no_reject"]
    writer.writerow(header)
    for i, r in enumerate(point_r):
        row = [format_float(r)]
        row += ["" if b is None else format_float(b) for b in matrix[i]]
        row.append("" if min_rho[i] is None else format_float(min_rho[i]))
        writer.writerow(row)
    return buf.getvalue()
