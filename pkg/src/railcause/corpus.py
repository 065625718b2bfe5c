"""FRA-style accident report ingestion, cause-code labeling, and splits."""

from __future__ import annotations

import csv
import json
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence, TextIO

import numpy as np

from railcause.errors import DataError, InvalidCauseCodeError, UnsplittableClassError

CAUSE_CODE_RE = re.compile(r"[EHMST][0-9]+\Z")

GENERAL_CLASSES = ("E", "H", "M", "S", "T")
GENERAL_DESCRIPTIONS = {
    "E": "Electrical failure",
    "H": "Human factor",
    "M": "Miscellaneous",
    "S": "Signal communication",
    "T": "Track",
}

# Top-frequency specific causes; H306/H307 and T220/T207 share descriptions
# and are merged into single categories.
SPECIFIC_CLASSES = ("H306-7", "T110", "H702", "T220-207", "T314", "M405", "H704", "H503")
_SPECIFIC_BY_CODE = {
    "H306": "H306-7",
    "H307": "H306-7",
    "T110": "T110",
    "H702": "H702",
    "T220": "T220-207",
    "T207": "T220-207",
    "T314": "T314",
    "M405": "M405",
    "H704": "H704",
    "H503": "H503",
}


@dataclass(frozen=True)
class AccidentRecord:
    """One accident report: narrative text plus its coded primary cause."""

    id: str
    year: int
    narrative: str
    cause_code: str


@dataclass
class ColumnMap:
    """Names the CSV columns holding the cause code and the ordered
    narrative continuation columns; id/year columns are optional."""

    cause: str
    narrative: list[str]
    id: str | None = None
    year: str | None = None

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ColumnMap":
        try:
            return cls(
                cause=d["cause"],
                narrative=list(d["narrative"]),
                id=d.get("id"),
                year=d.get("year"),
            )
        except KeyError as exc:
            raise DataError(f"column_map missing required key {exc}") from exc


@dataclass
class IngestReport:
    """Counts of rows read, accepted, and skipped per reason."""

    rows_read: int = 0
    accepted: int = 0
    missing_cause: int = 0
    malformed_cause: int = 0
    empty_narrative: int = 0
    duplicate_ids: int = 0

    def merge(self, other: "IngestReport") -> None:
        self.rows_read += other.rows_read
        self.accepted += other.accepted
        self.missing_cause += other.missing_cause
        self.malformed_cause += other.malformed_cause
        self.empty_narrative += other.empty_narrative
        self.duplicate_ids += other.duplicate_ids


def load_records(source: TextIO, column_map: ColumnMap) -> tuple[list[AccidentRecord], IngestReport]:
    """Read accident records from an RFC-4180 CSV stream with a header row.

    Rows with a missing or malformed cause code or an empty narrative are
    skipped and counted in the report.  A mapped column missing from the
    header is fatal.  Duplicate report ids are kept but counted.
    """
    reader = csv.DictReader(source)
    header = reader.fieldnames
    if header is None:
        raise DataError("CSV input has no header row")
    mapped = [column_map.cause, *column_map.narrative]
    if column_map.id:
        mapped.append(column_map.id)
    if column_map.year:
        mapped.append(column_map.year)
    missing = [c for c in mapped if c not in header]
    if missing:
        raise DataError(f"CSV header lacks mapped column(s): {', '.join(missing)}")

    records: list[AccidentRecord] = []
    report = IngestReport()
    seen_ids: set[str] = set()
    for row_no, row in enumerate(reader, start=2):
        report.rows_read += 1
        cause = (row.get(column_map.cause) or "").strip().upper()
        if not cause:
            report.missing_cause += 1
            continue
        if not CAUSE_CODE_RE.match(cause):
            report.malformed_cause += 1
            continue
        parts = [(row.get(col) or "") for col in column_map.narrative]
        narrative = " ".join(" ".join(parts).split())
        if not narrative:
            report.empty_narrative += 1
            continue
        if column_map.id:
            rec_id = (row.get(column_map.id) or "").strip() or f"row{row_no}"
        else:
            rec_id = f"row{row_no}"
        year = 0
        if column_map.year:
            raw_year = (row.get(column_map.year) or "").strip()
            try:
                year = int(float(raw_year)) if raw_year else 0
            except ValueError:
                year = 0
        if rec_id in seen_ids:
            report.duplicate_ids += 1
        seen_ids.add(rec_id)
        records.append(AccidentRecord(id=rec_id, year=year, narrative=narrative, cause_code=cause))
        report.accepted += 1
    return records, report


def general_label(cause_code: str) -> str:
    """General cause letter (one of E/H/M/S/T) for a cause code."""
    if not cause_code:
        raise InvalidCauseCodeError("empty cause code")
    letter = cause_code[0].upper()
    if letter not in GENERAL_CLASSES:
        raise InvalidCauseCodeError(f"unknown cause prefix in {cause_code!r}")
    return letter


def specific_label(cause_code: str) -> str | None:
    """Merged top-frequency category for a cause code, or None if the
    code is not one of the analyzed common causes."""
    general_label(cause_code)
    return _SPECIFIC_BY_CODE.get(cause_code.upper())


def label_for(cause_code: str, scheme: str) -> str | None:
    """Class name of a cause code under a label scheme."""
    if scheme == "general":
        return general_label(cause_code)
    if scheme == "specific":
        return specific_label(cause_code)
    raise ValueError(f"unknown label scheme {scheme!r}")


def class_names(scheme: str) -> tuple[str, ...]:
    """Ordered class names for a label scheme."""
    if scheme == "general":
        return GENERAL_CLASSES
    if scheme == "specific":
        return SPECIFIC_CLASSES
    raise ValueError(f"unknown label scheme {scheme!r}")


@dataclass
class DatasetSplit:
    """Disjoint, stratified train/test partition of labeled records."""

    train: list[tuple[Any, Any]]
    test: list[tuple[Any, Any]]
    seed: int
    test_fraction: float


def stratified_split(
    items: Sequence[tuple[Any, Any]], test_fraction: float, seed: int
) -> DatasetSplit:
    """Split (item, label) pairs into train/test, stratified per label.

    Per-class test counts are round(test_fraction * n_class), clamped so
    every class keeps at least one training item.  Deterministic for a
    fixed seed; both output lists preserve the input order.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must lie in (0, 1)")
    by_label: dict[Any, list[int]] = defaultdict(list)
    for i, (_, label) in enumerate(items):
        by_label[label].append(i)
    for label, idxs in by_label.items():
        if len(idxs) < 2:
            raise UnsplittableClassError(
                f"class {label!r} has {len(idxs)} record(s); need at least 2 to split"
            )
    rng = np.random.default_rng(seed)
    test_idx: set[int] = set()
    for label in sorted(by_label, key=str):
        idxs = np.array(by_label[label])
        n_test = int(np.floor(test_fraction * len(idxs) + 0.5))
        n_test = min(n_test, len(idxs) - 1)
        chosen = rng.permutation(len(idxs))[:n_test]
        test_idx.update(int(idxs[j]) for j in chosen)
    train = [items[i] for i in range(len(items)) if i not in test_idx]
    test = [items[i] for i in range(len(items)) if i in test_idx]
    return DatasetSplit(train=train, test=test, seed=seed, test_fraction=test_fraction)


def save_records(records: Iterable[AccidentRecord], stream: TextIO) -> None:
    """Write records as one JSON object per line."""
    for rec in records:
        stream.write(
            json.dumps(
                {"id": rec.id, "year": rec.year, "narrative": rec.narrative, "cause_code": rec.cause_code},
                sort_keys=True,
            )
        )
        stream.write("\n")


def load_saved_records(stream: TextIO) -> list[AccidentRecord]:
    """Read records written by :func:`save_records`."""
    records = []
    for line_no, line in enumerate(stream, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            records.append(
                AccidentRecord(
                    id=str(obj["id"]),
                    year=int(obj["year"]),
                    narrative=str(obj["narrative"]),
                    cause_code=str(obj["cause_code"]),
                )
            )
        except (KeyError, ValueError) as exc:
            raise DataError(f"line {line_no}: bad dataset record") from exc
    return records
