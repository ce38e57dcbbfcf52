"""CSV/JSON serialization of indicator records and statistics outputs.

CSV reals use 6 significant digits; undefined values are an empty field in
CSV and ``null`` in JSON.
"""

from __future__ import annotations

import csv
import json
from collections.abc import Iterable, Sequence
from typing import Any, TextIO

from citeimpact.graph import ParseError
from citeimpact.indicators import COUNT_FIELDS, INDICATOR_NAMES, IndicatorRecord

RECORD_HEADER = ("pub_id", *INDICATOR_NAMES)


def fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def write_csv(fh: TextIO, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def write_json(fh: TextIO, payload: Any) -> None:
    json.dump(payload, fh, indent=1, allow_nan=False)
    fh.write("\n")


def record_row(rec: IndicatorRecord) -> list[Any]:
    return [rec.pub_id, *(getattr(rec, name) for name in INDICATOR_NAMES)]


def record_json(rec: IndicatorRecord) -> dict[str, Any]:
    return {"pub_id": rec.pub_id, **{name: getattr(rec, name) for name in INDICATOR_NAMES}}


def write_records(fh: TextIO, records: Iterable[IndicatorRecord], fmt_name: str = "csv") -> None:
    if fmt_name == "csv":
        write_csv(fh, RECORD_HEADER, (record_row(r) for r in records))
    elif fmt_name == "json":
        write_json(fh, [record_json(r) for r in records])
    else:
        raise ValueError(f"unknown format {fmt_name!r}")


def read_records(fh: TextIO, source: str = "<records>") -> list[IndicatorRecord]:
    """Parse an indicator CSV back into records.

    ``pub`` is set to the row position since dense indices are not stored.
    Relative values come back at the 6-digit precision they were written with.
    """
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty indicator file", source=source) from None
    if tuple(header) != RECORD_HEADER:
        raise ParseError("unexpected indicator CSV header", line=1, source=source)
    out = []
    for k, row in enumerate(reader):
        lineno = k + 2
        if len(row) != len(RECORD_HEADER):
            raise ParseError(f"expected {len(RECORD_HEADER)} columns, got {len(row)}",
                             line=lineno, source=source)
        values: dict[str, Any] = {}
        try:
            for name, cell in zip(INDICATOR_NAMES, row[1:]):
                if name in COUNT_FIELDS:
                    values[name] = int(cell)
                else:
                    values[name] = float(cell) if cell else None
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno, source=source) from None
        out.append(IndicatorRecord(pub=k, pub_id=row[0], **values))
    return out
