"""Report rows and their CSV/JSON serialization.

Float columns are written twice: shortest round-trip decimal and a hex
float.  Readers take the hex column when present, so a written report reads
back bit-for-bit.
"""

from __future__ import annotations

import csv
import io
import json
import math
import struct
from dataclasses import dataclass, field, fields

FLOAT_FIELDS = ("result", "oracle_result", "relative_error")
COLUMNS = (
    "algorithm",
    "series",
    "n",
    "precision",
    "order",
    "result",
    "result_hex",
    "oracle_result",
    "oracle_result_hex",
    "relative_error",
    "relative_error_hex",
    "wall_time_ns",
    "max_recursion_level",
    "histogram",
    "flags",
)


@dataclass
class ReportRow:
    algorithm: str
    series: str
    n: int
    precision: str
    order: str
    result: float
    oracle_result: float
    relative_error: float
    wall_time_ns: int
    max_recursion_level: int | None = None
    histogram: list[int] | None = None
    flags: list[str] = field(default_factory=list)


def _hist_to_text(h: list[int] | None) -> str:
    return "" if h is None else ";".join(str(c) for c in h)


def _hist_from_text(s: str) -> list[int] | None:
    return None if s == "" else [int(c) for c in s.split(";")]


def _num(x: float):
    """JSON number when finite, string otherwise (strict JSON has no inf/nan)."""
    return x if math.isfinite(x) else repr(x)


def float_to_hex(x: float) -> str:
    """Hex float; NaNs as ``nan(0x<bits>)`` so sign and payload survive."""
    if math.isnan(x):
        return "nan(0x%016x)" % struct.unpack("<Q", struct.pack("<d", x))[0]
    return x.hex()


def float_from_hex(s: str) -> float:
    if s.startswith("nan(") and s.endswith(")"):
        return struct.unpack("<d", struct.pack("<Q", int(s[4:-1], 16)))[0]
    return float.fromhex(s)


def _float_from(record: dict, name: str) -> float:
    hx = record.get(name + "_hex")
    if hx not in (None, ""):
        return float_from_hex(hx)
    return float(record[name])


def _flat(row: ReportRow) -> dict:
    return {
        "algorithm": row.algorithm,
        "series": row.series,
        "n": row.n,
        "precision": row.precision,
        "order": row.order,
        **{k: getattr(row, k) for k in FLOAT_FIELDS},
        **{k + "_hex": float_to_hex(getattr(row, k)) for k in FLOAT_FIELDS},
        "wall_time_ns": row.wall_time_ns,
        "max_recursion_level": row.max_recursion_level,
        "histogram": row.histogram,
        "flags": row.flags,
    }


def _from_record(rec: dict) -> ReportRow:
    mrl = rec.get("max_recursion_level")
    return ReportRow(
        algorithm=rec["algorithm"],
        series=rec["series"],
        n=int(rec["n"]),
        precision=rec["precision"],
        order=rec["order"],
        result=_float_from(rec, "result"),
        oracle_result=_float_from(rec, "oracle_result"),
        relative_error=_float_from(rec, "relative_error"),
        wall_time_ns=int(rec["wall_time_ns"]),
        max_recursion_level=None if mrl in (None, "") else int(mrl),
        histogram=rec["histogram"] if isinstance(rec.get("histogram"), (list, type(None)))
        else _hist_from_text(rec["histogram"]),
        flags=rec["flags"] if isinstance(rec["flags"], list)
        else [f for f in rec["flags"].split(";") if f],
    )


def summarize(rows: list[ReportRow]) -> dict:
    ranked = sorted(rows, key=lambda r: (math.isnan(r.relative_error), r.relative_error))
    best, worst = ranked[0], ranked[-1]
    return {
        "best": {"algorithm": best.algorithm, "order": best.order, "relative_error": _num(best.relative_error)},
        "worst": {"algorithm": worst.algorithm, "order": worst.order, "relative_error": _num(worst.relative_error)},
    }


def to_csv(rows: list[ReportRow], summary: dict | None = None) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        rec = _flat(row)
        for k in FLOAT_FIELDS:
            rec[k] = repr(rec[k])
        rec["max_recursion_level"] = "" if row.max_recursion_level is None else row.max_recursion_level
        rec["histogram"] = _hist_to_text(row.histogram)
        rec["flags"] = ";".join(row.flags)
        w.writerow(rec)
    if summary:
        for key, item in summary.items():
            buf.write(f"# {key}: {item['algorithm']} ({item['order']}) relative_error={item['relative_error']}\n")
    return buf.getvalue()


def from_csv(text: str) -> list[ReportRow]:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    return [_from_record(rec) for rec in csv.DictReader(lines)]


def to_json(rows: list[ReportRow], summary: dict | None = None) -> str:
    recs = []
    for row in rows:
        rec = _flat(row)
        for k in FLOAT_FIELDS:
            rec[k] = _num(rec[k])
        recs.append(rec)
    doc: dict = {"rows": recs}
    if summary:
        doc["summary"] = summary
    return json.dumps(doc, indent=2)


def from_json(text: str) -> list[ReportRow]:
    return [_from_record(rec) for rec in json.loads(text)["rows"]]


def dump(rows: list[ReportRow], fmt: str, summary: dict | None = None) -> str:
    if fmt == "csv":
        return to_csv(rows, summary)
    if fmt == "json":
        return to_json(rows, summary)
    raise ValueError(f"unknown report format {fmt!r}")


def load(text: str, fmt: str) -> list[ReportRow]:
    return from_csv(text) if fmt == "csv" else from_json(text)


ROW_FIELDS = tuple(f.name for f in fields(ReportRow))
