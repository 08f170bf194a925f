"""Field records, the residue from the class number formula, and report files.

Record CSV header::

    label,degree,r1,r2,disc,class_number,regulator,torsion[,kappa][,poly][,bad_primes]

``poly`` holds space-separated integer coefficients, constant term first;
``bad_primes`` is ``p:f1+f2;q:f1`` listing residue degrees.  JSON-lines input
uses the same keys, one object per line.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, fields as dc_fields
from decimal import Decimal, InvalidOperation
import io
import json
import math

import numpy as np

from . import constants as C
from .bounds import log_abs_disc
from .errors import InputError, RecordError
from .precision import DEFAULT_POLICY, Interval, PrecisionPolicy
from .splitting import BadPrimeDecomposition, DefiningPolynomial

RECORD_COLUMNS = ("label", "degree", "r1", "r2", "disc", "class_number", "regulator", "torsion")
OPTIONAL_COLUMNS = ("kappa", "poly", "bad_primes")


@dataclass(frozen=True)
class FieldRecord:
    label: str
    n_K: int
    r1: int
    r2: int
    disc: int
    h: int
    reg: float
    w: int
    poly: DefiningPolynomial | None = None
    bad_primes: tuple[BadPrimeDecomposition, ...] = ()
    kappa: float | None = None
    reg_text: str | None = None
    kappa_text: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "bad_primes", tuple(self.bad_primes or ()))
        self.validate()

    @property
    def abs_disc(self) -> int:
        return abs(self.disc)

    def validate(self):
        if self.n_K < 2:
            raise InputError("degree must be at least 2")
        if self.r1 < 0 or self.r2 < 0 or self.r1 + 2 * self.r2 != self.n_K:
            raise InputError(f"signature ({self.r1}, {self.r2}) does not match degree {self.n_K}")
        if abs(self.disc) < 3:
            raise InputError(f"|disc| = {abs(self.disc)} is below 3")
        if (self.disc < 0) != (self.r2 % 2 == 1):
            raise InputError(f"sign of disc {self.disc} does not match r2 = {self.r2}")
        if self.h < 1 or self.w < 1 or self.w % 2:
            raise InputError("class number must be positive and torsion a positive even number")
        if not self.reg > 0:
            raise InputError("regulator must be positive")
        if self.kappa is not None and not self.kappa > 0:
            raise InputError("kappa must be positive")
        if self.poly is not None and self.poly.degree != self.n_K:
            raise InputError(f"polynomial degree {self.poly.degree} differs from n_K = {self.n_K}")
        for b in self.bad_primes:
            b.check_degree(self.n_K)


def _decimal_enclosure_widened(text: str) -> Interval:
    """Enclose a decimal that is itself rounded to its last digit."""
    d = Decimal(text.strip())
    half = Decimal(1).scaleb(d.as_tuple().exponent) / 2
    lo = C.decimal_enclosure(str(d - half))[0]
    hi = C.decimal_enclosure(str(d + half))[1]
    return Interval(lo, hi)


def residue(rec: FieldRecord, policy: PrecisionPolicy = DEFAULT_POLICY):
    """kappa = 2^r1 (2 pi)^r2 h R / (w sqrt|disc|), unless the record supplies kappa.

    In interval mode the regulator (or kappa) is treated as rounded to its
    last stated digit, except that a regulator of unit rank 0 is exact.
    """
    if policy.interval:
        if rec.kappa is not None:
            return _decimal_enclosure_widened(rec.kappa_text or repr(rec.kappa))
        if rec.r1 + rec.r2 == 1:
            # unit rank 0: the regulator is exactly 1
            reg = Interval(1.0)
        else:
            reg = _decimal_enclosure_widened(rec.reg_text or repr(rec.reg))
        two_pi = 2.0 * Interval.from_decimal(C.PI_STR)
        log_d = log_abs_disc(rec.abs_disc, interval=True)
        return (2.0**rec.r1) * two_pi**rec.r2 * reg / (Interval(rec.w) * np.exp(log_d / 2.0)) * rec.h
    if rec.kappa is not None:
        return float(rec.kappa)
    log_per_class = (
        rec.r1 * math.log(2.0)
        + rec.r2 * math.log(2.0 * math.pi)
        + math.log(rec.reg)
        - math.log(rec.w)
        - 0.5 * math.log(rec.abs_disc)
    )
    # h enters last so that scaling the class number scales kappa exactly
    return math.exp(log_per_class) * rec.h


# --- parsing -----------------------------------------------------------------

def _parse_int(value, name, line):
    try:
        if isinstance(value, bool):
            raise ValueError
        if isinstance(value, int):
            return value
        return int(str(value).strip())
    except (TypeError, ValueError):
        raise RecordError(f"{name} must be an integer, got {value!r}", line) from None


def _parse_real(value, name, line) -> tuple[float, str]:
    text = str(value).strip()
    try:
        Decimal(text)
        return float(text), text
    except (InvalidOperation, ValueError):
        raise RecordError(f"{name} must be a real number, got {value!r}", line) from None


def _record_from_mapping(row: dict, line: int) -> FieldRecord:
    missing = [c for c in RECORD_COLUMNS if row.get(c) in (None, "")]
    if missing:
        raise RecordError(f"missing column(s) {', '.join(missing)}", line)
    reg, reg_text = _parse_real(row["regulator"], "regulator", line)
    kappa = kappa_text = None
    if row.get("kappa") not in (None, ""):
        kappa, kappa_text = _parse_real(row["kappa"], "kappa", line)
    try:
        poly = row.get("poly")
        if isinstance(poly, list):
            poly = DefiningPolynomial(tuple(poly))
        elif poly not in (None, ""):
            poly = DefiningPolynomial.parse(str(poly))
        else:
            poly = None
        bad = row.get("bad_primes")
        bad = BadPrimeDecomposition.parse_list(str(bad)) if bad not in (None, "") else ()
        return FieldRecord(
            label=str(row["label"]).strip(),
            n_K=_parse_int(row["degree"], "degree", line),
            r1=_parse_int(row["r1"], "r1", line),
            r2=_parse_int(row["r2"], "r2", line),
            disc=_parse_int(row["disc"], "disc", line),
            h=_parse_int(row["class_number"], "class_number", line),
            reg=reg,
            w=_parse_int(row["torsion"], "torsion", line),
            poly=poly,
            bad_primes=tuple(bad),
            kappa=kappa,
            reg_text=reg_text,
            kappa_text=kappa_text,
        )
    except RecordError:
        raise
    except (InputError, ValueError) as exc:
        raise RecordError(str(exc), line) from None


def _text_stream(source):
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(source.decode("utf-8"))
    if isinstance(source, str):
        return io.StringIO(source)
    if isinstance(source, io.TextIOBase):
        return source
    return io.TextIOWrapper(source, encoding="utf-8")


def parse_records(source, fmt: str = "csv") -> list[FieldRecord]:
    """Read and validate field records from a byte stream, text stream or string."""
    stream = _text_stream(source)
    records = []
    if fmt == "csv":
        reader = csv.DictReader(stream)
        header = reader.fieldnames or []
        unknown = [c for c in header if c not in RECORD_COLUMNS + OPTIONAL_COLUMNS]
        if unknown:
            raise RecordError(f"unknown column(s) {', '.join(unknown)}", 1)
        for row in reader:
            if None in row:
                raise RecordError("too many fields", reader.line_num)
            records.append(_record_from_mapping(row, reader.line_num))
    elif fmt in ("jsonl", "json-lines"):
        for line_no, text in enumerate(stream, start=1):
            if not text.strip():
                continue
            try:
                row = json.loads(text)
            except json.JSONDecodeError as exc:
                raise RecordError(f"invalid JSON: {exc.msg}", line_no) from None
            if not isinstance(row, dict):
                raise RecordError("each line must be a JSON object", line_no)
            records.append(_record_from_mapping(row, line_no))
    else:
        raise InputError(f"unknown format {fmt!r}")
    return records


def record_row(rec: FieldRecord) -> dict:
    """CSV/JSON row for a record (inverse of parsing)."""
    row = {
        "label": rec.label,
        "degree": rec.n_K,
        "r1": rec.r1,
        "r2": rec.r2,
        "disc": rec.disc,
        "class_number": rec.h,
        "regulator": rec.reg_text or repr(rec.reg),
        "torsion": rec.w,
        "kappa": "" if rec.kappa is None else (rec.kappa_text or repr(rec.kappa)),
        "poly": "" if rec.poly is None else rec.poly.format(),
        "bad_primes": BadPrimeDecomposition.format_list(rec.bad_primes),
    }
    return row


def write_records(records, sink, fmt: str = "csv"):
    stream = _text_stream_out(sink)
    if fmt == "csv":
        writer = csv.DictWriter(stream, fieldnames=RECORD_COLUMNS + OPTIONAL_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for rec in records:
            writer.writerow(record_row(rec))
    else:
        for rec in records:
            stream.write(json.dumps(record_row(rec)) + "\n")
    stream.flush()


# --- reports -------------------------------------------------------------------

@dataclass
class BoundReport:
    label: str
    kappa: float
    x_used: float = math.nan
    upper_19: float = math.nan
    lower_19: float = math.nan
    pass_upper: bool | None = None
    pass_lower: bool | None = None
    c_min_upper: float = math.nan
    c_min_lower: float = math.nan
    comparators: dict = field(default_factory=dict)
    notes: str = ""


REPORT_COLUMNS = tuple(f.name for f in dc_fields(BoundReport))
_REAL_FIELDS = ("kappa", "x_used", "upper_19", "lower_19", "c_min_upper", "c_min_lower")
_FLAG_FIELDS = ("pass_upper", "pass_lower")


def _fmt_real(value: float) -> str:
    return format(float(value), ".17g")


def _fmt_flag(value) -> str:
    return "" if value is None else ("true" if value else "false")


def _parse_flag(text: str, line: int):
    if text in ("", None):
        return None
    if text in ("true", "True", True):
        return True
    if text in ("false", "False", False):
        return False
    raise RecordError(f"bad boolean {text!r}", line)


def report_row(report: BoundReport) -> dict:
    row = {}
    for name in REPORT_COLUMNS:
        value = getattr(report, name)
        if name in _REAL_FIELDS:
            row[name] = _fmt_real(value)
        elif name in _FLAG_FIELDS:
            row[name] = _fmt_flag(value)
        elif name == "comparators":
            row[name] = json.dumps({k: float(v) for k, v in sorted(value.items())}, sort_keys=True)
        else:
            row[name] = value
    return row


def _text_stream_out(sink):
    if isinstance(sink, io.TextIOBase):
        return sink
    return io.TextIOWrapper(sink, encoding="utf-8", newline="", write_through=True)


def write_reports(reports, sink, fmt: str = "csv"):
    """Write reports as CSV (header always present) or JSON lines."""
    stream = _text_stream_out(sink)
    if fmt == "csv":
        writer = csv.DictWriter(stream, fieldnames=REPORT_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for r in reports:
            writer.writerow(report_row(r))
    elif fmt in ("jsonl", "json-lines"):
        for r in reports:
            row = report_row(r)
            row["comparators"] = json.loads(row["comparators"])
            stream.write(json.dumps(row) + "\n")
    else:
        raise InputError(f"unknown format {fmt!r}")
    stream.flush()
    if isinstance(stream, io.TextIOWrapper) and stream is not sink:
        stream.detach()


def _report_from_row(row: dict, line: int) -> BoundReport:
    try:
        kwargs = {"label": row["label"], "notes": row.get("notes") or ""}
        for name in _REAL_FIELDS:
            kwargs[name] = float(row[name])
        for name in _FLAG_FIELDS:
            kwargs[name] = _parse_flag(row[name], line)
        comp = row.get("comparators") or {}
        kwargs["comparators"] = json.loads(comp) if isinstance(comp, str) else dict(comp)
    except (KeyError, ValueError, TypeError) as exc:
        raise RecordError(f"malformed report row: {exc}", line) from None
    return BoundReport(**kwargs)


def read_reports(source, fmt: str = "csv") -> list[BoundReport]:
    stream = _text_stream(source)
    out = []
    if fmt == "csv":
        reader = csv.DictReader(stream)
        if reader.fieldnames is not None and tuple(reader.fieldnames) != REPORT_COLUMNS:
            raise RecordError("report header does not match the report columns", 1)
        for row in reader:
            out.append(_report_from_row(row, reader.line_num))
    elif fmt in ("jsonl", "json-lines"):
        for line_no, text in enumerate(stream, start=1):
            if text.strip():
                try:
                    row = json.loads(text)
                except json.JSONDecodeError as exc:
                    raise RecordError(f"invalid JSON: {exc.msg}", line_no) from None
                out.append(_report_from_row(row, line_no))
    else:
        raise InputError(f"unknown format {fmt!r}")
    return out


def bundled_fields() -> list[FieldRecord]:
    """The small field set shipped with the package (all with defining polynomials)."""
    from importlib.resources import files

    data = files("residue_bounds").joinpath("data/bundled_fields.csv").read_text(encoding="utf-8")
    return parse_records(data, "csv")
