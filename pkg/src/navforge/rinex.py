"""RINEX 2 GPS navigation files: fixed-column parsing and writing.

A record is 8 lines.  The first carries PRN, epoch and the clock triple;
the other seven carry four 19-character reals each starting at column 4.
Parsing is purely positional: a value is whatever sits in its column slice.
"""

from __future__ import annotations

import csv
import dataclasses
import math
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .clock import ClockPolynomial
from .ephemeris import BroadcastEphemeris
from .errors import (
    DateOutOfRange,
    MalformedEpoch,
    MalformedNumber,
    MissingHeaderEnd,
    MissingValue,
    RinexError,
    TruncatedRecord,
)
from .gpstime import CalendarDateTime, seconds_of_week

HEADER_END = "END OF HEADER"
LINES_PER_RECORD = 8

# 1-based inclusive column ranges.
EPOCH_REAL_COLUMNS = ((23, 41), (42, 60), (61, 79))
ORBIT_COLUMNS = ((4, 22), (23, 41), (42, 60), (61, 79))

CLOCK_FIELDS = ("af0", "af1", "af2")
ORBIT_FIELDS = (
    ("iode", "crs", "deltan", "m0"),
    ("cuc", "e", "cus", "sqrta"),
    ("toe", "cic", "omega0", "cis"),
    ("i0", "crc", "omega", "omegadot"),
    ("idot", "codes_l2", "week", "l2p_flag"),
    ("sv_accuracy", "sv_health", "tgd", "iodc"),
    ("transmission_time", "fit_interval", "spare1", "spare2"),
)
# Slots that older writers leave blank; read as 0.0 when empty.
OPTIONAL_FIELDS = frozenset({"fit_interval", "spare1", "spare2"})


@dataclass(frozen=True)
class NavRecord:
    """One broadcast ephemeris record.

    Together with the six epoch components this is the 38-value set a
    navigation record holds.  ``af0``/``af1``/``af2`` are the clock terms
    sometimes labelled ``a0``/``a1``/``a2``.
    """

    prn: int
    epoch: CalendarDateTime
    af0: float
    af1: float
    af2: float
    iode: float
    crs: float
    deltan: float
    m0: float
    cuc: float
    e: float
    cus: float
    sqrta: float
    toe: float
    cic: float
    omega0: float
    cis: float
    i0: float
    crc: float
    omega: float
    omegadot: float
    idot: float
    codes_l2: float
    week: float
    l2p_flag: float
    sv_accuracy: float
    sv_health: float
    tgd: float
    iodc: float
    transmission_time: float
    fit_interval: float = 0.0
    spare1: float = 0.0
    spare2: float = 0.0

    def __post_init__(self):
        if not 0 <= self.e < 1:
            raise ValueError(f"eccentricity {self.e} outside [0, 1)")
        if not self.sqrta > 0:
            raise ValueError(f"sqrt(a) {self.sqrta} must be positive")

    def to_ephemeris(self) -> BroadcastEphemeris:
        return BroadcastEphemeris(
            toe=self.toe,
            a=self.sqrta * self.sqrta,
            e=self.e,
            i0=self.i0,
            omega0=self.omega0,
            omega=self.omega,
            m0=self.m0,
            delta_n=self.deltan,
            omega_dot=self.omegadot,
            idot=self.idot,
            cuc=self.cuc,
            cus=self.cus,
            crc=self.crc,
            crs=self.crs,
            cic=self.cic,
            cis=self.cis,
            prn=self.prn,
        )

    def to_clock(self) -> ClockPolynomial:
        return ClockPolynomial(self.af0, self.af1, self.af2, seconds_of_week(self.epoch))


@dataclass(frozen=True)
class NavFile:
    header_lines: tuple[str, ...]
    records: tuple[NavRecord, ...]

    def for_prn(self, prn: int) -> list[NavRecord]:
        return [r for r in self.records if r.prn == prn]


def _split_lines(text: str) -> list[str]:
    lines = text.replace("\r\n", "\n").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def find_header_end(text: str | Sequence[str]) -> int:
    """1-based number of the first line containing ``END OF HEADER``."""
    lines = _split_lines(text) if isinstance(text, str) else text
    for k, line in enumerate(lines, 1):
        if HEADER_END in line:
            return k
    raise MissingHeaderEnd(f"no {HEADER_END!r} marker found")


def _slice(line: str, cols: tuple[int, int]) -> str:
    return line[cols[0] - 1:cols[1]]


def parse_real(field: str) -> float:
    """Parse a Fortran-style real; ``D`` exponents and embedded blanks are accepted."""
    compact = "".join(field.split())
    if not compact:
        raise MissingValue("blank numeric field")
    try:
        return float(compact.replace("D", "E").replace("d", "e"))
    except ValueError:
        raise MalformedNumber(f"cannot read {field!r} as a number") from None


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise MalformedEpoch(f"bad {what} field {text!r}") from None


def parse_epoch(line: str) -> tuple[int, CalendarDateTime]:
    """PRN and epoch from the first line of a record.

    Two-digit years above 79 are 19xx, the rest 20xx.
    """
    if len(line) < 22:
        raise MalformedEpoch(f"epoch line too short ({len(line)} characters)")
    prn = _parse_int(line[0:2], "PRN")
    yy = _parse_int(line[2:5], "year")
    year = yy + 1900 if yy > 79 else yy + 2000
    month = _parse_int(line[5:8], "month")
    day = _parse_int(line[8:11], "day")
    hour = _parse_int(line[11:14], "hour")
    minute = _parse_int(line[14:17], "minute")
    try:
        second = float(line[17:22])
    except ValueError:
        raise MalformedEpoch(f"bad seconds field {line[17:22]!r}") from None
    try:
        return prn, CalendarDateTime(year, month, day, hour, minute, second)
    except DateOutOfRange as exc:
        raise MalformedEpoch(str(exc)) from None


def _read_reals(line, lineno, columns, names, values):
    for cols, name in zip(columns, names):
        try:
            values[name] = parse_real(_slice(line, cols))
        except MissingValue:
            if name not in OPTIONAL_FIELDS:
                raise MissingValue(f"{name} is blank", lineno, cols) from None
            values[name] = 0.0
        except MalformedNumber as exc:
            raise MalformedNumber(f"{name}: {exc}", lineno, cols) from None


def parse_nav_file(text: str) -> NavFile:
    lines = _split_lines(text)
    header_end = find_header_end(lines)
    body = lines[header_end:]
    while body and not body[-1].strip():
        body.pop()
    if len(body) % LINES_PER_RECORD:
        first = header_end + len(body) - len(body) % LINES_PER_RECORD + 1
        raise TruncatedRecord(
            f"{len(body)} body lines is not a multiple of {LINES_PER_RECORD}", first
        )

    records = []
    for start in range(0, len(body), LINES_PER_RECORD):
        lineno = header_end + start + 1
        chunk = body[start:start + LINES_PER_RECORD]
        try:
            prn, epoch = parse_epoch(chunk[0])
        except MalformedEpoch as exc:
            raise MalformedEpoch(str(exc), lineno) from None
        values: dict[str, float] = {}
        _read_reals(chunk[0], lineno, EPOCH_REAL_COLUMNS, CLOCK_FIELDS, values)
        for k, names in enumerate(ORBIT_FIELDS, 1):
            _read_reals(chunk[k], lineno + k, ORBIT_COLUMNS, names, values)
        try:
            records.append(NavRecord(prn=prn, epoch=epoch, **values))
        except ValueError as exc:
            raise RinexError(str(exc), lineno) from None
    return NavFile(tuple(lines[:header_end]), tuple(records))


def read_nav_file(path) -> NavFile:
    with open(path, encoding="ascii", newline="") as fh:
        return parse_nav_file(fh.read())


def format_real(x: float) -> str:
    """19-character ``D19.12`` field, e.g. ``-0.168422434376D+01``."""
    sign = "-" if math.copysign(1.0, x) < 0 else " "
    if x == 0:
        return f"{sign}0.000000000000D+00"
    mant, exp = f"{abs(x):.11E}".split("E")
    exp10 = int(exp) + 1
    if abs(exp10) > 99:
        raise ValueError(f"{x!r} needs a three-digit exponent")
    return f"{sign}0.{mant[0]}{mant[2:]}D{exp10:+03d}"


def format_epoch(prn: int, epoch: CalendarDateTime) -> str:
    return (
        f"{prn:2d} {epoch.year % 100:02d}{epoch.month:3d}{epoch.day:3d}"
        f"{epoch.hour:3d}{epoch.minute:3d}{epoch.second:5.1f}"
    )


def serialize_record(rec: NavRecord) -> list[str]:
    lines = [format_epoch(rec.prn, rec.epoch) + "".join(format_real(getattr(rec, f)) for f in CLOCK_FIELDS)]
    for names in ORBIT_FIELDS:
        lines.append("   " + "".join(format_real(getattr(rec, f)) for f in names))
    return lines


def serialize_nav_file(nav: NavFile) -> str:
    out = list(nav.header_lines)
    for rec in nav.records:
        out.extend(serialize_record(rec))
    return "\n".join(out) + "\n" if out else ""


CSV_COLUMNS = ("prn", "epoch") + CLOCK_FIELDS + tuple(f for row in ORBIT_FIELDS for f in row)


def write_records_csv(records: Iterable[NavRecord], fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        row = dataclasses.asdict(rec)
        writer.writerow(
            [rec.prn, rec.epoch.isoformat()] + [repr(row[c]) for c in CSV_COLUMNS[2:]]
        )
