"""Calendar to GPS time: day numbers, seconds of week, Z-count, toc/toe.

Everything here works on the GPS time scale with the epoch at
1980-01-06 00:00:00 and no leap-second bookkeeping.  Day numbers use the
4-year leap rule, which is why dates after 2099 are rejected.
"""

from __future__ import annotations

import calendar
import math
import re
from dataclasses import dataclass

from .errors import DateOutOfRange, NegativeAge, ScaleOverflow

SECONDS_PER_DAY = 86400
SECONDS_PER_WEEK = 604800
SUBFRAME_SECONDS = 6
ZCOUNT_MODULUS = SECONDS_PER_WEEK // SUBFRAME_SECONDS  # 100800

# Cumulative day count at the start of each month in a common year.
MONTH_START_DAYS = (0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334)

FIRST_DATE = (1980, 1, 6)
LAST_DATE = (2099, 12, 28)

_ISO_RE = re.compile(
    r"^(\d{4})-(\d{2})-(\d{2})[T ](\d{2}):(\d{2}):(\d{2}(?:\.\d+)?)$"
)


@dataclass(frozen=True, order=True)
class CalendarDateTime:
    """Civil date and time on the GPS time scale.

    ``second`` may carry a fraction (RINEX epochs do).
    """

    year: int
    month: int
    day: int
    hour: int = 0
    minute: int = 0
    second: float = 0.0

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise DateOutOfRange(f"month {self.month} outside 1..12")
        if self.year < 1 or self.year > 9999:
            raise DateOutOfRange(f"year {self.year} not representable")
        last = calendar.monthrange(self.year, self.month)[1]
        if not 1 <= self.day <= last:
            raise DateOutOfRange(
                f"day {self.day} invalid for {self.year}-{self.month:02d}"
            )
        if not 0 <= self.hour <= 23:
            raise DateOutOfRange(f"hour {self.hour} outside 0..23")
        if not 0 <= self.minute <= 59:
            raise DateOutOfRange(f"minute {self.minute} outside 0..59")
        if not 0 <= self.second < 60:
            raise DateOutOfRange(f"second {self.second} outside [0, 60)")
        ymd = (self.year, self.month, self.day)
        if ymd < FIRST_DATE or ymd > LAST_DATE:
            raise DateOutOfRange(
                f"{self.year:04d}-{self.month:02d}-{self.day:02d} outside "
                "supported window 1980-01-06 .. 2099-12-28"
            )

    @classmethod
    def parse(cls, text: str) -> CalendarDateTime:
        """Parse ``YYYY-MM-DDThh:mm:ss[.fff]``."""
        m = _ISO_RE.match(text.strip())
        if not m:
            raise ValueError(f"expected YYYY-MM-DDThh:mm:ss, got {text!r}")
        y, mo, d, h, mi = (int(g) for g in m.groups()[:5])
        return cls(y, mo, d, h, mi, float(m.group(6)))

    def isoformat(self) -> str:
        sec = self.second
        if float(sec).is_integer():
            s = f"{int(sec):02d}"
        else:
            s = f"{sec:09.6f}".rstrip("0")
        return (
            f"{self.year:04d}-{self.month:02d}-{self.day:02d}"
            f"T{self.hour:02d}:{self.minute:02d}:{s}"
        )


@dataclass(frozen=True)
class ObservationTimes:
    """Last observation times used to fit the clock (t_L) and ephemeris (t_l)."""

    t_clock: float
    t_ephemeris: float


@dataclass(frozen=True)
class TimeParameters:
    toc: float
    toe: float
    toc_scaled: int
    toe_scaled: int
    iodc: float = 0.0
    iode: float = 0.0
    timezone: int = 0


def _is_leap(year: int) -> bool:
    # 4-year rule only; valid inside the supported window.
    return (year - 1980) % 4 == 0


def day_number(date: CalendarDateTime) -> int:
    """Days elapsed since 1980-01-06 (the GPS epoch, a Sunday)."""
    years = date.year - 1980
    leap_days = years // 4 + 1
    if _is_leap(date.year) and date.month <= 2:
        leap_days -= 1
    return years * 365 + MONTH_START_DAYS[date.month - 1] + date.day + leap_days - 6


def seconds_of_day(date: CalendarDateTime) -> float:
    return date.hour * 3600 + date.minute * 60 + date.second


def seconds_of_week(date: CalendarDateTime) -> float:
    t_sec = (day_number(date) % 7) * SECONDS_PER_DAY + seconds_of_day(date)
    if t_sec < 0:
        t_sec += SECONDS_PER_DAY
    return t_sec


def gps_week(date: CalendarDateTime) -> int:
    """Full (non-rolled-over) GPS week number."""
    return day_number(date) // 7


def gps_seconds(date: CalendarDateTime) -> float:
    """Continuous seconds since the GPS epoch."""
    return day_number(date) * SECONDS_PER_DAY + seconds_of_day(date)


def z_count(t_sec: float) -> int:
    """Z-count of the subframe that starts after ``t_sec`` seconds of week.

    The raw count reaches 100800 in the last subframe of the week and is
    wrapped back to 0.
    """
    if not 0 <= t_sec < SECONDS_PER_WEEK:
        raise ValueError(f"seconds of week {t_sec!r} outside [0, 604800)")
    return (math.floor(t_sec / SUBFRAME_SECONDS) + 1) % ZCOUNT_MODULUS


def reference_times(
    date: CalendarDateTime,
    timezone: int = 0,
    paper_literal: bool = False,
    obs: ObservationTimes | None = None,
) -> TimeParameters:
    """Clock and ephemeris reference epochs (toc == toe) for a local date.

    ``timezone`` is the offset of local time ahead of GPS time in hours.
    With ``paper_literal`` the unexplained constant 43 s is added to toc,
    reproducing the literal formula exactly.  A result that falls before
    the start of the week is wrapped into the previous week's seconds.
    """
    toc = (
        (day_number(date) % 7) * SECONDS_PER_DAY
        + (date.hour - timezone) * 3600
        + date.minute * 60
        + date.second
    )
    if paper_literal:
        toc += 43
    toc %= SECONDS_PER_WEEK
    scaled = math.floor(toc / 16)
    if scaled >= 1 << 16:
        raise ScaleOverflow(f"toc/16 = {scaled} does not fit in 16 bits")
    iodc = iode = 0.0
    if obs is not None:
        iodc, iode = data_ages(toc, toc, obs)
    return TimeParameters(
        toc=toc,
        toe=toc,
        toc_scaled=scaled,
        toe_scaled=scaled,
        iodc=iodc,
        iode=iode,
        timezone=timezone,
    )


def data_ages(toc: float, toe: float, obs: ObservationTimes) -> tuple[float, float]:
    """Return ``(iodc, iode)``: time since the last clock/ephemeris fit observation."""
    iodc = toc - obs.t_clock
    iode = toe - obs.t_ephemeris
    if iodc < 0:
        raise NegativeAge(f"clock observation time {obs.t_clock} after toc {toc}")
    if iode < 0:
        raise NegativeAge(
            f"ephemeris observation time {obs.t_ephemeris} after toe {toe}"
        )
    return iodc, iode
