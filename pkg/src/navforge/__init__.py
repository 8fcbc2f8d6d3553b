"""GPS navigation message key-parameter generation and validation."""

from .clock import ClockInit, ClockPolynomial, clock_offset, rereference
from .ephemeris import (
    WGS84,
    BroadcastEphemeris,
    PhysicalConstants,
    extrapolate,
    mean_motion,
    secular_rates,
)
from .gpstime import (
    CalendarDateTime,
    ObservationTimes,
    TimeParameters,
    data_ages,
    day_number,
    reference_times,
    seconds_of_week,
    z_count,
)
from .parity import Word30, append_parity, compute_parity, verify_word

__version__ = "0.1.0"

__all__ = [
    "WGS84",
    "BroadcastEphemeris",
    "CalendarDateTime",
    "ClockInit",
    "ClockPolynomial",
    "ObservationTimes",
    "PhysicalConstants",
    "TimeParameters",
    "Word30",
    "append_parity",
    "clock_offset",
    "compute_parity",
    "data_ages",
    "day_number",
    "extrapolate",
    "mean_motion",
    "reference_times",
    "rereference",
    "secular_rates",
    "seconds_of_week",
    "verify_word",
    "z_count",
]
