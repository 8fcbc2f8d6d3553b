"""Nominal 24-satellite constellation and broadcast-style satellite positions."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO, Iterable

import numpy as np

from .ephemeris import WGS84, BroadcastEphemeris, PhysicalConstants, extrapolate, normalize_angle
from .errors import NoConvergence

KEPLER_MAX_ITER = 30
KEPLER_TOL = 1e-12


def kepler_solve(mean_anomaly: float, e: float) -> float:
    """Eccentric anomaly E with ``E - e*sin(E) = M`` by Newton iteration from E0 = M."""
    if not 0 <= e < 1:
        raise ValueError(f"eccentricity {e} outside [0, 1)")
    M = mean_anomaly
    E = M
    for _ in range(KEPLER_MAX_ITER):
        step = (E - e * math.sin(E) - M) / (1 - e * math.cos(E))
        E -= step
        if abs(step) <= 1e-15 * (1 + abs(E)):
            break
    residual = E - e * math.sin(E) - M
    if abs(residual) >= KEPLER_TOL:
        raise NoConvergence(f"Kepler solve M={M!r} e={e!r} left residual {residual:.3e}")
    return E


def true_anomaly(E: float, e: float) -> float:
    return math.atan2(math.sqrt(1 - e * e) * math.sin(E), math.cos(E) - e)


def position_from_elements(
    eph: BroadcastEphemeris,
    t: float,
    constants: PhysicalConstants = WGS84,
    earth_fixed: bool = True,
) -> np.ndarray:
    """Satellite position (m) at ``t`` seconds of week.

    The elements are first carried to ``t`` with the J2 secular model, then
    the harmonic corrections are applied at the new argument of latitude.
    With ``earth_fixed=False`` the node is not rotated by the earth rate and
    the result is in the inertial frame whose x-axis points to the node
    longitude origin at week start.
    """
    cur = extrapolate(eph, t, constants)
    E = kepler_solve(cur.m0, cur.e)
    phi = true_anomaly(E, cur.e) + cur.omega
    s2, c2 = math.sin(2 * phi), math.cos(2 * phi)
    u = phi + cur.cus * s2 + cur.cuc * c2
    r = cur.a * (1 - cur.e * math.cos(E)) + cur.crs * s2 + cur.crc * c2
    inc = cur.i0 + cur.cis * s2 + cur.cic * c2
    node = cur.omega0 - constants.omega_e * t if earth_fixed else cur.omega0

    xp, yp = r * math.cos(u), r * math.sin(u)
    cn, sn, ci = math.cos(node), math.sin(node), math.cos(inc)
    return np.array([xp * cn - yp * ci * sn, xp * sn + yp * ci * cn, yp * math.sin(inc)])


@dataclass(frozen=True)
class ConstellationSpec:
    planes: int = 6
    sats_per_plane: int = 4
    raan_spacing_deg: float = 60.0
    inclination_deg: float = 55.0
    semi_major_axis: float = 26560000.0
    eccentricity: float = 0.005
    in_plane_spacing_deg: float = 90.0
    phase_offset_per_plane_deg: float = 15.0

    def __post_init__(self):
        if self.planes * self.sats_per_plane != 24:
            raise ValueError(
                f"{self.planes} planes x {self.sats_per_plane} satellites is not 24"
            )


def generate_constellation(spec: ConstellationSpec = ConstellationSpec(), toe: float = 0.0) -> list[BroadcastEphemeris]:
    """Ephemerides for every slot, PRN 1..24 in (plane, slot) order."""
    out = []
    for p in range(spec.planes):
        for k in range(spec.sats_per_plane):
            m0 = k * spec.in_plane_spacing_deg + p * spec.phase_offset_per_plane_deg
            out.append(BroadcastEphemeris(
                toe=toe,
                a=spec.semi_major_axis,
                e=spec.eccentricity,
                i0=math.radians(spec.inclination_deg),
                omega0=normalize_angle(math.radians(p * spec.raan_spacing_deg)),
                omega=0.0,
                m0=normalize_angle(math.radians(m0)),
                prn=p * spec.sats_per_plane + k + 1,
            ))
    return out


def constellation_positions(
    ephs: Iterable[BroadcastEphemeris],
    t: float,
    constants: PhysicalConstants = WGS84,
    earth_fixed: bool = True,
) -> np.ndarray:
    """``(N, 3)`` positions in the order of ``ephs``."""
    return np.array([position_from_elements(e, t, constants, earth_fixed) for e in ephs])


def write_positions_csv(rows: Iterable[tuple[float, int, np.ndarray]], fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(("t", "prn", "x", "y", "z"))
    for t, prn, pos in rows:
        writer.writerow((repr(float(t)), prn) + tuple(repr(float(c)) for c in pos))
