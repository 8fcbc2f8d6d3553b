"""Satellite visibility and position dilution of precision."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO, Iterable, Optional

import numpy as np
import scipy.linalg

from .constellation import ConstellationSpec, constellation_positions, generate_constellation
from .ephemeris import WGS84, PhysicalConstants
from .errors import InsufficientSatellites, NavForgeError, SingularGeometry

MAX_CONDITION = 1e12
DEFAULT_MASK_DEG = 5.0


@dataclass(frozen=True)
class DopResult:
    t: float
    visible_count: int
    pdop: Optional[float]
    error: Optional[str] = None


def geodetic_to_ecef(lat_deg: float, lon_deg: float, height: float = 0.0,
                     constants: PhysicalConstants = WGS84) -> np.ndarray:
    lat, lon = math.radians(lat_deg), math.radians(lon_deg)
    f = constants.flattening
    e2 = f * (2 - f)
    n = constants.a_e / math.sqrt(1 - e2 * math.sin(lat) ** 2)
    return np.array([
        (n + height) * math.cos(lat) * math.cos(lon),
        (n + height) * math.cos(lat) * math.sin(lon),
        (n * (1 - e2) + height) * math.sin(lat),
    ])


def local_up(user: np.ndarray, constants: PhysicalConstants = WGS84) -> np.ndarray:
    """Ellipsoid normal through ``user`` (exact on the surface)."""
    b2 = (constants.a_e * (1 - constants.flattening)) ** 2
    a2 = constants.a_e**2
    n = np.array([user[0] / a2, user[1] / a2, user[2] / b2])
    return n / np.linalg.norm(n)


def elevations(user, sats, constants: PhysicalConstants = WGS84) -> np.ndarray:
    """Elevation angles (deg) of each satellite above the user's horizon."""
    user = np.asarray(user, dtype=float)
    los = np.atleast_2d(np.asarray(sats, dtype=float)) - user
    los /= np.linalg.norm(los, axis=1)[:, None]
    return np.degrees(np.arcsin(np.clip(los @ local_up(user, constants), -1.0, 1.0)))


def visible_satellites(user, sats, mask_deg: float = DEFAULT_MASK_DEG,
                       constants: PhysicalConstants = WGS84) -> np.ndarray:
    if np.linalg.norm(user) <= 6.3e6:
        raise ValueError("user position must be on or above the earth's surface")
    sats = np.atleast_2d(np.asarray(sats, dtype=float))
    if len(sats) == 0:
        return sats.reshape(0, 3)
    return sats[elevations(user, sats, constants) > mask_deg]


def geometry_matrix(user, sats) -> np.ndarray:
    los = np.atleast_2d(np.asarray(sats, dtype=float)) - np.asarray(user, dtype=float)
    los /= np.linalg.norm(los, axis=1)[:, None]
    return np.hstack([los, np.ones((len(los), 1))])


def pdop(user, sats) -> float:
    """sqrt of the position block trace of ``(G^T G)^-1``."""
    sats = np.atleast_2d(np.asarray(sats, dtype=float))
    if len(sats) < 4:
        raise InsufficientSatellites(f"PDOP needs at least 4 satellites, got {len(sats)}")
    g = geometry_matrix(user, sats)
    normal = g.T @ g
    if np.linalg.cond(normal) > MAX_CONDITION:
        raise SingularGeometry("satellite geometry is (near) singular")
    cov = scipy.linalg.cho_solve(scipy.linalg.cho_factor(normal), np.eye(4))
    return math.sqrt(cov[0, 0] + cov[1, 1] + cov[2, 2])


def pdop_series(
    spec: ConstellationSpec,
    user,
    t0: float,
    duration: float,
    step: float = 300.0,
    mask_deg: float = DEFAULT_MASK_DEG,
    constants: PhysicalConstants = WGS84,
) -> list[DopResult]:
    """PDOP every ``step`` seconds over ``[t0, t0 + duration]``.

    The constellation is laid out with ``toe = t0`` and propagated from there.
    Steps where PDOP is undefined keep ``pdop=None`` and the error text.
    """
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    if duration < 0:
        raise ValueError(f"duration must be non-negative, got {duration}")
    ephs = generate_constellation(spec, t0)
    results = []
    for k in range(int(duration // step) + 1):
        t = t0 + k * step
        vis = visible_satellites(user, constellation_positions(ephs, t, constants), mask_deg, constants)
        try:
            results.append(DopResult(t, len(vis), pdop(user, vis)))
        except NavForgeError as exc:
            results.append(DopResult(t, len(vis), None, str(exc)))
    return results


def write_dop_csv(results: Iterable[DopResult], fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(("t", "visible_count", "pdop"))
    for r in results:
        writer.writerow((repr(float(r.t)), r.visible_count, "" if r.pdop is None else repr(r.pdop)))
