"""Quadratic satellite clock model and re-referencing to a new toc.

All simulated channels share one oscillator, so by default a single
:class:`ClockPolynomial` serves every satellite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .errors import NegativeInterval
from .gpstime import SECONDS_PER_WEEK

Mode = Literal["exact", "paper_literal"]


@dataclass(frozen=True)
class ClockPolynomial:
    """``a0 + a1*(t - toc) + a2*(t - toc)**2`` in seconds."""

    a0: float
    a1: float
    a2: float
    toc: float

    def __post_init__(self):
        for name in ("a0", "a1", "a2", "toc"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"clock term {name} is not finite")
        if not 0 <= self.toc < SECONDS_PER_WEEK:
            raise ValueError(f"toc {self.toc} outside [0, 604800)")


@dataclass(frozen=True)
class ClockInit:
    """Oscillator state measured at system start ``t_gps0``; a0 is zero there."""

    a1: float
    a2: float
    t_gps0: float

    def __post_init__(self):
        for name in ("a1", "a2", "t_gps0"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"clock init {name} is not finite")


def clock_offset(poly: ClockPolynomial, t: float) -> float:
    dt = t - poly.toc
    return poly.a0 + poly.a1 * dt + poly.a2 * dt * dt


def rereference(init: ClockInit, toc: float, mode: Mode = "exact") -> ClockPolynomial:
    """Express the clock started at ``init.t_gps0`` as a polynomial about ``toc``.

    ``exact`` re-centres the quadratic so both polynomials agree at every t,
    which requires ``a1' = a1 + 2*a2*dt``.  ``paper_literal`` drops the
    factor 2 in the drift term, as in the original literal formulation.
    """
    dt = toc - init.t_gps0
    if dt < 0:
        raise NegativeInterval(
            f"toc {toc} precedes the clock start epoch {init.t_gps0}"
        )
    a0 = init.a1 * dt + init.a2 * dt * dt
    if mode == "exact":
        a1 = init.a1 + 2.0 * init.a2 * dt
    elif mode == "paper_literal":
        a1 = init.a1 + init.a2 * dt
    else:
        raise ValueError(f"unknown rereference mode {mode!r}")
    return ClockPolynomial(a0=a0, a1=a1, a2=init.a2, toc=toc)
