"""Exact and small-|c| membership certificates for the diagonal slice.

For c = 0 the map H_0(x, y) = (xy, x) is monomial and the bounded set is
known in closed form; for small |c| a bidisk slightly inside the unit
bidisk stays bounded and the region outside a slightly larger one escapes.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

from .core import (
    GOLDEN,
    EscapeReason,
    Escaped,
    InsideReason,
    MembershipVerdict,
    ProvenInside,
    henon_step,
)
from .errors import DegenerateInput

BETA1 = GOLDEN
BETA2 = (1.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class TorusCoords:
    R: float
    S: float


def rs_coords(x: complex, y: complex) -> TorusCoords:
    """R = |x| / |y|**beta1 and S = |x| / |y|**beta2 (coordinates adapted to the torus |x|=|y|=1)."""
    ay = abs(y)
    if ay == 0:
        raise DegenerateInput("rs_coords needs y != 0")
    ax = abs(x)
    return TorusCoords(ax / ay**BETA1, ax / ay**BETA2)


def k0_membership(x: complex, y: complex) -> bool:
    """Whether (x, y) has a bounded H_0 orbit, i.e. |x|**beta1 * |y| <= 1."""
    try:
        return abs(x) ** BETA1 * abs(y) <= 1.0
    except OverflowError:
        # the compiled kernel sees inf here, which never satisfies the bound
        return False


def small_c_certificates(z: complex, c: complex) -> Optional[MembershipVerdict]:
    """Bidisk certificates for the diagonal point (z, z).

    Inner: |z| <= 1 - delta with |c| < delta - delta**2, taking the best
    delta = min(1 - |z|, 1/2).  Outer: |z| > 1 + delta with |c| < delta**2,
    taking delta = |z| - 1.
    """
    r = abs(z)
    ac = abs(c)
    delta = min(1.0 - r, 0.5)
    if 0.0 < delta < 1.0 and ac < delta - delta * delta:
        return ProvenInside(InsideReason.BIDISK_CERTIFICATE)
    delta = r - 1.0
    if delta > 0.0 and ac < delta * delta:
        return Escaped(0, EscapeReason.OUTER_CERTIFICATE)
    return None


@dataclass(frozen=True)
class SpecialPointsReport:
    c: complex
    period3_residual: float
    fixed_points: tuple
    fixed_point_residuals: tuple

    @property
    def max_residual(self) -> float:
        return max(self.period3_residual, *self.fixed_point_residuals)


def fixed_points(c: complex) -> tuple:
    """The two diagonal fixed points (1 +- sqrt(1 - 4c)) / 2 of H_c, principal root first."""
    s = cmath.sqrt(1 - 4 * complex(c))
    return ((1 + s) / 2, (1 - s) / 2)


def _dist(p: tuple, q: tuple) -> float:
    return math.hypot(abs(p[0] - q[0]), abs(p[1] - q[1]))


def special_points(c: complex) -> SpecialPointsReport:
    """Residuals of the period-3 orbit through (-1, -1) and of the diagonal fixed points."""
    c = complex(c)
    start = (-1 + 0j, -1 + 0j)
    p = start
    for _ in range(3):
        p = henon_step(p[0], p[1], c)
    fps = fixed_points(c)
    res = tuple(_dist(henon_step(z0, z0, c), (z0, z0)) for z0 in fps)
    return SpecialPointsReport(c, _dist(p, start), fps, res)
