"""Parameter plane: the set M0 of c whose critical orbit (f_n(0)) stays bounded.

Requires f(0) = f'(0) = 0.  Then D(0, 1/4) lies inside M0 and M0 lies
inside D(0, 2); both disks give fast paths, shrunk/enlarged by 1e-3 so
the float grid never sits on their boundary.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .core import FibonacciSystem, Polynomial, escape_constants
from .errors import HypothesisViolated, PreconditionViolated
from .tags import Tag

INNER_RADIUS = 0.25 - 1e-3
OUTER_RADIUS = 2.0 + 1e-3
# escape constants are taken at this |c| so one radius serves every iterated pixel
_UNIFORM_C = OUTER_RADIUS + 1e-3


@dataclass(frozen=True)
class InsideByBound:
    pass


@dataclass(frozen=True)
class OutsideByBound:
    pass


@dataclass(frozen=True)
class BoundedAtBudget:
    n: int


@dataclass(frozen=True)
class EscapedAt:
    n: int


LocusVerdict = Union[InsideByBound, OutsideByBound, BoundedAtBudget, EscapedAt]


@dataclass(frozen=True)
class LocusParams:
    M2: float
    R2: float
    inner2: float
    outer2: float


def check_hypothesis(f: Polynomial) -> None:
    if f.coeffs[0] != 0 or f.coeffs[1] != 0:
        raise HypothesisViolated("critical-orbit locus needs f(0) = 0 and f'(0) = 0")


@lru_cache(maxsize=64)
def locus_params(f: Polynomial) -> LocusParams:
    check_hypothesis(f)
    ec = escape_constants(FibonacciSystem(f, complex(_UNIFORM_C)))
    return LocusParams(ec.M * ec.M, ec.R * ec.R, INNER_RADIUS**2, OUTER_RADIUS**2)


def critical_point(c: complex, prm: LocusParams, budget: int) -> tuple:
    """Critical-orbit loop; returns ``(tag, index)``.

    f_0(0) = f_1(0) = 0 whatever f is, so only c enters the orbit.
    """
    a2 = c.real * c.real + c.imag * c.imag
    if a2 <= prm.inner2:
        return Tag.LOCUS_INSIDE_BOUND, 0
    if a2 >= prm.outer2:
        return Tag.LOCUS_OUTSIDE_BOUND, 0
    prev = cur = 0j
    saved_p, saved_c = prev, cur
    power, lam = 1, 0
    n = 0
    while n < budget:
        p2 = prev.real * prev.real + prev.imag * prev.imag
        q2 = cur.real * cur.real + cur.imag * cur.imag
        if p2 > prm.M2 and q2 > prm.M2:
            return Tag.LOCUS_ESCAPED, n
        if p2 > prm.R2:
            return Tag.LOCUS_ESCAPED, n
        prev, cur = cur, cur * prev + c
        n += 1
        if prev == saved_p and cur == saved_c:
            # the float orbit repeats, so the full budget would end the same way
            return Tag.LOCUS_BOUNDED, budget
        lam += 1
        if lam == power:
            saved_p, saved_c = prev, cur
            power *= 2
            lam = 0
    return Tag.LOCUS_BOUNDED, budget


_LOCUS_VERDICTS = {
    Tag.LOCUS_INSIDE_BOUND: lambda n: InsideByBound(),
    Tag.LOCUS_OUTSIDE_BOUND: lambda n: OutsideByBound(),
    Tag.LOCUS_BOUNDED: BoundedAtBudget,
    Tag.LOCUS_ESCAPED: EscapedAt,
}


def critical_orbit_classify(c, f: Polynomial, budget: int = 10_000) -> LocusVerdict:
    if budget < 4:
        raise PreconditionViolated("budget must be >= 4")
    tag, n = critical_point(complex(c), locus_params(f), budget)
    return _LOCUS_VERDICTS[tag](n)


def critical_orbit(c, n: int) -> list:
    """f_0(0), ..., f_n(0) in value space."""
    c = complex(c)
    vals = [0j, 0j]
    while len(vals) <= n:
        vals.append(vals[-1] * vals[-2] + c)
    return vals[: n + 1]


class LocusEvaluator:
    """Tile evaluator for :func:`fibdyn.raster.sample_grid` over the parameter plane."""

    has_green = False
    kind = "locus"

    def __init__(self, f: Polynomial, budget: int = 10_000):
        if budget < 4:
            raise PreconditionViolated("budget must be >= 4")
        self.f = f
        self.budget = budget
        self.params = locus_params(f)

    def evaluate(self, re: np.ndarray, im: np.ndarray, tag: np.ndarray,
                 iters: np.ndarray, green: np.ndarray) -> None:
        from ._backend import kernels

        p = self.params
        kernels.critical_block(re, im, p.M2, p.R2, p.inner2, p.outer2, self.budget, tag, iters)


def locus_grid(region, resolution, f: Polynomial, budget: int = 10_000, *,
               tile_size: int = 64, workers=None):
    """Raster of critical-orbit verdicts over ``region`` (c-plane)."""
    from .raster import sample_grid

    return sample_grid(region, resolution, LocusEvaluator(f, budget),
                       tile_size=tile_size, workers=workers)
