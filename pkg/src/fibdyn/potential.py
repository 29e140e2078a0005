"""Green's function, logarithmic capacity and the Böttcher modulus.

All Green evaluations carry a rigorous truncation bound.  With
L_n = log+|f_n| the normalised terms g_n = L_n / d_n satisfy
|g_{n+1} - g_n| <= C / d_{n+1}, so stopping at n leaves at most
C * sum_{k>n} 1/d_k; once the orbit leaves double range the log-modulus
enclosure width divided by d_n is added on top.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .core import (
    GOLDEN,
    SWITCH_THRESHOLD,
    Escaped,
    FibonacciSystem,
    LogOrbit,
    ProvenInside,
    _log_step,
    _mod,
    classify_orbit,
    degree_sequence,
    escape_constants,
    nesting_radius,
)
from .errors import NumericOverflow, OutsideDomain, PreconditionViolated, TolUnreachable

#: largest n such that max over k of d_{n-k-1} rho^k / d_n is scanned exactly
_D_SCAN = 64
_CIRCLE_SAMPLES = 360


@dataclass(frozen=True)
class GreenConstants:
    A: float
    B: float
    C: float
    D: float
    R: float
    rho: float


@dataclass(frozen=True)
class GreenEstimate:
    value: float
    error_bound: float
    terms_used: int
    escaped: bool


@dataclass(frozen=True)
class CapacityResult:
    sigma: float
    tail_bound: float
    terms_used: int

    @property
    def capacity(self) -> float:
        return math.exp(self.sigma)


@dataclass(frozen=True)
class DegreeTables:
    """Float degrees d_n and suffix sums sum_{k>n} 1/d_k, until d_n leaves double range."""

    d: tuple
    tail: tuple


@lru_cache(maxsize=16)
def degree_tables(d1: int) -> DegreeTables:
    seq = degree_sequence(d1)
    d = []
    n = 0
    while True:
        v = float(seq[n])
        if v > 1e300:
            break
        d.append(v)
        n += 1
    tail = [0.0] * len(d)
    acc = 0.0
    for k in range(len(d) - 1, 0, -1):
        acc += 1.0 / d[k]
        tail[k - 1] = acc * (1.0 + 1e-12)
    return DegreeTables(tuple(d), tuple(tail))


@lru_cache(maxsize=16)
def degree_ratio_bound(d1: int) -> float:
    """D with d_{n-k-1} / d_n <= D / rho**k, scanned with exact integers."""
    seq = degree_sequence(d1)
    best = 0.0
    for n in range(2, _D_SCAN + 1):
        dn = seq[n]
        for k in range(0, n - 1):
            best = max(best, seq[n - k - 1] * GOLDEN**k / dn)
    return best * (1.0 + 1e-9)


def _telescoping_factor(D: float) -> float:
    # leading defect has weight 1, the k-th earlier one at most D / rho**k
    return 1.0 + D * GOLDEN / (GOLDEN - 1.0)


@lru_cache(maxsize=256)
def green_constants(sys: FibonacciSystem) -> GreenConstants:
    sys.require_classic("green_constants")
    R = nesting_radius(sys)
    ac = abs(sys.c)
    A = max(
        math.log1p(ac / (R * R)),
        -math.log1p(-ac / (R * R)),
        5.0 * math.log(R),
        2.0 * math.log(R) + math.log(R * R + ac),
        math.log1p(ac / (R - ac)),
    )
    D = degree_ratio_bound(sys.f.degree)
    B = _initial_defect_bound(sys, R)
    C = A * _telescoping_factor(D) + B
    return GreenConstants(A=A, B=B, C=C, D=D, R=R, rho=GOLDEN)


def _initial_defect_bound(sys: FibonacciSystem, R: float) -> float:
    """Bound on |I(z)| = |log+|f(z)| - d_1 log+|z)||| over the plane."""
    f = sys.f
    k = f.degree
    mods = [abs(a) for a in f.coeffs]
    lead = mods[-1]
    lower = sum(mods[:-1])
    outer = max(
        abs(math.log(max(mods) * (1.0 + k / R))),
        abs(math.log(lead + lower / R)),
        abs(math.log(lead - lower / R)),
    )
    theta = np.linspace(0.0, 2.0 * np.pi, _CIRCLE_SAMPLES, endpoint=False)
    zs = R * np.exp(1j * theta)
    fz = np.abs(np.polyval(np.array(f.coeffs[::-1]), zs))
    sampled = np.max(np.abs(np.log(np.maximum(fz, 1.0)) - k * math.log(R)))
    closed = max(math.log(max(1.0, sum(m * R**i for i, m in enumerate(mods)))), k * math.log(R))
    inner = max(2.0 * float(sampled), closed)
    return outer + inner


def _run(prev: complex, cur: complex, c: complex, C: float, tol: float,
         tables: DegreeTables, min_n: int) -> tuple:
    """Iterate from (f_0, f_1) until the truncation bound drops below tol."""
    d, tail = tables.d, tables.tail
    ac = abs(c)
    log_mode = False
    lp = lq = (0.0, 0.0)
    n = 0
    while True:
        if log_mode:
            L = 0.5 * (lp[0] + lp[1])
            width = lp[1] - lp[0]
        else:
            m = _mod(prev)
            L = math.log(m) if m > 1.0 else 0.0
            width = 0.0
        err = C * tail[n] + width / d[n]
        if n >= min_n and L > 0.0 and err < tol:
            return L / d[n], err, n
        if n + 2 >= len(d):
            raise TolUnreachable(f"tolerance {tol:g} not reached within {n} terms")
        if not log_mode and _mod(prev) > SWITCH_THRESHOLD and _mod(cur) > SWITCH_THRESHOLD:
            log_mode = True
            lp, lq = LogOrbit.enclose(prev), LogOrbit.enclose(cur)
        if log_mode:
            lp, lq = lq, _log_step(lp[0], lp[1], lq[0], lq[1], ac)
        else:
            prev, cur = cur, cur * prev + c
            if not math.isfinite(_mod(cur)):
                raise NumericOverflow("value-space orbit overflowed before the switch")
        n += 1


def green_diag(z, sys: FibonacciSystem, tol: float, budget: int = 1000) -> GreenEstimate:
    """Green's function g_c(z) with a rigorous error bound.

    Points certified inside give exactly 0.  Points undecided at ``budget``
    give value 0, ``escaped=False`` and ``error_bound=tol``.
    """
    if not tol > 0:
        raise PreconditionViolated("tol must be positive")
    sys.require_classic("green_diag")
    verdict = classify_orbit(z, sys, budget)
    if isinstance(verdict, ProvenInside):
        return GreenEstimate(0.0, 0.0, 0, False)
    if not isinstance(verdict, Escaped):
        return GreenEstimate(0.0, tol, budget, False)
    z = complex(z)
    gc = green_constants(sys)
    g, err, n = _run(z, sys.f(z), sys.c, gc.C, tol, degree_tables(sys.f.degree),
                     verdict.at_index + 1)
    return GreenEstimate(g, err, n, True)


def green_sequence(z, sys: FibonacciSystem, n_max: int) -> list:
    """g_0(z), ..., g_{n_max}(z), continuing in log space past the switch threshold."""
    sys.require_classic("green_sequence")
    z = complex(z)
    d = degree_tables(sys.f.degree).d
    prev, cur = z, sys.f(z)
    ac = abs(sys.c)
    out = []
    log_mode = False
    lp = lq = (0.0, 0.0)
    for n in range(n_max + 1):
        if log_mode:
            L = 0.5 * (lp[0] + lp[1])
        else:
            m = _mod(prev)
            L = math.log(m) if m > 1.0 else 0.0
        out.append(L / d[n])
        if not log_mode and _mod(prev) > SWITCH_THRESHOLD and _mod(cur) > SWITCH_THRESHOLD:
            log_mode = True
            lp, lq = LogOrbit.enclose(prev), LogOrbit.enclose(cur)
        if log_mode:
            lp, lq = lq, _log_step(lp[0], lp[1], lq[0], lq[1], ac)
        else:
            prev, cur = cur, cur * prev + sys.c
    return out


def _check_outer_domain(w: complex, z: complex, sys: FibonacciSystem) -> float:
    R = escape_constants(sys).R
    if not (abs(w) > R and abs(z) > R):
        raise OutsideDomain(f"need |w| > R and |z| > R with R = {R:.12g}")
    return R


def green_2d(w, z, sys: FibonacciSystem, tol: float) -> GreenEstimate:
    """G(w, z) = lim log|h_n(w, z)| / d_n for |w|, |z| > R, where H_c^n(w, z) = (h_{n+1}, h_n)."""
    if not tol > 0:
        raise PreconditionViolated("tol must be positive")
    sys.require_classic("green_2d")
    w, z = complex(w), complex(z)
    R = _check_outer_domain(w, z, sys)
    ac = abs(sys.c)
    # every |h_n| >= R here, so only the large-modulus defect occurs
    A = -math.log1p(-ac / (R * R))
    D = degree_ratio_bound(sys.f.degree)
    C = A * _telescoping_factor(D) + abs(math.log(abs(w)) - sys.f.degree * math.log(abs(z)))
    g, err, n = _run(z, w, sys.c, C, tol, degree_tables(sys.f.degree), 0)
    return GreenEstimate(g, err, n, True)


def capacity_sigma(sys: FibonacciSystem, n_terms: int = 40) -> CapacityResult:
    """sigma = log|a_lead| * sum_{n<N} (-1)**n / (d_n d_{n+1}); the capacity is exp(sigma)."""
    if n_terms < 2:
        raise PreconditionViolated("n_terms must be >= 2")
    sys.require_classic("capacity_sigma")
    seq = degree_sequence(sys.f.degree)
    exact = Fraction(0)
    approx = []
    for n in range(n_terms):
        a, b = seq[n], seq[n + 1]
        if isinstance(b, int):
            exact += Fraction((-1) ** n, a * b)
        else:
            approx.append((-1) ** n / (float(a) * float(b)))
    s = math.fsum([float(exact)] + approx)
    log_lead = math.log(abs(sys.f.leading))
    tail = abs(log_lead) / (float(seq[n_terms]) * float(seq[n_terms + 1]))
    return CapacityResult(log_lead * s, tail, n_terms)


def bottcher_log_modulus(w, z, sys: FibonacciSystem, n_terms: int = 60) -> float:
    """log|phi_N(w, z)| = log|h_N(w, z)| / rho**N (the telescoped product)."""
    sys.require_classic("bottcher_log_modulus")
    w, z = complex(w), complex(z)
    _check_outer_domain(w, z, sys)
    ac = abs(sys.c)
    prev, cur = z, w
    log_mode = False
    for _ in range(n_terms):
        if not log_mode and _mod(prev) > SWITCH_THRESHOLD and _mod(cur) > SWITCH_THRESHOLD:
            log_mode = True
            lp, lq = LogOrbit.enclose(prev), LogOrbit.enclose(cur)
        if log_mode:
            lp, lq = lq, _log_step(lp[0], lp[1], lq[0], lq[1], ac)
        else:
            prev, cur = cur, cur * prev + sys.c
    L = 0.5 * (lp[0] + lp[1]) if log_mode else math.log(abs(prev))
    return L / GOLDEN**n_terms
