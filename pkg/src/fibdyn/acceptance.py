"""The acceptance suite behind ``fibdyn verify``.

Every criterion draws its samples from ``numpy.random.default_rng(SEED)``, so
runs are reproducible.  ``fast=True`` shrinks sample counts and grid sizes
while keeping every tolerance.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .certificates import fixed_points, small_c_certificates, special_points
from .core import (
    GOLDEN,
    SEED,
    Escaped,
    FibonacciSystem,
    Polynomial,
    ProvenInside,
    classify_orbit,
    escape_constants,
    henon_step,
    nesting_radius,
)
from .locus import locus_grid
from .potential import (
    capacity_sigma,
    degree_tables,
    green_2d,
    green_constants,
    green_diag,
    green_sequence,
)
from .raster import (
    Region,
    hausdorff_distance,
    membership_grid,
    pixel_coords,
    ppm_bytes,
    trace_boundary,
)
from .tags import Tag

Z = Polynomial((0, 1))
Z2 = Polynomial((0, 0, 1))


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


def _disk(rng, n: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, n))
    return r * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, n))


def _annulus(rng, n: int, r0: float, r1: float) -> np.ndarray:
    # moduli in (r0, r1]
    r = r1 - (r1 - r0) * rng.uniform(0.0, 1.0, n)
    return r * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, n))


def c01_c0_oracle(fast: bool):
    n = 10_000 if fast else 100_000
    rng = _rng()
    zs = rng.uniform(-2.0, 2.0, n) + 1j * rng.uniform(-2.0, 2.0, n)
    sys = FibonacciSystem(Z, 0j)
    t0 = time.perf_counter()
    verdicts = [classify_orbit(z, sys, 1000) for z in zs.tolist()]
    elapsed = time.perf_counter() - t0
    keep = np.abs(np.abs(zs) - 1.0) > 1e-3
    bad = 0
    for z, v, k in zip(zs.tolist(), verdicts, keep):
        if not k:
            continue
        expected = ProvenInside if abs(z) <= 1.0 else Escaped
        bad += not isinstance(v, expected)
    ok = bad == 0 and elapsed < 2.0
    return ok, f"{bad} disagreements in {int(keep.sum())} points, {elapsed:.2f}s (< 2s)"


def c02_period3(fast: bool):
    cs = _disk(_rng(), 1000, 2.0)
    worst = max(special_points(c).period3_residual for c in cs.tolist())
    return worst < 1e-12, f"max residual {worst:.3g} (< 1e-12)"


def c03_fixed_points(fast: bool):
    cs = _disk(_rng(), 1000, 2.0)
    worst = max(max(special_points(c).fixed_point_residuals) for c in cs.tolist())
    ok = worst < 1e-10 and all(len(fixed_points(c)) == 2 for c in cs[:10].tolist())
    return ok, f"max residual {worst:.3g} (< 1e-10)"


def c04_green_c0(fast: bool):
    zs = _annulus(_rng(), 1000, 1.0, 10.0)
    sys = FibonacciSystem(Z, 0j)
    worst = 0.0
    for z in zs.tolist():
        est = green_diag(z, sys, 1e-10)
        worst = max(worst, abs(est.value - math.log(abs(z))))
    return worst <= 1e-9, f"max |g - log|z|| = {worst:.3g} (<= 1e-9)"


def c05_functional_equation(fast: bool):
    rng = _rng()
    n = 20 if fast else 100
    worst = 0.0
    for ac in (0.0, 0.1, 0.5):
        c = ac * complex(math.cos(1.0), math.sin(1.0))
        sys = FibonacciSystem(Z, c)
        R = escape_constants(sys).R
        ws = _annulus(rng, n, R, R + 5.0)
        zs = _annulus(rng, n, R, R + 5.0)
        for w, z in zip(ws.tolist(), zs.tolist()):
            g = green_2d(w, z, sys, 1e-9).value
            w1, z1 = henon_step(w, z, c)
            g1 = green_2d(w1, z1, sys, 1e-9).value
            worst = max(worst, abs(g1 - GOLDEN * g))
    return worst <= 1e-6, f"max |G(H(w,z)) - rho G(w,z)| = {worst:.3g} (<= 1e-6)"


def _brute_sigma(lead: float, terms: int) -> float:
    d = [1, 1]
    while len(d) <= terms:
        d.append(d[-1] + d[-2])
    s = sum(Fraction((-1) ** k, d[k] * d[k + 1]) for k in range(terms))
    return math.log(lead) * float(s)


def c06_capacity(fast: bool):
    s1 = capacity_sigma(FibonacciSystem(Z)).sigma
    s2 = capacity_sigma(FibonacciSystem(Z2)).sigma
    f2 = FibonacciSystem(Polynomial((0, 2)))
    cap = capacity_sigma(f2, 40)
    brute = _brute_sigma(2.0, 40)
    z = 1e4 * complex(math.cos(0.3), math.sin(0.3))
    g = green_diag(z, f2, 1e-12).value
    asym = abs((g - math.log(abs(z))) - cap.sigma)
    ok = (s1 == 0.0 and s2 == 0.0 and abs(cap.sigma - brute) <= 1e-15
          and cap.tail_bound <= 1e-15 and asym <= 1e-3)
    return ok, (f"sigma(z)={s1:g} sigma(z^2)={s2:g} sigma(2z)={cap.sigma:.16g} "
                f"brute={brute:.16g} tail={cap.tail_bound:.2g} asymptotic gap={asym:.2g}")


def c07_cauchy_bound(fast: bool):
    sys = FibonacciSystem(Z, -0.5 + 0.5j)
    C = green_constants(sys).C
    rng = _rng()
    zs = rng.uniform(-3.0, 3.0, 1000) + 1j * rng.uniform(-3.0, 3.0, 1000)
    d = degree_tables(1).d
    worst = 0.0
    for z in zs.tolist():
        g = green_sequence(z, sys, 41)
        for n in range(41):
            worst = max(worst, abs(g[n + 1] - g[n]) * d[n + 1] / C)
    return worst <= 1.0, f"max d_(n+1)|g_(n+1) - g_n| / C = {worst:.3g} (<= 1), C = {C:.4g}"


def c08_locus(fast: bool):
    res = 128 if fast else 512
    region = Region(0j, 4.4, 4.4)
    t0 = time.perf_counter()
    grid = locus_grid(region, (res, res), Z2, 10_000, workers=4)
    elapsed = time.perf_counter() - t0
    re, im = pixel_coords(region, (res, res))
    mod = np.hypot(re, im)
    inner = mod <= 0.249
    outer = mod >= 2.01
    bad_in = np.count_nonzero(inner & ~np.isin(grid.tag, [Tag.LOCUS_INSIDE_BOUND, Tag.LOCUS_BOUNDED]))
    bad_out = np.count_nonzero(outer & ~grid.escaped)
    ok = bad_in == 0 and bad_out == 0 and elapsed < 30.0
    return ok, (f"{bad_in}/{int(inner.sum())} inner and {bad_out}/{int(outer.sum())} outer "
                f"violations, {elapsed:.2f}s (< 30s)")


def c09_small_c(fast: bool):
    rng = _rng()
    n = 200 if fast else 1000
    c = 0.05 * complex(math.cos(2.0), math.sin(2.0))
    sys = FibonacciSystem(Z, c)
    M = escape_constants(sys).M
    inner = _disk(rng, n, 0.7)
    outer = _annulus(rng, n, 1.25, 3.0)
    bad = 0
    for z in inner.tolist():
        v = classify_orbit(z, sys)
        cert = small_c_certificates(z, c)
        orbit = sys.orbit(z, 10_000 if not fast else 2_000)
        bad += not (isinstance(v, ProvenInside) and isinstance(cert, ProvenInside)
                    and max(abs(x) for x in orbit) <= 1.0)
    for z in outer.tolist():
        v = classify_orbit(z, sys)
        cert = small_c_certificates(z, c)
        orbit = sys.orbit(z, 51)
        trigger = any(abs(orbit[k]) > M and abs(orbit[k + 1]) > M for k in range(50))
        bad += not (isinstance(v, Escaped) and isinstance(cert, Escaped) and trigger)
    return bad == 0, f"{bad} failures over {2 * n} samples"


def c10_imaginary_axis(fast: bool):
    sys = FibonacciSystem(Z, -2.5 + 0j)
    xs = np.linspace(-3.0, 3.0, 1000)
    bad = 0
    worst = 0
    for x in xs.tolist():
        v = classify_orbit(complex(0.0, x), sys)
        if isinstance(v, Escaped):
            worst = max(worst, v.at_index)
        bad += not (isinstance(v, Escaped) and v.at_index <= 10)
    return bad == 0, f"{bad} failures, latest escape index {worst} (<= 10)"


def c11_nesting(fast: bool):
    sys = FibonacciSystem(Z, -0.5 + 0.5j)
    R = nesting_radius(sys)
    zs = _disk(_rng(), 10_000, R + 1.0)
    prev, cur = zs.copy(), zs.copy()
    violations = 0
    with np.errstate(all="ignore"):
        for _ in range(51):
            violations += int(np.count_nonzero((np.abs(cur) < R) & ~(np.abs(prev) < R)))
            prev, cur = cur, cur * prev + sys.c
    return violations == 0, f"{violations} violations, R = {R:g}"


def c12_hausdorff(fast: bool):
    res = 256 if fast else 1024
    d0 = hausdorff_distance(trace_boundary(0j, res))
    ds = [hausdorff_distance(trace_boundary(complex(a), res)) for a in (0.1, 0.05, 0.01)]
    ok = d0 <= 2 * (4 / res) and ds[0] >= ds[1] >= ds[2]
    return ok, (f"d_H(c=0)={d0:.3g} (<= {2 * 4 / res:.3g}); "
                f"|c|=0.1,0.05,0.01 -> {', '.join(f'{d:.3g}' for d in ds)}")


def c13_figure1(fast: bool):
    res = 256 if fast else 1024
    details = []
    ok = True
    for c in (-0.5 + 0.5j, 0.36 + 0.575j):
        sys = FibonacciSystem(Z, c)
        images = {}
        times = {}
        for workers in (1, 2, 8):
            t0 = time.perf_counter()
            grid = membership_grid(sys, Region(0j, 4.0, 4.0), (res, res), 500,
                                   green_tol=1e-6, workers=workers)
            images[workers] = ppm_bytes(grid)
            times[workers] = time.perf_counter() - t0
        header = f"P6\n{res} {res}\n255\n".encode()
        data = images[1]
        valid = data.startswith(header) and len(data) == len(header) + 3 * res * res
        same = images[1] == images[2] == images[8]
        mixed = grid.inside.any() and grid.escaped.any()
        ok &= valid and same and mixed and times[8] < 10.0
        details.append(f"c={c}: valid={valid} identical={same} interior+exterior={mixed} "
                       f"{times[8]:.2f}s@8")
    return ok, "; ".join(details)


def c14_scaling(fast: bool):
    res = 512 if fast else 2048
    sys = FibonacciSystem(Z, -0.5 + 0.5j)
    region = Region(0j, 4.0, 4.0)
    times = {}
    for workers in (1, 8):
        t0 = time.perf_counter()
        membership_grid(sys, region, (res, res), 1000, workers=workers)
        times[workers] = time.perf_counter() - t0
    speedup = times[1] / times[8]
    return speedup >= 3.0, f"{times[1]:.2f}s@1 vs {times[8]:.2f}s@8, speedup {speedup:.2f}x (>= 3x)"


CRITERIA: list = [
    (1, "c=0 oracle equivalence", c01_c0_oracle),
    (2, "period-3 identity", c02_period3),
    (3, "diagonal fixed points", c03_fixed_points),
    (4, "Green closed form at c=0", c04_green_c0),
    (5, "2-D functional equation", c05_functional_equation),
    (6, "capacity", c06_capacity),
    (7, "Cauchy bound", c07_cauchy_bound),
    (8, "locus sandwich", c08_locus),
    (9, "small-c certificates", c09_small_c),
    (10, "imaginary-axis exclusion", c10_imaginary_axis),
    (11, "nesting", c11_nesting),
    (12, "Hausdorff continuity", c12_hausdorff),
    (13, "Figure 1 reproduction", c13_figure1),
    (14, "parallel scaling", c14_scaling),
]


def run_criterion(number: int, fast: bool = False) -> CriterionResult:
    _, name, fn = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        passed, detail = fn(fast)
    except Exception as exc:  # a crash is a failed criterion, not a crashed suite
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(number, name, bool(passed), detail, time.perf_counter() - t0)


def run_all(fast: bool = False, report: Callable = print) -> list:
    results = []
    for number, _, _ in CRITERIA:
        r = run_criterion(number, fast)
        report(r.line())
        results.append(r)
    return results
