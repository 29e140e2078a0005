"""Compiled vs pure-Python kernels, plus raster worker scaling.

    python3 benchmarks/bench_kernels.py [--n 20000] [--res 512]

Both backends run the same block calls on the same inputs; outputs are
compared bitwise before timings are reported.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from fibdyn import _kernels_py, raster
from fibdyn.core import FibonacciSystem, Polynomial
from fibdyn.raster import MembershipEvaluator, Region, membership_grid

try:
    from fibdyn import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

C = -0.5 + 0.5j


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def _points(n, rng):
    return rng.uniform(-2.0, 2.0, n), rng.uniform(-2.0, 2.0, n)


def _classify(mod, ev, re, im):
    n = len(re)
    tag, iters, green = np.zeros(n, np.uint8), np.zeros(n, np.int32), np.zeros(n)
    saved, raster.kernels = raster.kernels, mod
    try:
        ev.evaluate(re, im, tag, iters, green)
    finally:
        raster.kernels = saved
    return tag, iters, green


def bench_backends(n, repeat):
    rng = np.random.default_rng(0)
    re, im = _points(n, rng)
    sys_ = FibonacciSystem(Polynomial((0, 1)), C)
    rows = []
    for label, tol in (("classify", None), ("classify+green", 1e-6)):
        ev = MembershipEvaluator(sys_, 500, green_tol=tol)
        tp, out_p = _best(lambda: _classify(_kernels_py, ev, re, im), repeat)
        if _kernels_c is None:
            rows.append((label, tp, None, None))
            continue
        tc, out_c = _best(lambda: _classify(_kernels_c, ev, re, im), repeat)
        same = all(a.tobytes() == b.tobytes() for a, b in zip(out_p, out_c))
        rows.append((label, tp, tc, same))
    print(f"backends, {n} points, c = {C}")
    print(f"  {'kernel':<16}{'python s':>10}{'cython s':>10}{'speedup':>9}  identical")
    for label, tp, tc, same in rows:
        if tc is None:
            print(f"  {label:<16}{tp:>10.3f}{'n/a':>10}{'':>9}  compiled extension not built")
        else:
            print(f"  {label:<16}{tp:>10.3f}{tc:>10.3f}{tp / tc:>8.1f}x  {same}")


def bench_workers(res, repeat):
    sys_ = FibonacciSystem(Polynomial((0, 1)), C)
    region = Region.from_resolution(0j, 4.0, (res, res))
    print(f"workers, {res}x{res} membership grid with Green values")
    base = None
    for w in (1, 2, 4, 8):
        t, _ = _best(lambda: membership_grid(sys_, region, (res, res), 500, green_tol=1e-6,
                                             workers=w), repeat)
        base = base or t
        print(f"  {w} workers: {t:.3f}s  ({base / t:.2f}x)")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=20_000, help="points per backend block")
    p.add_argument("--res", type=int, default=512, help="grid size for the worker sweep")
    p.add_argument("--repeat", type=int, default=3)
    a = p.parse_args(argv)
    bench_backends(a.n, a.repeat)
    bench_workers(a.res, a.repeat)


if __name__ == "__main__":
    main()
