"""Tiled grid evaluation, PPM/CSV output, boundary tracing and Hausdorff checks."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._backend import kernels
from .core import (
    GOLDEN,
    IDENTITY,
    FibonacciSystem,
    Polynomial,
    classify_params,
    escape_constants,
    general_escape_threshold,
)
from .errors import IoFailure, NoContour, PreconditionViolated
from .palette import PALETTE, STRIDE
from .potential import degree_tables, green_constants
from .tags import ESCAPED_TAGS, INSIDE_TAGS, Tag

ERROR_RGB = (255, 0, 255)
CSV_HEADER = "i,j,re,im,tag,iter,green"
POLYLINE_HEADER = "k,re,im"
_ESCAPED_CODES = np.array(sorted(int(t) for t in ESCAPED_TAGS), dtype=np.uint8)
_INSIDE_CODES = np.array(sorted(int(t) for t in INSIDE_TAGS), dtype=np.uint8)


def default_workers() -> int:
    env = os.environ.get("FIBDYN_THREADS")
    if env:
        n = int(env)
        if n < 1:
            raise PreconditionViolated("FIBDYN_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


@dataclass(frozen=True)
class Region:
    center: complex
    width: float
    height: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not (self.width > 0 and self.height > 0):
            raise PreconditionViolated("region width and height must be positive")

    @classmethod
    def from_resolution(cls, center, width: float, resolution: tuple) -> "Region":
        W, H = resolution
        return cls(center, width, width * H / W)


def parse_resolution(text: str) -> tuple:
    """``"1024x768"`` or ``"1024"`` (square)."""
    parts = text.lower().split("x")
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2:
        raise ValueError(f"bad resolution {text!r}")
    W, H = int(parts[0]), int(parts[1])
    if W < 1 or H < 1:
        raise ValueError(f"bad resolution {text!r}")
    return W, H


def pixel_coords(region: Region, resolution: tuple) -> tuple:
    """(re, im) arrays of shape (H, W); row 0 is the top of the region."""
    W, H = resolution
    i = np.arange(W, dtype=np.float64)
    j = np.arange(H, dtype=np.float64)
    re = region.center.real + ((i + 0.5) / W - 0.5) * region.width
    im = region.center.imag + (0.5 - (j + 0.5) / H) * region.height
    return np.broadcast_to(re, (H, W)), np.broadcast_to(im[:, None], (H, W))


def pixel_point(region: Region, resolution: tuple, i: int, j: int) -> complex:
    W, H = resolution
    return complex(region.center.real + ((i + 0.5) / W - 0.5) * region.width,
                   region.center.imag + (0.5 - (j + 0.5) / H) * region.height)


@dataclass
class RasterGrid:
    """Per-pixel payloads; ``iters`` is the escape index, or -1 for non-escaped pixels."""

    region: Region
    W: int
    H: int
    tag: np.ndarray
    iters: np.ndarray
    green: Optional[np.ndarray] = None
    kind: str = "julia"
    escape_radius: Optional[float] = None
    meta: dict = field(default_factory=dict)

    @property
    def escaped(self) -> np.ndarray:
        return np.isin(self.tag, _ESCAPED_CODES)

    @property
    def inside(self) -> np.ndarray:
        return np.isin(self.tag, _INSIDE_CODES)

    def payload_bytes(self) -> bytes:
        parts = [self.tag.tobytes(), self.iters.tobytes()]
        if self.green is not None:
            parts.append(self.green.tobytes())
        return b"".join(parts)


def _coeff_arrays(f: Polynomial) -> tuple:
    return (np.array([a.real for a in f.coeffs]), np.array([a.imag for a in f.coeffs]))


class MembershipEvaluator:
    """Diagonal-slice membership, optionally with Green values for escaped pixels."""

    kind = "julia"

    def __init__(self, sys: FibonacciSystem, budget: int = 1000, green_tol: Optional[float] = None):
        if budget < 2:
            raise PreconditionViolated("budget must be >= 2")
        sys.require_classic("membership grids")
        self.sys = sys
        self.budget = budget
        self.prm = classify_params(sys)
        self.cre, self.cim = _coeff_arrays(sys.f)
        self.has_green = green_tol is not None
        self.escape_radius = escape_constants(sys).R
        if self.has_green:
            if not green_tol > 0:
                raise PreconditionViolated("green_tol must be positive")
            self.tol = green_tol
            self.C = green_constants(sys).C
            tables = degree_tables(sys.f.degree)
            self.d = np.array(tables.d)
            self.tail = np.array(tables.tail)

    def evaluate(self, re, im, tag, iters, green) -> None:
        p, c = self.prm, self.sys.c
        if self.has_green:
            kernels.green_block(re, im, c.real, c.imag, self.cre, self.cim, p.M2, p.R2,
                                p.outer2, p.inner2, p.c0_oracle, self.budget, self.C,
                                self.tol, self.d, self.tail, tag, iters, green)
        else:
            kernels.classify_block(re, im, c.real, c.imag, self.cre, self.cim, p.M2, p.R2,
                                   p.outer2, p.inner2, p.c0_oracle, self.budget, tag, iters)


class GeneralEscapeEvaluator:
    """Escape-time grids for exponents (a, b) other than (1, 1)."""

    kind = "julia"
    has_green = False

    def __init__(self, sys: FibonacciSystem, budget: int = 1000):
        if budget < 2:
            raise PreconditionViolated("budget must be >= 2")
        self.sys = sys
        self.budget = budget
        self.a, self.b = sys.exponents
        M = general_escape_threshold(sys.c, self.a, self.b)
        self.M2 = M * M
        self.escape_radius = M
        self.cre, self.cim = _coeff_arrays(sys.f)

    def evaluate(self, re, im, tag, iters, green) -> None:
        c = self.sys.c
        kernels.general_block(re, im, c.real, c.imag, self.cre, self.cim, self.a, self.b,
                              self.M2, self.budget, tag, iters)


class PointEvaluator:
    """Wraps ``fn(z) -> (tag, index, green)``; any exception becomes an error pixel."""

    kind = "custom"

    def __init__(self, fn: Callable, has_green: bool = False):
        self.fn = fn
        self.has_green = has_green

    def evaluate(self, re, im, tag, iters, green) -> None:
        for k in range(len(re)):
            try:
                t, n, g = self.fn(complex(re[k], im[k]))
            except Exception:
                t, n, g = Tag.ERROR, -1, math.nan
            tag[k], iters[k], green[k] = t, n, g


def membership_evaluator(sys: FibonacciSystem, budget: int = 1000, green_tol: Optional[float] = None):
    if sys.is_classic:
        return MembershipEvaluator(sys, budget, green_tol)
    return GeneralEscapeEvaluator(sys, budget)


def _tiles(W: int, H: int, size: int) -> list:
    return [(j0, min(j0 + size, H), i0, min(i0 + size, W))
            for j0 in range(0, H, size) for i0 in range(0, W, size)]


def _run_tile(evaluator, re, im):
    n = re.size
    tag = np.zeros(n, np.uint8)
    iters = np.zeros(n, np.int32)
    green = np.zeros(n, np.float64)
    try:
        evaluator.evaluate(re, im, tag, iters, green)
    except Exception:
        # isolate the failing pixels instead of losing the tile
        for k in range(n):
            try:
                evaluator.evaluate(re[k:k + 1], im[k:k + 1], tag[k:k + 1], iters[k:k + 1], green[k:k + 1])
            except Exception:
                tag[k], iters[k], green[k] = Tag.ERROR, -1, math.nan
    iters[~np.isin(tag, _ESCAPED_CODES)] = -1
    return tag, iters, green


def sample_grid(region: Region, resolution: tuple, evaluator, tile_size: int = 64,
                workers: Optional[int] = None) -> RasterGrid:
    """Evaluate every pixel, tile by tile, on a thread pool.

    Each tile writes to its own slice of preallocated arrays, so the result
    does not depend on the worker count or on scheduling.
    """
    W, H = resolution
    if W < 1 or H < 1 or tile_size < 1:
        raise PreconditionViolated("resolution and tile size must be positive")
    workers = default_workers() if workers is None else workers
    re_all, im_all = pixel_coords(region, resolution)
    tag = np.zeros((H, W), np.uint8)
    iters = np.zeros((H, W), np.int32)
    green = np.zeros((H, W), np.float64) if evaluator.has_green else None

    def work(tile):
        j0, j1, i0, i1 = tile
        re = np.ascontiguousarray(re_all[j0:j1, i0:i1]).ravel()
        im = np.ascontiguousarray(im_all[j0:j1, i0:i1]).ravel()
        t, n, g = _run_tile(evaluator, re, im)
        shape = (j1 - j0, i1 - i0)
        tag[j0:j1, i0:i1] = t.reshape(shape)
        iters[j0:j1, i0:i1] = n.reshape(shape)
        if green is not None:
            green[j0:j1, i0:i1] = g.reshape(shape)

    tiles = _tiles(W, H, tile_size)
    if workers <= 1:
        for tile in tiles:
            work(tile)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, tiles))
    return RasterGrid(region, W, H, tag, iters, green, kind=getattr(evaluator, "kind", "custom"),
                      escape_radius=getattr(evaluator, "escape_radius", None))


def membership_grid(sys: FibonacciSystem, region: Region, resolution: tuple, budget: int = 1000,
                    *, green_tol: Optional[float] = None, tile_size: int = 64,
                    workers: Optional[int] = None) -> RasterGrid:
    return sample_grid(region, resolution, membership_evaluator(sys, budget, green_tol),
                       tile_size=tile_size, workers=workers)


# ---- colouring and files ---------------------------------------------------

def smoothed_count(grid: RasterGrid) -> np.ndarray:
    """Continuous escape count: Green-based where available, else the raw index."""
    s = grid.iters.astype(np.float64)
    if grid.green is not None and grid.escape_radius is not None and grid.escape_radius > 1:
        g = grid.green
        ok = grid.escaped & (g > 0) & np.isfinite(g)
        with np.errstate(divide="ignore", invalid="ignore"):
            sg = np.log(math.log(grid.escape_radius) / g) / math.log(GOLDEN)
        s = np.where(ok, np.maximum(sg, 0.0), s)
    return s


def colorize(grid: RasterGrid, scheme: str = "default") -> np.ndarray:
    """(H, W, 3) uint8 image."""
    if scheme not in ("default", "gray"):
        raise PreconditionViolated(f"unknown colour scheme {scheme!r}")
    img = np.zeros((grid.H, grid.W, 3), np.uint8)
    esc = grid.escaped
    s = np.maximum(smoothed_count(grid), 0.0)
    idx = (np.floor(s * STRIDE).astype(np.int64) % 256)[esc]
    if scheme == "gray":
        img[esc] = np.maximum(idx, 1).astype(np.uint8)[:, None]
    else:
        img[esc] = PALETTE[idx]
    img[grid.tag == Tag.ERROR] = ERROR_RGB
    return img


def ppm_bytes(grid: RasterGrid, scheme: str = "default") -> bytes:
    header = f"P6\n{grid.W} {grid.H}\n255\n".encode("ascii")
    return header + colorize(grid, scheme).tobytes()


@dataclass
class CsvTable:
    """Rows of the pixel CSV; ``green`` entries are None when the grid has no Green values."""

    i: np.ndarray
    j: np.ndarray
    re: np.ndarray
    im: np.ndarray
    tag: list
    iters: np.ndarray
    green: list


def grid_table(grid: RasterGrid) -> CsvTable:
    re, im = pixel_coords(grid.region, (grid.W, grid.H))
    jj, ii = np.indices((grid.H, grid.W))
    by_code = {int(t): t.label for t in Tag}
    tags = [by_code[int(t)] for t in grid.tag.ravel()]
    green = [None] * len(tags) if grid.green is None else grid.green.ravel().tolist()
    return CsvTable(ii.ravel(), jj.ravel(), re.ravel(), im.ravel(), tags, grid.iters.ravel(), green)


def _g17(x: float) -> str:
    return "%.17g" % x


def table_text(table: CsvTable) -> str:
    lines = [CSV_HEADER]
    for k in range(len(table.tag)):
        g = table.green[k]
        lines.append(f"{table.i[k]},{table.j[k]},{_g17(table.re[k])},{_g17(table.im[k])},"
                     f"{table.tag[k]},{table.iters[k]},{'' if g is None else _g17(g)}")
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> CsvTable:
    lines = text.split("\n")
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("missing pixel CSV header")
    rows = [ln.split(",") for ln in lines[1:] if ln]
    for r in rows:
        if len(r) != 7:
            raise ValueError(f"bad pixel CSV row: {','.join(r)!r}")
        Tag.from_label(r[4])
    return CsvTable(
        np.array([int(r[0]) for r in rows], dtype=np.int64),
        np.array([int(r[1]) for r in rows], dtype=np.int64),
        np.array([float(r[2]) for r in rows]),
        np.array([float(r[3]) for r in rows]),
        [r[4] for r in rows],
        np.array([int(r[5]) for r in rows], dtype=np.int64),
        [None if r[6] == "" else float(r[6]) for r in rows],
    )


def _write(path, data: bytes) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise IoFailure(exc.errno, exc.strerror, str(path)) from exc


def _read(path) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise IoFailure(exc.errno, exc.strerror, str(path)) from exc


def write_table(table: CsvTable, path) -> None:
    _write(path, table_text(table).encode("utf-8"))


def read_table(path) -> CsvTable:
    return parse_table(_read(path).decode("utf-8"))


def colorize_and_write(grid: RasterGrid, path, fmt: str = "ppm", scheme: str = "default") -> None:
    if fmt == "ppm":
        _write(path, ppm_bytes(grid, scheme))
    elif fmt == "csv":
        write_table(grid_table(grid), path)
    else:
        raise PreconditionViolated(f"format must be ppm or csv, got {fmt!r}")


def read_ppm(path) -> tuple:
    """Returns (W, H, pixels (H, W, 3))."""
    data = _read(path)
    parts = data.split(b"\n", 3)
    if len(parts) < 4 or parts[0] != b"P6" or parts[2] != b"255":
        raise ValueError("not a binary P6 file with maxval 255")
    W, H = (int(v) for v in parts[1].split())
    pix = np.frombuffer(parts[3], np.uint8)
    if pix.size != W * H * 3:
        raise ValueError("P6 pixel data has the wrong length")
    return W, H, pix.reshape(H, W, 3)


# ---- boundary tracing ------------------------------------------------------

# corners of a cell in order TL, TR, BR, BL; edges top, right, bottom, left
_CORNER_EDGES = ((3, 0), (0, 1), (1, 2), (2, 3))


def _edge_key(i: int, j: int, e: int) -> tuple:
    # horizontal edges ('h', i, j) join samples (i, j)-(i+1, j); vertical ('v', i, j) join (i, j)-(i, j+1)
    if e == 0:
        return ("h", i, j)
    if e == 1:
        return ("v", i + 1, j)
    if e == 2:
        return ("h", i, j + 1)
    return ("v", i, j)


def trace_contours(inside: np.ndarray, region: Region) -> list:
    """Closed marching-squares contours of a boolean (H, W) field.

    Vertices sit at edge midpoints.  Saddle cells keep their two inside
    corners connected.  The field is padded with outside samples, so every
    contour closes.  Returns complex vertex arrays (first vertex not repeated).
    """
    H, W = inside.shape
    pad = np.zeros((H + 2, W + 2), bool)
    pad[1:-1, 1:-1] = inside
    tl, tr = pad[:-1, :-1], pad[:-1, 1:]
    br, bl = pad[1:, 1:], pad[1:, :-1]
    mixed = ~((tl == tr) & (tr == br) & (br == bl))
    adj: dict = {}

    def link(a, b):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)

    for jc, ic in zip(*np.nonzero(mixed)):
        corners = (tl[jc, ic], tr[jc, ic], br[jc, ic], bl[jc, ic])
        # cell (ic, jc) of the padded grid has top-left sample (ic - 1, jc - 1) of the original
        i, j = int(ic) - 1, int(jc) - 1
        crossing = [e for e in range(4) if corners[e] != corners[(e + 1) % 4]]
        if len(crossing) == 2:
            link(_edge_key(i, j, crossing[0]), _edge_key(i, j, crossing[1]))
        else:
            for k in range(4):
                if not corners[k]:
                    e1, e2 = _CORNER_EDGES[k]
                    link(_edge_key(i, j, e1), _edge_key(i, j, e2))

    def point(key):
        kind, i, j = key
        x = i + 0.5 if kind == "h" else float(i)
        y = float(j) if kind == "h" else j + 0.5
        return complex(region.center.real + ((x + 0.5) / W - 0.5) * region.width,
                       region.center.imag + (0.5 - (y + 0.5) / H) * region.height)

    contours = []
    seen = set()
    for start in sorted(adj):
        if start in seen:
            continue
        loop = [start]
        seen.add(start)
        prev, cur = start, adj[start][0]
        while cur != start:
            loop.append(cur)
            seen.add(cur)
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        contours.append(np.array([point(k) for k in loop]))
    return contours


def polyline_length(poly: np.ndarray) -> float:
    return float(np.abs(np.diff(np.append(poly, poly[:1]))).sum())


def polygon_contains(poly: np.ndarray, z: complex) -> bool:
    """Even-odd rule for the closed polygon through ``poly``."""
    x, y = np.real(poly), np.imag(poly)
    x2, y2 = np.roll(x, -1), np.roll(y, -1)
    cond = (y > z.imag) != (y2 > z.imag)
    with np.errstate(divide="ignore", invalid="ignore"):
        xs = x + (z.imag - y) * (x2 - x) / (y2 - y)
    return bool(np.count_nonzero(cond & (z.real < xs)) % 2)


def trace_boundary(c, resolution: int = 1024, budget: int = 1000, *, f: Polynomial = IDENTITY,
                   workers: Optional[int] = None) -> np.ndarray:
    """Longest closed contour of the inside indicator over center 0, width 4."""
    if resolution < 64:
        raise PreconditionViolated("resolution must be >= 64")
    region = Region(0j, 4.0, 4.0)
    grid = membership_grid(FibonacciSystem(f, complex(c)), region, (resolution, resolution),
                           budget, workers=workers)
    inside = grid.inside
    if not inside.any():
        raise NoContour(f"no inside pixel for c = {complex(c)}")
    return max(trace_contours(inside, region), key=polyline_length)


def hausdorff_distance(poly: np.ndarray, samples: int = 4096) -> float:
    """Symmetric Hausdorff distance between a closed polyline's vertices and the unit circle."""
    poly = np.asarray(poly, dtype=np.complex128)
    if poly.size == 0:
        raise PreconditionViolated("polyline is empty")
    to_circle = float(np.max(np.abs(np.abs(poly) - 1.0)))
    a = poly
    b = np.roll(poly, -1)
    ab = b - a
    L2 = np.abs(ab) ** 2
    theta = 2.0 * np.pi * np.arange(samples) / samples
    pts = np.exp(1j * theta)
    worst = 0.0
    for k in range(0, samples, 256):
        p = pts[k:k + 256, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(L2 > 0, ((p - a) * np.conj(ab)).real / L2, 0.0)
        t = np.clip(t, 0.0, 1.0)
        dist = np.abs(p - (a + t * ab)).min(axis=1)
        worst = max(worst, float(dist.max()))
    return max(to_circle, worst)


def write_polyline(poly: np.ndarray, path) -> None:
    lines = [POLYLINE_HEADER] + [f"{k},{_g17(z.real)},{_g17(z.imag)}" for k, z in enumerate(poly)]
    _write(path, ("\n".join(lines) + "\n").encode("utf-8"))


def read_polyline(path) -> np.ndarray:
    lines = _read(path).decode("utf-8").split("\n")
    if lines[0] != POLYLINE_HEADER:
        raise ValueError("missing polyline CSV header")
    rows = [ln.split(",") for ln in lines[1:] if ln]
    return np.array([complex(float(r[1]), float(r[2])) for r in rows])
