import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fibdyn.core import IDENTITY, FibonacciSystem, Polynomial
from fibdyn.errors import IoFailure, NoContour, PreconditionViolated
from fibdyn.palette import PALETTE
from fibdyn.raster import (
    CSV_HEADER,
    MembershipEvaluator,
    PointEvaluator,
    RasterGrid,
    Region,
    colorize,
    colorize_and_write,
    grid_table,
    hausdorff_distance,
    membership_grid,
    parse_resolution,
    parse_table,
    pixel_coords,
    pixel_point,
    polygon_contains,
    ppm_bytes,
    read_polyline,
    read_ppm,
    read_table,
    sample_grid,
    table_text,
    trace_boundary,
    trace_contours,
    write_polyline,
)
from fibdyn.tags import Tag

SQUARE = Region(0j, 4.0, 4.0)


def test_region_from_resolution():
    r = Region.from_resolution(1 + 1j, 3.0, (300, 200))
    assert r.height == 2.0
    with pytest.raises(PreconditionViolated):
        Region(0, 0, 1)
    assert parse_resolution("1024x768") == (1024, 768) and parse_resolution("64") == (64, 64)
    with pytest.raises(ValueError):
        parse_resolution("0x5")


@settings(max_examples=30)
@given(st.integers(1, 40), st.integers(1, 40), st.floats(-2, 2), st.floats(-2, 2), st.floats(0.1, 5))
def test_pixel_formula_bit_exact(W, H, cx, cy, width):
    region = Region(complex(cx, cy), width, width * H / W)
    re, im = pixel_coords(region, (W, H))
    for j in range(0, H, 7):
        for i in range(0, W, 5):
            z = complex(cx + ((i + 0.5) / W - 0.5) * width, cy + (0.5 - (j + 0.5) / H) * region.height)
            assert (re[j, i], im[j, i]) == (z.real, z.imag) == (pixel_point(region, (W, H), i, j).real,
                                                                pixel_point(region, (W, H), i, j).imag)
    assert np.all(np.diff(im[:, 0]) <= 0)


def test_single_pixel_c0():
    g = membership_grid(FibonacciSystem(IDENTITY, 0), Region(0j, 1.0, 1.0), (1, 1))
    assert g.tag[0, 0] == Tag.INSIDE_EXACT_C0 and g.iters[0, 0] == -1


def test_c0_inside_set_is_unit_disk():
    g = membership_grid(FibonacciSystem(IDENTITY, 0), SQUARE, (1024, 1024), 1000)
    re, im = pixel_coords(SQUARE, (1024, 1024))
    assert np.array_equal(g.inside, re * re + im * im <= 1.0)


@pytest.mark.parametrize("green_tol", [None, 1e-8])
def test_determinism_across_workers(green_tol):
    sys_ = FibonacciSystem(IDENTITY, -0.5 + 0.5j)
    ref = membership_grid(sys_, SQUARE, (200, 150), 300, green_tol=green_tol, workers=1).payload_bytes()
    for workers in (2, 4, 8):
        for tile in (64, 17):
            g = membership_grid(sys_, SQUARE, (200, 150), 300, green_tol=green_tol,
                                workers=workers, tile_size=tile)
            assert g.payload_bytes() == ref


def test_grid_matches_scalar_classifier():
    from fibdyn.core import Escaped, classify_orbit

    sys_ = FibonacciSystem(Polynomial((0, 0, 1)), 0.3 + 0.1j)
    region = Region(0.1j, 3.0, 3.0)
    g = membership_grid(sys_, region, (40, 40), 200)
    for j in range(0, 40, 3):
        for i in range(0, 40, 3):
            v = classify_orbit(pixel_point(region, (40, 40), i, j), sys_, 200)
            assert g.escaped[j, i] == isinstance(v, Escaped)
            if isinstance(v, Escaped):
                assert g.iters[j, i] == v.at_index


def test_level_set_nesting():
    g = membership_grid(FibonacciSystem(IDENTITY, 0.36 + 0.575j), SQUARE, (128, 128), 500)
    for n in range(0, 30):
        assert not np.any((g.iters >= n + 1) & ~(g.iters >= n))
    assert np.all(g.iters[~g.escaped] == -1)


def test_errors_become_pixels():
    def fn(z):
        if z.real > 0:
            raise ValueError("boom")
        return Tag.ESCAPED_CONSECUTIVE, 3, 1.0

    g = sample_grid(SQUARE, (8, 4), PointEvaluator(fn, has_green=True), tile_size=3, workers=2)
    assert np.all(g.tag[:, 4:] == Tag.ERROR) and np.all(np.isnan(g.green[:, 4:]))
    assert np.all(g.tag[:, :4] == Tag.ESCAPED_CONSECUTIVE) and np.all(g.iters[:, :4] == 3)


def test_tile_failure_isolated():
    class Flaky:
        has_green = False

        def evaluate(self, re, im, tag, iters, green):
            if np.any(re > 1.5):
                raise RuntimeError("bad pixel")
            tag[:] = Tag.ESCAPED_SINGLE
            iters[:] = 1

    g = sample_grid(SQUARE, (8, 8), Flaky(), tile_size=8, workers=1)
    re, _ = pixel_coords(SQUARE, (8, 8))
    assert np.all(g.tag[re > 1.5] == Tag.ERROR) and np.all(g.tag[re < 1.5] == Tag.ESCAPED_SINGLE)


def test_ppm_two_pixels(tmp_path):
    grid = RasterGrid(SQUARE, 2, 1, np.array([[Tag.INSIDE_BIDISK, Tag.ESCAPED_CONSECUTIVE]], np.uint8),
                      np.array([[-1, 3]], np.int32))
    path = tmp_path / "two.ppm"
    colorize_and_write(grid, path, "ppm")
    data = path.read_bytes()
    header = b"P6\n2 1\n255\n"
    assert data.startswith(header) and len(header) == 11 and len(data) == 11 + 6
    assert data[11:14] == b"\x00\x00\x00"
    assert data[14:17] == bytes(PALETTE[3 * 8 % 256])
    W, H, pix = read_ppm(path)
    assert (W, H) == (2, 1) and pix[0, 1].tolist() == PALETTE[24].tolist()


def test_palette_never_black():
    assert PALETTE.shape == (256, 3) and PALETTE.dtype == np.uint8
    assert np.all(PALETTE.max(axis=1) > 0)


def test_green_smoothing_and_errors():
    grid = RasterGrid(SQUARE, 3, 1, np.array([[Tag.ESCAPED_SINGLE, Tag.ERROR, Tag.UNDECIDED]], np.uint8),
                      np.array([[2, -1, -1]], np.int32), green=np.array([[0.1, np.nan, 0.0]]),
                      escape_radius=4.0)
    img = colorize(grid)
    s = math.log(math.log(4.0) / 0.1) / math.log((1 + math.sqrt(5)) / 2)
    assert img[0, 0].tolist() == PALETTE[math.floor(8 * s) % 256].tolist()
    assert img[0, 1].tolist() == [255, 0, 255] and img[0, 2].tolist() == [0, 0, 0]
    assert colorize(grid, "gray")[0, 0].max() > 0


def test_csv_roundtrip(tmp_path):
    sys_ = FibonacciSystem(IDENTITY, -0.5 + 0.5j)
    for tol in (None, 1e-8):
        g = membership_grid(sys_, Region(0.1 - 0.2j, 3.3, 2.2), (30, 20), 200, green_tol=tol)
        path = tmp_path / "g.csv"
        colorize_and_write(g, path, "csv")
        raw = path.read_bytes()
        assert raw.startswith((CSV_HEADER + "\n").encode()) and b"\r" not in raw
        assert len(raw.decode().splitlines()) == 1 + 30 * 20
        t = read_table(path)
        assert table_text(t).encode() == raw
        re, im = pixel_coords(g.region, (30, 20))
        assert np.array_equal(t.re, re.ravel()) and np.array_equal(t.im, im.ravel())
        assert t.tag[0] == Tag(int(g.tag[0, 0])).label
    with pytest.raises(ValueError):
        parse_table("a,b\n")


def test_io_failure(tmp_path):
    g = membership_grid(FibonacciSystem(IDENTITY, 0), SQUARE, (2, 2))
    with pytest.raises(IoFailure) as exc:
        colorize_and_write(g, tmp_path / "missing" / "x.ppm")
    assert "No such file" in str(exc.value)
    with pytest.raises(PreconditionViolated):
        colorize_and_write(g, tmp_path / "x.png", "png")


def _grid_field(mask):
    return trace_contours(np.array(mask, bool), Region(0j, float(len(mask[0])), float(len(mask))))


def test_marching_squares_shapes():
    assert len(_grid_field([[0, 0, 0], [0, 1, 0], [0, 0, 0]])) == 1
    assert len(_grid_field([[1, 0, 1], [0, 0, 0], [1, 0, 1]])) == 4
    # diagonal saddle: inside corners stay connected, so one contour
    assert len(_grid_field([[1, 0], [0, 1]])) == 1
    # ring: an outer and an inner contour
    ring = np.ones((5, 5))
    ring[2, 2] = 0
    assert len(_grid_field(ring)) == 2
    (poly,) = _grid_field([[1]])
    # a single pixel gives the diamond through its four edge midpoints
    assert sorted((p.real, p.imag) for p in poly) == [(-0.5, 0.0), (0.0, -0.5), (0.0, 0.5), (0.5, 0.0)]


def test_polygon_contains():
    sq = np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j])
    assert polygon_contains(sq, 0j) and not polygon_contains(sq, 2 + 0j)


def test_boundary_c0_near_unit_circle():
    res = 256
    poly = trace_boundary(0j, res)
    pitch = 4.0 / res
    assert np.max(np.abs(np.abs(poly) - 1.0)) <= pitch
    with pytest.raises(PreconditionViolated):
        trace_boundary(0j, 32)


def test_boundary_small_c_single_component():
    g = membership_grid(FibonacciSystem(IDENTITY, 0.01), SQUARE, (512, 512), 1000)
    assert len(trace_contours(g.inside, SQUARE)) == 1


def test_disconnection_witness():
    c = -2.5
    z0 = (1 + math.sqrt(1 - 4 * c)) / 2
    g = membership_grid(FibonacciSystem(IDENTITY, c), SQUARE, (512, 512), 1000)
    for poly in trace_contours(g.inside, SQUARE):
        assert not (polygon_contains(poly, -1 + 0j) and polygon_contains(poly, complex(z0)))


def test_no_contour():
    with pytest.raises(NoContour):
        trace_boundary(10.0, 64)


def test_hausdorff_examples():
    n = 4096
    poly = np.exp(2j * np.pi * np.arange(n) / n)
    assert hausdorff_distance(poly) <= 1.2e-6
    assert hausdorff_distance(2 * poly) == pytest.approx(1.0, abs=1e-9)
    assert hausdorff_distance(np.array([0j])) == pytest.approx(1.0)
    with pytest.raises(PreconditionViolated):
        hausdorff_distance(np.array([]))


def test_hausdorff_continuity():
    d0 = hausdorff_distance(trace_boundary(0j, 1024))
    ds = [hausdorff_distance(trace_boundary(a, 1024)) for a in (0.1, 0.05, 0.01)]
    assert d0 <= 2 * 4 / 1024
    assert ds[0] >= ds[1] >= ds[2]


def test_polyline_roundtrip(tmp_path):
    poly = trace_boundary(0.05, 128)
    write_polyline(poly, tmp_path / "b.csv")
    assert (tmp_path / "b.csv").read_text().startswith("k,re,im\n0,")
    assert np.array_equal(read_polyline(tmp_path / "b.csv"), poly)


def test_general_exponent_grid():
    sys_ = FibonacciSystem(IDENTITY, 0.2j, (2, 1))
    g = membership_grid(sys_, SQUARE, (64, 64), 200)
    assert g.escaped.any() and (~g.escaped).any() and g.green is None


@pytest.mark.parametrize("c", [-0.5 + 0.5j, 0.36 + 0.575j])
def test_figure_one_renders(c):
    g = membership_grid(FibonacciSystem(IDENTITY, c), SQUARE, (256, 256), 500, green_tol=1e-6)
    data = ppm_bytes(g)
    assert data.startswith(b"P6\n256 256\n255\n") and len(data) == 15 + 3 * 256 * 256
    assert g.inside.any() and g.escaped.any() and not np.any(g.tag == Tag.ERROR)


def test_membership_evaluator_rejects_bad_inputs():
    with pytest.raises(PreconditionViolated):
        MembershipEvaluator(FibonacciSystem(IDENTITY, 0), budget=1)
    with pytest.raises(PreconditionViolated):
        MembershipEvaluator(FibonacciSystem(IDENTITY, 0), green_tol=0)


def test_grid_table_labels():
    g = membership_grid(FibonacciSystem(IDENTITY, 0), SQUARE, (4, 4))
    t = grid_table(g)
    assert set(t.tag) <= {tag.label for tag in Tag}
    assert t.green == [None] * 16
