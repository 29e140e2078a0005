import numpy as np
import pytest

from fibdyn.core import Polynomial
from fibdyn.errors import HypothesisViolated, PreconditionViolated
from fibdyn.locus import (
    BoundedAtBudget,
    EscapedAt,
    InsideByBound,
    OutsideByBound,
    critical_orbit,
    critical_orbit_classify,
    locus_grid,
    locus_params,
)
from fibdyn.raster import Region
from fibdyn.tags import Tag

Z2 = Polynomial((0, 0, 1))


def _brute(c, budget):
    """Direct orbit iteration with a plain escape radius of 3 (valid for |c| <= 2.002)."""
    prev = cur = 0j
    for n in range(budget):
        if abs(prev) > 1e6:
            return n
        prev, cur = cur, cur * prev + c
    return None


def test_locus_examples():
    assert critical_orbit_classify(0.2, Z2) == InsideByBound()
    assert critical_orbit_classify(2.1, Z2) == OutsideByBound()
    v = critical_orbit_classify(-0.3, Z2, 10_000)
    assert isinstance(v, BoundedAtBudget) and _brute(-0.3, 10_000) is None
    assert critical_orbit(-0.3, 4) == [0, 0, -0.3, -0.3, 0.09 - 0.3]


def test_hypothesis_checked():
    with pytest.raises(HypothesisViolated):
        critical_orbit_classify(0.5, Polynomial((0, 1)))
    with pytest.raises(HypothesisViolated):
        critical_orbit_classify(0.5, Polynomial((1, 0, 1)))
    with pytest.raises(PreconditionViolated):
        critical_orbit_classify(0.5, Z2, budget=3)


def test_verdicts_match_brute_force(rng):
    for _ in range(300):
        c = complex(*rng.uniform(-2.2, 2.2, 2))
        v = critical_orbit_classify(c, Z2, 2000)
        esc = _brute(c, 2100)
        if isinstance(v, EscapedAt):
            assert esc is not None
        elif isinstance(v, (InsideByBound, BoundedAtBudget)):
            assert esc is None or esc > 2000


def test_outside_bound_agrees_with_iteration(rng):
    for _ in range(100):
        c = (2 + (1 - rng.uniform())) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        assert critical_orbit_classify(c, Z2) == OutsideByBound()
        assert _brute(c, 100) is not None


def test_growth_witness(rng):
    for _ in range(50):
        c = (2 + 1e-3 + rng.uniform()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        orbit = critical_orbit(c, 30)
        for n in range(4, 31):
            if not np.isfinite(abs(orbit[n])):
                break
            assert abs(orbit[n]) >= (abs(c) - 1) * abs(orbit[n - 1]) * (1 - 1e-12)


def test_monotone_budget(rng):
    for _ in range(200):
        c = complex(*rng.uniform(-2, 2, 2))
        small = critical_orbit_classify(c, Z2, 50)
        if isinstance(small, EscapedAt):
            assert critical_orbit_classify(c, Z2, 5000) == small


def test_uniform_params_independent_of_c():
    p = locus_params(Z2)
    assert p.inner2 == 0.249**2 and p.outer2 == 2.001**2 and p.M2 > 4


def test_grid_examples():
    region = Region(0j, 4.5, 4.5)
    g = locus_grid(region, (128, 128), Z2, 2000, workers=2)
    from fibdyn.raster import pixel_coords

    re, im = pixel_coords(region, (128, 128))
    mod = np.hypot(re, im)
    assert np.all(np.isin(g.tag[mod <= 0.249], [Tag.LOCUS_INSIDE_BOUND]))
    assert np.all(g.escaped[mod >= 2.01])
    assert not np.any((g.tag == Tag.LOCUS_INSIDE_BOUND) & (g.tag == Tag.LOCUS_ESCAPED))
    one = locus_grid(Region(0j, 1.0, 1.0), (1, 1), Z2)
    assert one.tag[0, 0] == Tag.LOCUS_INSIDE_BOUND
    with pytest.raises(HypothesisViolated):
        locus_grid(region, (4, 4), Polynomial((0, 1)))
