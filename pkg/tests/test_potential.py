import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fibdyn.core import (
    GOLDEN,
    IDENTITY,
    Escaped,
    FibonacciSystem,
    Polynomial,
    classify_orbit,
    degree_sequence,
    escape_constants,
    henon_step,
)
from fibdyn.errors import OutsideDomain, PreconditionViolated, TolUnreachable, UnsupportedExponents
from fibdyn.potential import (
    bottcher_log_modulus,
    capacity_sigma,
    degree_ratio_bound,
    degree_tables,
    green_2d,
    green_constants,
    green_diag,
    green_sequence,
)

Z = IDENTITY
C_REF = -0.5 + 0.5j


def _mp_green(z, sys, n=70):
    """High-precision log|f_n| / d_n; the truncation is far below double precision."""
    mpmath.mp.dps = 50
    prev = mpmath.mpc(z)
    cur = mpmath.polyval([mpmath.mpc(a) for a in sys.f.coeffs[::-1]], prev)
    c = mpmath.mpc(sys.c)
    seq = degree_sequence(sys.f.degree)
    for _ in range(n):
        prev, cur = cur, cur * prev + c
    return float(mpmath.log(abs(prev)) / mpmath.mpf(seq[n]))


def test_green_examples():
    sys = FibonacciSystem(Z, 0)
    est = green_diag(2, sys, 1e-12)
    assert est.escaped and abs(est.value - math.log(2)) <= 1e-12 and est.error_bound <= 1e-12
    assert green_diag(0.5, sys, 1e-9).value == 0
    ref = green_diag(3, FibonacciSystem(Z, C_REF), 1e-13).value
    assert abs(green_diag(3, FibonacciSystem(Z, C_REF), 1e-9).value - ref) <= 2e-9


def test_green_against_mpmath(rng):
    for f in (Z, Polynomial((0.5, 0, 1)), Polynomial((0, 2))):
        sys = FibonacciSystem(f, C_REF)
        for _ in range(40):
            z = complex(*rng.uniform(-3, 3, 2))
            est = green_diag(z, sys, 1e-10)
            if not est.escaped:
                continue
            assert abs(est.value - _mp_green(z, sys)) <= est.error_bound + 1e-13


def test_green_undecided_semantics():
    sys = FibonacciSystem(Z, 0.36 + 0.575j)
    est = green_diag(0.999, sys, 1e-6, budget=2)
    assert (est.value, est.escaped, est.error_bound) == (0.0, False, 1e-6)
    with pytest.raises(PreconditionViolated):
        green_diag(1, sys, 0)
    with pytest.raises(UnsupportedExponents):
        green_diag(1, FibonacciSystem(Z, 0, (2, 1)), 1e-6)


def test_green_tol_unreachable():
    with pytest.raises(TolUnreachable):
        green_diag(3, FibonacciSystem(Z, C_REF), 1e-300)


@settings(max_examples=60, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_zero_set_and_positivity(x, y):
    sys = FibonacciSystem(Z, C_REF)
    z = complex(x, y)
    v = classify_orbit(z, sys, 500)
    est = green_diag(z, sys, 1e-8, 500)
    if isinstance(v, Escaped):
        assert est.escaped and est.value > 0
    else:
        assert not est.escaped and est.value == 0


def test_asymptotic_constant():
    sys = FibonacciSystem(Polynomial((0, 2)))
    sigma = capacity_sigma(sys).sigma
    z = 1e4 * complex(math.cos(1.1), math.sin(1.1))
    assert abs(green_diag(z, sys, 1e-6).value - math.log(abs(z)) - sigma) <= 1e-3


def test_harmonicity_proxy(rng):
    sys = FibonacciSystem(Z, C_REF)
    h = 1e-3
    for _ in range(20):
        z = complex(*rng.uniform(-4, 4, 2))
        if abs(z) < 2.5:
            continue
        g = [green_diag(z + d, sys, 1e-12).value for d in (h, -h, 1j * h, -1j * h, 0)]
        assert abs(sum(g[:4]) - 4 * g[4]) / h**2 <= 1e-3


def test_green_sequence_cauchy(rng):
    sys = FibonacciSystem(Z, C_REF)
    C = green_constants(sys).C
    d = degree_tables(1).d
    for _ in range(200):
        g = green_sequence(complex(*rng.uniform(-3, 3, 2)), sys, 41)
        for n in range(41):
            assert abs(g[n + 1] - g[n]) <= C / d[n + 1]


def test_degree_ratio_bound_definition():
    for d1 in (1, 2, 3):
        D = degree_ratio_bound(d1)
        seq = degree_sequence(d1)
        for n in range(2, 65):
            for k in range(n - 1):
                assert Fraction(seq[n - k - 1]) * Fraction(GOLDEN) ** k <= Fraction(D) * seq[n]


def test_green_constants_fields():
    gc = green_constants(FibonacciSystem(Z, C_REF))
    assert gc.rho == GOLDEN and gc.R == 8.00000001
    # max ratio is d_2/d_3 = 2/3
    assert gc.C > gc.A > 0 and gc.B > 0 and gc.D == pytest.approx(2 / 3, rel=1e-8)


def test_degree_tables_tail():
    t = degree_tables(1)
    assert t.d[:5] == (1.0, 1.0, 2.0, 3.0, 5.0)
    exact = math.fsum(1 / x for x in t.d[11:])
    assert t.tail[10] >= exact


def test_green_2d_c0_closed_form(rng):
    sys = FibonacciSystem(Z, 0)
    R = escape_constants(sys).R
    for _ in range(30):
        w = (R + rng.uniform(0, 5)) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        z = (R + rng.uniform(0, 5)) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        est = green_2d(w, z, sys, 1e-10)
        exact = math.log(abs(w)) / GOLDEN + math.log(abs(z)) / GOLDEN**2
        assert abs(est.value - exact) <= est.error_bound + 1e-13


def test_green_2d_domain():
    with pytest.raises(OutsideDomain):
        green_2d(1, 10, FibonacciSystem(Z, 0), 1e-6)


@pytest.mark.parametrize("ac", [0.0, 0.1, 0.5])
def test_green_2d_functional_equation_and_diagonal(rng, ac):
    c = ac * np.exp(2j)
    sys = FibonacciSystem(Z, c)
    R = escape_constants(sys).R
    tol = 1e-9
    for _ in range(20):
        w = (R + 5 * (1 - rng.uniform())) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        z = (R + 5 * (1 - rng.uniform())) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        G = green_2d(w, z, sys, tol).value
        assert abs(green_2d(*henon_step(w, z, c), sys, tol).value - GOLDEN * G) <= 2 * tol
        assert abs(green_2d(z, z, sys, tol).value - green_diag(z, sys, tol).value) <= 2 * tol


def test_capacity_examples():
    assert capacity_sigma(FibonacciSystem(Z)).sigma == 0.0
    assert capacity_sigma(FibonacciSystem(Polynomial((0, 0, 1)))).capacity == 1.0
    res = capacity_sigma(FibonacciSystem(Polynomial((0, 2))), 40)
    fib = [1, 1]
    while len(fib) < 42:
        fib.append(fib[-1] + fib[-2])
    S = sum(Fraction((-1) ** n, fib[n] * fib[n + 1]) for n in range(40))
    assert abs(float(S) - 0.6180339887) < 1e-9
    assert res.sigma == pytest.approx(math.log(2) * float(S), abs=1e-16)
    assert res.tail_bound == pytest.approx(math.log(2) / (fib[40] * fib[41]), rel=1e-12)
    assert res.tail_bound < 1e-16
    with pytest.raises(PreconditionViolated):
        capacity_sigma(FibonacciSystem(Z), 1)


def test_capacity_large_n_uses_floats():
    res = capacity_sigma(FibonacciSystem(Polynomial((0, 3j))), 120)
    assert math.isfinite(res.sigma) and res.tail_bound < 1e-40


def test_bottcher_c0_closed_form():
    sys = FibonacciSystem(Z, 0)
    w, z = 5 + 1j, -6j
    exact = (math.log(abs(w)) + math.log(abs(z)) / GOLDEN) / math.sqrt(5)
    assert bottcher_log_modulus(w, z, sys) == pytest.approx(exact, rel=1e-12)


def test_bottcher_functional_equation_and_ratio(rng):
    ratios = []
    for ac in (0.0, 0.2, 0.5):
        c = ac * np.exp(0.7j)
        sys = FibonacciSystem(Z, c)
        R = escape_constants(sys).R
        for _ in range(30):
            w = (R + 5 * (1 - rng.uniform())) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            z = (R + 5 * (1 - rng.uniform())) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            phi = bottcher_log_modulus(w, z, sys)
            assert abs(bottcher_log_modulus(*henon_step(w, z, c), sys) - GOLDEN * phi) <= 1e-6
            ratios.append(phi / green_2d(w, z, sys, 1e-12).value)
    # measured constant: log|phi| = lambda0 * G with lambda0 = rho / sqrt(5) for deg f = 1
    assert max(ratios) - min(ratios) <= 1e-8
    assert ratios[0] == pytest.approx(degree_sequence(1).lambda0, abs=1e-8)
    with pytest.raises(OutsideDomain):
        bottcher_log_modulus(0.5, 10, FibonacciSystem(Z, 0))
