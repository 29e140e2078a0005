"""Recurrence, the companion map H_c, escape constants and membership.

The orbit of a point ``z`` is ``f_0 = z``, ``f_1 = f(z)`` and
``f_{n+1} = f_n * f_{n-1} + c``; equivalently the forward orbit of
``(f(z), z)`` under ``H_c(x, y) = (x*y + c, x)``.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .tags import Tag
from .errors import (
    ConstructionFailed,
    InvalidPolynomial,
    NumericOverflow,
    PreconditionViolated,
    UnsupportedExponents,
)

#: value-space moduli above this switch to log-modulus intervals
SWITCH_THRESHOLD = 1e100
LOG_SWITCH_THRESHOLD = math.log(SWITCH_THRESHOLD)
#: additive margin turning strict inequalities into computable choices
MARGIN = 1e-9
#: seed for every sampled check in the package
SEED = 0x5EED

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0

_EXACT_LIMIT = 2**62

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)"
_COMPLEX_RE = re.compile(rf"^(?P<re>[+-]?{_NUM})(?:(?P<im>[+-]{_NUM})i)?$|^(?P<pure>[+-]?{_NUM})i$")


def parse_complex(text: str) -> complex:
    """Parse a decimal literal ``a``, ``a+bi``, ``a-bi`` or ``bi``."""
    m = _COMPLEX_RE.match(text.strip())
    if m is None:
        raise ValueError(f"not a complex literal: {text!r}")
    if m["pure"] is not None:
        return complex(0.0, float(m["pure"]))
    return complex(float(m["re"]), float(m["im"]) if m["im"] else 0.0)


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with complex coefficients, lowest degree first."""

    coeffs: tuple

    def __post_init__(self):
        cs = [complex(a) for a in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if len(cs) < 2:
            raise InvalidPolynomial("polynomial must be nonconstant")
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        """Parse ``"0,0,1"`` (low degree first) into z**2."""
        return cls(tuple(parse_complex(tok) for tok in text.split(",")))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    @property
    def is_identity(self) -> bool:
        return self.coeffs == (0j, 1 + 0j)

    def __call__(self, z):
        return eval_poly(self, z)

    def __str__(self):
        return ",".join(_fmt_coeff(a) for a in self.coeffs)


def _fmt_coeff(a: complex) -> str:
    if a.imag == 0:
        return repr(a.real).removesuffix(".0")
    return f"{a.real!r}{a.imag:+}i"


IDENTITY = Polynomial((0, 1))


def eval_poly(f: Polynomial, z):
    """Horner evaluation; NaN/Inf inputs propagate."""
    coeffs = f.coeffs
    acc = coeffs[-1]
    z = complex(z)
    for a in reversed(coeffs[:-1]):
        acc = acc * z + a
    return acc


@dataclass(frozen=True)
class FibonacciSystem:
    """The recurrence ``f_{n+1} = f_n**a * f_{n-1}**b + c`` seeded by ``f``."""

    f: Polynomial = IDENTITY
    c: complex = 0j
    exponents: tuple = (1, 1)

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        a, b = self.exponents
        if int(a) != a or int(b) != b or a < 1 or b < 1:
            raise PreconditionViolated(f"exponents must be positive integers, got {self.exponents}")
        object.__setattr__(self, "exponents", (int(a), int(b)))

    @property
    def is_classic(self) -> bool:
        return self.exponents == (1, 1)

    def require_classic(self, what: str) -> None:
        if not self.is_classic:
            raise UnsupportedExponents(f"{what} requires exponents (1, 1), got {self.exponents}")

    def orbit(self, z, n: int) -> list:
        """Values f_0(z), ..., f_n(z) in value space (may overflow to inf)."""
        z = complex(z)
        vals = [z, self.f(z)]
        a, b = self.exponents
        while len(vals) <= n:
            vals.append(_ipow(vals[-1], a) * _ipow(vals[-2], b) + self.c)
        return vals[: n + 1]


class DegreeSequence:
    """Degrees d_n of f_n: d_0 = 1, d_1 = deg f, d_{n+1} = a d_n + b d_{n-1}.

    Entries are exact integers while below 2**62 and doubles after that.
    """

    def __init__(self, d1: int, a: int = 1, b: int = 1):
        self.a, self.b = a, b
        self._d: list = [1, d1]
        self.rho = (a + math.sqrt(a * a + 4 * b)) / 2.0
        if (a, b) == (1, 1):
            # d_n = lambda0 * rho**n + lambda1 * (-1/rho)**n
            self.lambda0 = (d1 + 1.0 / GOLDEN) / math.sqrt(5.0)
            self.lambda1 = 1.0 - self.lambda0
        else:
            self.lambda0 = self.lambda1 = None

    def _extend(self, n: int) -> None:
        d = self._d
        while len(d) <= n:
            nxt = self.a * d[-1] + self.b * d[-2]
            if isinstance(nxt, int) and nxt >= _EXACT_LIMIT:
                nxt = float(nxt)
            d.append(nxt)

    def __getitem__(self, n: int):
        if n < 0:
            raise IndexError(n)
        self._extend(n)
        return self._d[n]

    def prefix(self, n: int) -> list:
        """d_0 .. d_{n-1}."""
        self._extend(n)
        return self._d[:n]


@lru_cache(maxsize=64)
def degree_sequence(d1: int, a: int = 1, b: int = 1) -> DegreeSequence:
    return DegreeSequence(d1, a, b)


@dataclass(frozen=True)
class OrbitPair:
    prev: complex
    cur: complex
    index: int


@dataclass(frozen=True)
class LogOrbit:
    """Consecutive log-moduli as closed intervals ``(lo, hi)``."""

    prev_log: tuple
    cur_log: tuple
    index: int

    @staticmethod
    def enclose(v: complex) -> tuple:
        L = math.log(abs(v))
        lo = math.nextafter(math.nextafter(L, -math.inf), -math.inf)
        hi = math.nextafter(math.nextafter(L, math.inf), math.inf)
        return lo, hi

    @classmethod
    def from_pair(cls, state: OrbitPair) -> "LogOrbit":
        return cls(cls.enclose(state.prev), cls.enclose(state.cur), state.index)

    @property
    def width(self) -> float:
        return self.cur_log[1] - self.cur_log[0]

    @property
    def mid(self) -> float:
        return 0.5 * (self.cur_log[0] + self.cur_log[1])


@dataclass(frozen=True)
class GrowthConstants:
    delta: float
    p: float
    d: float


@dataclass(frozen=True)
class EscapeConstants:
    M: float
    R: float
    growth: GrowthConstants
    margin: float = MARGIN


class EscapeReason(str, enum.Enum):
    CONSECUTIVE_ABOVE_M = "ConsecutiveAboveM"
    SINGLE_ABOVE_R = "SingleAboveR"
    OUTER_CERTIFICATE = "OuterCertificate"


class InsideReason(str, enum.Enum):
    EXACT_ORACLE_C0 = "ExactOracleC0"
    BIDISK_CERTIFICATE = "BidiskCertificate"
    PERIODIC_WITNESS = "PeriodicWitness"


@dataclass(frozen=True)
class Escaped:
    at_index: int
    reason: EscapeReason

    def as_dict(self) -> dict:
        return {"verdict": "Escaped", "atIndex": self.at_index, "reason": self.reason.value}


@dataclass(frozen=True)
class ProvenInside:
    reason: InsideReason

    def as_dict(self) -> dict:
        return {"verdict": "ProvenInside", "reason": self.reason.value}


@dataclass(frozen=True)
class Undecided:
    budget_used: int
    last_modulus: float

    def as_dict(self) -> dict:
        return {"verdict": "Undecided", "budgetUsed": self.budget_used,
                "lastModulus": self.last_modulus}


MembershipVerdict = Union[Escaped, ProvenInside, Undecided]


def _mod(z: complex) -> float:
    # abs() is libm hypot, like the compiled kernels, but raises instead of returning inf
    try:
        return abs(z)
    except OverflowError:
        return math.inf


def _ipow(x: complex, k: int) -> complex:
    # repeated multiplication keeps the Python and compiled kernels bit-identical
    r = x
    for _ in range(k - 1):
        r = r * x
    return r


def iterate_step(state: OrbitPair, sys: FibonacciSystem) -> OrbitPair:
    """One step of the recurrence; raises NumericOverflow past the switch threshold."""
    a, b = sys.exponents
    new = _ipow(state.cur, a) * _ipow(state.prev, b) + sys.c
    if not abs(new) <= SWITCH_THRESHOLD:
        raise NumericOverflow(f"|f_{state.index + 1}| exceeds {SWITCH_THRESHOLD:g}")
    return OrbitPair(state.cur, new, state.index + 1)


def henon_step(w: complex, z: complex, c: complex) -> tuple:
    """H_c(w, z) = (w*z + c, w)."""
    return (w * z + c, w)


@lru_cache(maxsize=256)
def growth_constants(f: Polynomial) -> GrowthConstants:
    """Constants with |z| > E => |f(z)| > d E and |f(z)| > E**p => |z| > E for E >= delta."""
    k = f.degree
    lead = abs(f.leading)
    lower = sum(abs(a) for a in f.coeffs[:-1])
    c1 = lower + lead
    delta = max(1.0, 2.0 * lower / lead, c1)
    # |f(z)| >= (lead - lower/delta) |z|**k on |z| >= delta
    d = (lead - lower / delta) * delta ** (k - 1)
    g = GrowthConstants(delta=delta, p=float(k + 1), d=d)
    _check_growth(f, g)
    return g


def _check_growth(f: Polynomial, g: GrowthConstants, samples: int = 1000) -> None:
    rng = np.random.default_rng(SEED)
    coeffs = np.array(f.coeffs[::-1])
    E = rng.uniform(g.delta, 10 * g.delta, samples)
    theta = rng.uniform(0, 2 * np.pi, (2, samples))
    outer = E * (1 + rng.uniform(1e-6, 1.0, samples)) * np.exp(1j * theta[0])
    inner = E * rng.uniform(0.0, 1.0, samples) * np.exp(1j * theta[1])
    bad_outer = ~(np.abs(np.polyval(coeffs, outer)) > g.d * E)
    bad_inner = ~(np.abs(np.polyval(coeffs, inner)) <= E ** g.p)
    if bad_outer.any() or bad_inner.any():
        raise ConstructionFailed(f"growth constants {g} fail for {f}")


@lru_cache(maxsize=1024)
def escape_constants(sys: FibonacciSystem) -> EscapeConstants:
    sys.require_classic("escape_constants")
    g = growth_constants(sys.f)
    ac = abs(sys.c)
    M = max(2.0, math.sqrt(2.0 * ac), g.delta) + MARGIN
    R = max(M + 2.0 * ac, M / g.d, M**g.p, 3.0) + MARGIN
    if not R * R - ac > R:
        R = (1.0 + math.sqrt(1.0 + 4.0 * ac)) / 2.0 + MARGIN
    return EscapeConstants(M=M, R=R, growth=g)


@lru_cache(maxsize=1024)
def nesting_radius(sys: FibonacciSystem) -> float:
    """Radius R for which |f_{n+1}| < R implies |f_n| < R.

    Starts at the escape radius and doubles until the inequalities of the
    nesting argument hold.
    """
    R = escape_constants(sys).R
    ac = abs(sys.c)
    while True:
        if R > ac:
            h1 = R * (R - ac) / (R + ac)
            h2 = (R * (1 + ac) + ac) * (R + ac) / (R * R * (R - ac))
            if (R + ac) / R <= R and h1 > 0.5 * R and (h1 - ac) / h2 > R:
                return R
        R *= 2.0


@dataclass(frozen=True)
class ClassifyParams:
    """Squared thresholds shared by the reference loop and the kernels."""

    M2: float
    R2: float
    outer2: float   # pair above this escapes (outer bidisk certificate)
    inner2: float   # pair below this is inside (bidisk certificate)
    c0_oracle: bool


@lru_cache(maxsize=1024)
def classify_params(sys: FibonacciSystem) -> ClassifyParams:
    ec = escape_constants(sys)
    ac = abs(sys.c)
    outer = 1.0 + math.sqrt(ac)
    inner = (1.0 + math.sqrt(1.0 - 4.0 * ac)) / 2.0 if ac < 0.25 else 0.0
    return ClassifyParams(ec.M * ec.M, ec.R * ec.R, outer * outer, inner * inner, sys.c == 0)


def classify_point(z: complex, c: complex, f: Polynomial, prm: ClassifyParams, budget: int) -> tuple:
    """Membership loop for one point; returns ``(tag, index, |f_index|)``.

    Per index n (pair f_n, f_{n+1}) the checks run in this order: two
    consecutive moduli above M, one modulus above R, the outer bidisk
    certificate, the inner bidisk certificate.  After each step the state is
    compared with a saved one (Brent's scheme), so an exactly periodic
    floating-point orbit stops early.  At c = 0 the exact oracle decides
    inside points before iterating.
    """
    from .certificates import k0_membership  # certificates imports this module

    prev = z
    cur = f(z)
    if prm.c0_oracle and k0_membership(cur, prev):
        return Tag.INSIDE_EXACT_C0, 0, _mod(prev)
    saved_p, saved_c = prev, cur
    power, lam = 1, 0
    n = 0
    while n < budget:
        a2 = prev.real * prev.real + prev.imag * prev.imag
        b2 = cur.real * cur.real + cur.imag * cur.imag
        if a2 > prm.M2 and b2 > prm.M2:
            return Tag.ESCAPED_CONSECUTIVE, n, _mod(prev)
        if a2 > prm.R2:
            return Tag.ESCAPED_SINGLE, n, _mod(prev)
        if a2 > prm.outer2 and b2 > prm.outer2:
            return Tag.ESCAPED_OUTER, n, _mod(prev)
        if a2 < prm.inner2 and b2 < prm.inner2:
            return Tag.INSIDE_BIDISK, n, _mod(prev)
        prev, cur = cur, cur * prev + c
        n += 1
        if prev == saved_p and cur == saved_c:
            return Tag.INSIDE_PERIODIC, n, _mod(prev)
        lam += 1
        if lam == power:
            saved_p, saved_c = prev, cur
            power *= 2
            lam = 0
    return Tag.UNDECIDED, n, _mod(prev)


_VERDICTS = {
    Tag.ESCAPED_CONSECUTIVE: EscapeReason.CONSECUTIVE_ABOVE_M,
    Tag.ESCAPED_SINGLE: EscapeReason.SINGLE_ABOVE_R,
    Tag.ESCAPED_OUTER: EscapeReason.OUTER_CERTIFICATE,
    Tag.INSIDE_EXACT_C0: InsideReason.EXACT_ORACLE_C0,
    Tag.INSIDE_BIDISK: InsideReason.BIDISK_CERTIFICATE,
    Tag.INSIDE_PERIODIC: InsideReason.PERIODIC_WITNESS,
}


def verdict_from_tag(tag: int, index: int, last_modulus: float) -> MembershipVerdict:
    tag = Tag(tag)
    if tag == Tag.UNDECIDED:
        return Undecided(index, last_modulus)
    reason = _VERDICTS[tag]
    if isinstance(reason, EscapeReason):
        return Escaped(index, reason)
    return ProvenInside(reason)


def classify_orbit(z, sys: FibonacciSystem, budget: int = 1000) -> MembershipVerdict:
    """Tri-state membership of z in the filled Julia slice (see :func:`classify_point`)."""
    if budget < 2:
        raise PreconditionViolated("budget must be >= 2")
    sys.require_classic("classify_orbit")
    return verdict_from_tag(*classify_point(complex(z), sys.c, sys.f, classify_params(sys), budget))


def general_escape_threshold(c: complex, a: int, b: int) -> float:
    """M with two consecutive moduli above M forcing escape for (x**a y**b + c, x)."""
    return max(2.0, (2.0 * abs(c)) ** (1.0 / (a + b))) + MARGIN


def general_point(z: complex, c: complex, f: Polynomial, a: int, b: int,
                  M2: float, budget: int) -> tuple:
    """Escape-time loop for arbitrary exponents; only the consecutive test applies."""
    prev = z
    cur = f(z)
    n = 0
    while n < budget:
        a2 = prev.real * prev.real + prev.imag * prev.imag
        b2 = cur.real * cur.real + cur.imag * cur.imag
        if a2 > M2 and b2 > M2:
            return Tag.ESCAPED_CONSECUTIVE, n
        prev, cur = cur, _ipow(cur, a) * _ipow(prev, b) + c
        n += 1
    return Tag.UNDECIDED, n


def log_orbit_extend(state: LogOrbit, sys: FibonacciSystem) -> LogOrbit:
    """Advance log-modulus enclosures by one step of the recurrence.

    Uses log|f_n f_{n-1}| +/- eps where eps accounts for the additive c; the
    result is widened outward by two ulps so it encloses the exact value.
    """
    sys.require_classic("log_orbit_extend")
    (plo, phi), (clo, chi) = state.prev_log, state.cur_log
    if not (plo > LOG_SWITCH_THRESHOLD and clo > LOG_SWITCH_THRESHOLD):
        raise PreconditionViolated("log orbit is below the switch threshold")
    lo, hi = _log_step(plo, phi, clo, chi, abs(sys.c))
    return LogOrbit(state.cur_log, (lo, hi), state.index + 1)


def _log_step(plo: float, phi: float, clo: float, chi: float, ac: float) -> tuple:
    x = ac * math.exp(-(plo + clo))
    eps_hi = math.log1p(x)
    eps_lo = -math.log1p(-x)
    lo = plo + clo - eps_lo
    hi = phi + chi + eps_hi
    lo = math.nextafter(math.nextafter(lo, -math.inf), -math.inf)
    hi = math.nextafter(math.nextafter(hi, math.inf), math.inf)
    return lo, hi
