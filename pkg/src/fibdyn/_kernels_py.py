"""Pure-Python kernels, used when the compiled extension is unavailable.

Signatures match ``fibdyn._kernels``.  Each block function walks flat
coordinate arrays and writes into preallocated outputs; the per-point work
is the scalar reference loop from the owning module, so both backends can be
checked against one another bit for bit.
"""
import math

from .core import ClassifyParams, Polynomial, classify_point, general_point
from .errors import FibdynError
from .locus import LocusParams, critical_point
from .potential import DegreeTables, _run
from .tags import ESCAPED_TAGS, Tag

NAME = "python"


def _poly(cre, cim) -> Polynomial:
    return Polynomial(tuple(complex(a, b) for a, b in zip(cre, cim)))


def classify_block(re, im, cr, ci, cre, cim, M2, R2, outer2, inner2, c0_oracle,
                   budget, tag, iters):
    f = _poly(cre, cim)
    c = complex(cr, ci)
    prm = ClassifyParams(M2, R2, outer2, inner2, bool(c0_oracle))
    for k in range(len(re)):
        t, n, _ = classify_point(complex(re[k], im[k]), c, f, prm, budget)
        tag[k] = t
        iters[k] = n


def green_block(re, im, cr, ci, cre, cim, M2, R2, outer2, inner2, c0_oracle,
                budget, C, tol, d, tail, tag, iters, green):
    f = _poly(cre, cim)
    c = complex(cr, ci)
    prm = ClassifyParams(M2, R2, outer2, inner2, bool(c0_oracle))
    tables = DegreeTables(tuple(map(float, d)), tuple(map(float, tail)))
    for k in range(len(re)):
        z = complex(re[k], im[k])
        t, n, _ = classify_point(z, c, f, prm, budget)
        g = 0.0
        if t in ESCAPED_TAGS:
            try:
                g = _run(z, f(z), c, C, tol, tables, n + 1)[0]
            except FibdynError:
                t, g = Tag.ERROR, math.nan
        tag[k] = t
        iters[k] = n
        green[k] = g


def critical_block(re, im, M2, R2, inner2, outer2, budget, tag, iters):
    prm = LocusParams(M2, R2, inner2, outer2)
    for k in range(len(re)):
        t, n = critical_point(complex(re[k], im[k]), prm, budget)
        tag[k] = t
        iters[k] = n


def general_block(re, im, cr, ci, cre, cim, a, b, M2, budget, tag, iters):
    f = _poly(cre, cim)
    c = complex(cr, ci)
    for k in range(len(re)):
        t, n = general_point(complex(re[k], im[k]), c, f, a, b, M2, budget)
        tag[k] = t
        iters[k] = n
