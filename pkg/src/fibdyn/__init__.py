"""Numerical engine for the complex Fibonacci recurrence f_{n+1} = f_n f_{n-1} + c."""
from ._backend import BACKEND
from .certificates import (
    TorusCoords,
    fixed_points,
    k0_membership,
    rs_coords,
    small_c_certificates,
    special_points,
)
from .core import (
    IDENTITY,
    DegreeSequence,
    Escaped,
    EscapeConstants,
    FibonacciSystem,
    GrowthConstants,
    LogOrbit,
    OrbitPair,
    Polynomial,
    ProvenInside,
    Undecided,
    classify_orbit,
    degree_sequence,
    escape_constants,
    growth_constants,
    iterate_step,
    log_orbit_extend,
    nesting_radius,
    parse_complex,
)
from .errors import FibdynError
from .locus import critical_orbit_classify, locus_grid
from .potential import (
    bottcher_log_modulus,
    capacity_sigma,
    green_2d,
    green_constants,
    green_diag,
)
from .raster import (
    RasterGrid,
    Region,
    colorize_and_write,
    hausdorff_distance,
    membership_grid,
    sample_grid,
    trace_boundary,
)
from .tags import Tag

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DegreeSequence",
    "EscapeConstants",
    "Escaped",
    "FibdynError",
    "FibonacciSystem",
    "GrowthConstants",
    "IDENTITY",
    "LogOrbit",
    "OrbitPair",
    "Polynomial",
    "ProvenInside",
    "RasterGrid",
    "Region",
    "Tag",
    "TorusCoords",
    "Undecided",
    "bottcher_log_modulus",
    "capacity_sigma",
    "classify_orbit",
    "colorize_and_write",
    "critical_orbit_classify",
    "degree_sequence",
    "escape_constants",
    "fixed_points",
    "green_2d",
    "green_constants",
    "green_diag",
    "growth_constants",
    "hausdorff_distance",
    "iterate_step",
    "k0_membership",
    "locus_grid",
    "log_orbit_extend",
    "membership_grid",
    "nesting_radius",
    "parse_complex",
    "rs_coords",
    "sample_grid",
    "small_c_certificates",
    "special_points",
    "trace_boundary",
]
