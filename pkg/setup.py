"""Build the optional Cython kernels.

The package works without them: ``fibdyn._backend`` falls back to the
pure-Python kernels when the extension is missing.
"""
import os

import numpy as np
from setuptools import Extension, setup


def _extensions():
    if os.environ.get("FIBDYN_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "fibdyn._kernels",
        ["src/fibdyn/_kernels.pyx"],
        include_dirs=[np.get_include()],
        # bit-identical results with the Python fallback need strict IEEE ops
        extra_compile_args=["-O3", "-fno-fast-math", "-ffp-contract=off"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=_extensions())
