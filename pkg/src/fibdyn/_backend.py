"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``FIBDYN_BACKEND=python`` to force the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("FIBDYN_BACKEND", "").lower() == "python":
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.NAME
