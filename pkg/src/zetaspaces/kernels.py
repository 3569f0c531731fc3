"""Selects the compiled kernels when available, else the pure-Python ones.

Set ``ZETASPACES_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels as python_kernels

try:
    from . import _ckernels as c_kernels
except ImportError:  # extension not built
    c_kernels = None

if c_kernels is not None and not os.environ.get("ZETASPACES_PURE_PYTHON"):
    _impl = c_kernels
    BACKEND = "cython"
else:
    _impl = python_kernels
    BACKEND = "python"

build_tables = _impl.build_tables
count_roots_range = _impl.count_roots_range
