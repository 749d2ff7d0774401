"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``CAYLEYRIGID_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("CAYLEYRIGID_PURE_PYTHON"):
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.NAME
