"""Backend selection for the hot loops.

The compiled extension ``lobachevsky._kernels`` is used when it was built;
otherwise the pure-Python module is loaded. Set ``LOBACHEVSKY_PURE_PYTHON=1``
to force the fallback.
"""

import os

import numpy as np

from . import _kernels_py

if os.environ.get("LOBACHEVSKY_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
        BACKEND = "python"


def _vec(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def hdist(u, v, r):
    return _impl.hdist(_vec(u), _vec(v), float(r))


def chord_length(pts, r):
    return _impl.chord_length(np.ascontiguousarray(pts, dtype=np.float64), float(r))


def bisect_boundary(normal, p, e_foot, e_perp, r, lo, hi, tol, max_iter=60):
    return _impl.bisect_boundary(_vec(normal), _vec(p), _vec(e_foot), _vec(e_perp),
                                 float(r), float(lo), float(hi), float(tol), int(max_iter))


def get_backend(name):
    """Return the kernel module for ``name`` ('python' or 'cython')."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")
