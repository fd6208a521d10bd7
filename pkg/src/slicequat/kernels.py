"""Kernel backend selection.

The compiled extension ``_kernels_cy`` is used when it was built;
otherwise the numpy module ``_kernels_py`` is used. Setting the
environment variable ``SLICEQUAT_PURE_PYTHON=1`` before import forces the
numpy fallback.

The wrappers here accept broadcastable arrays of shape (..., 4) and take
care of making them contiguous 2-D float64 blocks for the backend.
"""
import os

import numpy as np

from . import _kernels_py

if os.environ.get("SLICEQUAT_PURE_PYTHON", "") not in ("", "0"):
    _backend = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels_cy as _backend
        BACKEND = "cython"
    except ImportError:
        _backend = _kernels_py
        BACKEND = "python"


def available_backends():
    """Names of the backends importable in this environment."""
    names = ["python"]
    try:
        from . import _kernels_cy  # noqa: F401
        names.append("cython")
    except ImportError:
        pass
    return names


def get_backend(name=None):
    """Return the raw kernel module for ``name`` (default: the active one)."""
    if name is None:
        return _backend
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels_cy
        return _kernels_cy
    raise ValueError(f"unknown backend {name!r}")


def _as_rows(a):
    a = np.asarray(a, dtype=np.float64)
    return np.ascontiguousarray(a.reshape(-1, 4))


def qmul(a, b):
    """Broadcasting Hamilton product of quaternion arrays."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    shape = np.broadcast_shapes(a.shape, b.shape)
    a2 = _as_rows(np.broadcast_to(a, shape))
    b2 = _as_rows(np.broadcast_to(b, shape))
    return _backend.qmul(a2, b2).reshape(shape)


def qconj(a):
    out = np.array(a, dtype=np.float64, copy=True)
    out[..., 1:] *= -1.0
    return out


def qnorm2(a):
    a = np.asarray(a, dtype=np.float64)
    return np.einsum("...i,...i->...", a, a)


def qnorm(a):
    return np.sqrt(qnorm2(a))


def qinv(a):
    return qconj(a) / qnorm2(a)[..., None]


def poly_eval(coeffs, points):
    """Evaluate a right-coefficient quaternion polynomial at points of shape (..., 4)."""
    points = np.asarray(points, dtype=np.float64)
    shape = points.shape
    c = np.ascontiguousarray(np.asarray(coeffs, dtype=np.float64).reshape(-1, 4))
    return _backend.poly_eval(c, _as_rows(points)).reshape(shape)


def convolve(a, b):
    """Ordered convolution of two quaternion coefficient arrays."""
    return _backend.convolve(_as_rows(a), _as_rows(b))


def aberth(coeffs, z0, tol=1e-15, maxiter=500):
    c = np.ascontiguousarray(np.asarray(coeffs, dtype=np.complex128))
    return _backend.aberth(c, np.asarray(z0, dtype=np.complex128), float(tol), int(maxiter))
