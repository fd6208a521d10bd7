"""Pure numpy kernels.

Reference implementations of the hot loops. ``_kernels_cy.pyx`` provides
the same four functions with identical signatures; ``kernels`` picks one
at import time.

All quaternion arrays are float64 with a trailing axis of length 4
ordered (w, x, y, z). Polynomial coefficient arrays are indexed by power.
"""
import numpy as np


def qmul(a, b):
    """Hamilton product of two (N, 4) arrays, row by row."""
    a0, a1, a2, a3 = a[:, 0], a[:, 1], a[:, 2], a[:, 3]
    b0, b1, b2, b3 = b[:, 0], b[:, 1], b[:, 2], b[:, 3]
    out = np.empty(a.shape, dtype=np.float64)
    out[:, 0] = a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3
    out[:, 1] = a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2
    out[:, 2] = a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1
    out[:, 3] = a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0
    return out


def poly_eval(coeffs, points):
    """Evaluate sum_k q^k a_k (coefficients on the right) at every row of ``points``."""
    n = coeffs.shape[0]
    if n == 0:
        return np.zeros(points.shape, dtype=np.float64)
    out = np.empty(points.shape, dtype=np.float64)
    out[:] = coeffs[n - 1]
    for k in range(n - 2, -1, -1):
        out = qmul(points, out)
        out += coeffs[k]
    return out


def convolve(a, b):
    """Ordered coefficient convolution c_n = sum_{k+j=n} a_k b_j."""
    n, m = a.shape[0], b.shape[0]
    if n == 0 or m == 0:
        return np.zeros((0, 4), dtype=np.float64)
    out = np.zeros((n + m - 1, 4), dtype=np.float64)
    for k in range(n):
        out[k:k + m] += qmul(np.broadcast_to(a[k], (m, 4)), b)
    return out


def aberth(coeffs, z0, tol, maxiter):
    """Aberth-Ehrlich simultaneous iteration.

    ``coeffs`` is complex, indexed by power, with a nonzero leading entry.
    Returns the final approximations and the number of sweeps used.
    """
    z = np.array(z0, dtype=np.complex128)
    n = z.shape[0]
    deg = coeffs.shape[0] - 1
    active = np.ones(n, dtype=bool)
    it = 0
    for it in range(1, maxiter + 1):
        zi = z[active]
        p = np.full(zi.shape, coeffs[deg], dtype=np.complex128)
        dp = np.zeros(zi.shape, dtype=np.complex128)
        for k in range(deg - 1, -1, -1):
            dp = dp * zi + p
            p = p * zi + coeffs[k]
        diff = zi[:, None] - z[None, :]
        idx = np.nonzero(active)[0]
        diff[np.arange(idx.size), idx] = 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            s = (1.0 / diff).sum(axis=1) - 1.0
            w = p / dp
            corr = w / (1.0 - w * s)
        bad = ~np.isfinite(corr)
        if bad.any():
            corr[bad] = 1e-8 * (1.0 + np.abs(zi[bad])) * np.exp(0.7j * it)
        z[idx] = zi - corr
        done = np.abs(corr) <= tol * (1.0 + np.abs(z[idx]))
        done &= ~bad
        active[idx[done]] = False
        if not active.any():
            break
    return z, it
