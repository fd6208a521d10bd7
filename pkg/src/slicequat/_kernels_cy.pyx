# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Same contract as ``_kernels_py``."""
import numpy as np

from libc.math cimport fabs, isfinite, cos, sin


cdef inline void _mul(double a0, double a1, double a2, double a3,
                      double b0, double b1, double b2, double b3,
                      double* o) noexcept nogil:
    o[0] = a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3
    o[1] = a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2
    o[2] = a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1
    o[3] = a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0


def qmul(const double[:, ::1] a, const double[:, ::1] b):
    cdef Py_ssize_t n = a.shape[0], r
    out = np.empty((n, 4), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for r in range(n):
            _mul(a[r, 0], a[r, 1], a[r, 2], a[r, 3],
                 b[r, 0], b[r, 1], b[r, 2], b[r, 3], &o[r, 0])
    return out


def poly_eval(const double[:, ::1] coeffs, const double[:, ::1] points):
    cdef Py_ssize_t n = coeffs.shape[0], m = points.shape[0], r, k
    cdef double acc[4]
    cdef double tmp[4]
    out = np.zeros((m, 4), dtype=np.float64)
    cdef double[:, ::1] o = out
    if n == 0:
        return out
    with nogil:
        for r in range(m):
            acc[0] = coeffs[n - 1, 0]
            acc[1] = coeffs[n - 1, 1]
            acc[2] = coeffs[n - 1, 2]
            acc[3] = coeffs[n - 1, 3]
            for k in range(n - 2, -1, -1):
                _mul(points[r, 0], points[r, 1], points[r, 2], points[r, 3],
                     acc[0], acc[1], acc[2], acc[3], tmp)
                acc[0] = tmp[0] + coeffs[k, 0]
                acc[1] = tmp[1] + coeffs[k, 1]
                acc[2] = tmp[2] + coeffs[k, 2]
                acc[3] = tmp[3] + coeffs[k, 3]
            o[r, 0] = acc[0]
            o[r, 1] = acc[1]
            o[r, 2] = acc[2]
            o[r, 3] = acc[3]
    return out


def convolve(const double[:, ::1] a, const double[:, ::1] b):
    cdef Py_ssize_t n = a.shape[0], m = b.shape[0], k, j
    cdef double tmp[4]
    if n == 0 or m == 0:
        return np.zeros((0, 4), dtype=np.float64)
    out = np.zeros((n + m - 1, 4), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for k in range(n):
            for j in range(m):
                _mul(a[k, 0], a[k, 1], a[k, 2], a[k, 3],
                     b[j, 0], b[j, 1], b[j, 2], b[j, 3], tmp)
                o[k + j, 0] += tmp[0]
                o[k + j, 1] += tmp[1]
                o[k + j, 2] += tmp[2]
                o[k + j, 3] += tmp[3]
    return out


def aberth(const double complex[::1] coeffs, z0, double tol, int maxiter):
    cdef Py_ssize_t deg = coeffs.shape[0] - 1
    z_arr = np.array(z0, dtype=np.complex128)
    cdef double complex[::1] z = z_arr
    cdef Py_ssize_t n = z.shape[0], i, j, k
    active_arr = np.ones(n, dtype=np.uint8)
    cdef unsigned char[::1] active = active_arr
    cdef double complex p, dp, s, w, corr, zi
    cdef int it = 0, n_active
    cdef double mag
    with nogil:
        for it in range(1, maxiter + 1):
            n_active = 0
            for i in range(n):
                if not active[i]:
                    continue
                zi = z[i]
                p = coeffs[deg]
                dp = 0
                for k in range(deg - 1, -1, -1):
                    dp = dp * zi + p
                    p = p * zi + coeffs[k]
                s = 0
                for j in range(n):
                    if j != i:
                        s = s + 1.0 / (zi - z[j])
                w = p / dp
                corr = w / (1.0 - w * s)
                if not (isfinite(corr.real) and isfinite(corr.imag)):
                    mag = 1e-8 * (1.0 + abs(zi))
                    z[i] = zi - mag * (cos(0.7 * it) + 1j * sin(0.7 * it))
                    n_active += 1
                    continue
                z[i] = zi - corr
                if abs(corr) <= tol * (1.0 + abs(z[i])):
                    active[i] = 0
                else:
                    n_active += 1
            if n_active == 0:
                break
    return z_arr, it
