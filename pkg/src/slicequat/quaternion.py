"""Quaternion algebra, imaginary units, slice coordinates and the maps S_w.

Scalar values are :class:`Quaternion` instances; batches are float arrays
with a trailing axis of length 4 ordered (w, x, y, z).
"""
import math
from typing import NamedTuple

import numpy as np

from . import kernels


class Quaternion:
    """An immutable quaternion ``w + x i + y j + z k``."""

    __slots__ = ("_wxyz",)
    # numpy scalars on the left defer to the reflected operators here
    __array_ufunc__ = None

    def __init__(self, w=0.0, x=0.0, y=0.0, z=0.0):
        object.__setattr__(self, "_wxyz", (float(w), float(x), float(y), float(z)))

    def __setattr__(self, name, value):
        raise AttributeError("quaternions are immutable")

    @classmethod
    def from_array(cls, arr):
        w, x, y, z = np.asarray(arr, dtype=np.float64).reshape(4)
        return cls(w, x, y, z)

    @property
    def w(self):
        return self._wxyz[0]

    @property
    def x(self):
        return self._wxyz[1]

    @property
    def y(self):
        return self._wxyz[2]

    @property
    def z(self):
        return self._wxyz[3]

    @property
    def real(self):
        return self._wxyz[0]

    @property
    def imag(self):
        """Imaginary part as a quaternion with zero real part."""
        return Quaternion(0.0, *self._wxyz[1:])

    def array(self):
        return np.array(self._wxyz, dtype=np.float64)

    def __array__(self, dtype=None, copy=None):
        return np.array(self._wxyz, dtype=dtype or np.float64)

    def __iter__(self):
        return iter(self._wxyz)

    def __getitem__(self, i):
        return self._wxyz[i]

    def __len__(self):
        return 4

    def __hash__(self):
        return hash(self._wxyz)

    def __eq__(self, other):
        if isinstance(other, Quaternion):
            return self._wxyz == other._wxyz
        if isinstance(other, (int, float)):
            return self._wxyz == (float(other), 0.0, 0.0, 0.0)
        return NotImplemented

    def __repr__(self):
        return "Quaternion({!r}, {!r}, {!r}, {!r})".format(*self._wxyz)

    def __str__(self):
        w, x, y, z = self._wxyz
        return f"{w:+.6g} {x:+.6g}i {y:+.6g}j {z:+.6g}k"

    def __neg__(self):
        return Quaternion(*(-c for c in self._wxyz))

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Quaternion(*(a + b for a, b in zip(self._wxyz, o._wxyz)))

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Quaternion(*(a - b for a, b in zip(self._wxyz, o._wxyz)))

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Quaternion(*(c * other for c in self._wxyz))
        if not isinstance(other, Quaternion):
            return NotImplemented
        a0, a1, a2, a3 = self._wxyz
        b0, b1, b2, b3 = other._wxyz
        return Quaternion(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Quaternion(*(c * other for c in self._wxyz))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Quaternion(*(c / other for c in self._wxyz))
        return NotImplemented

    def conj(self):
        w, x, y, z = self._wxyz
        return Quaternion(w, -x, -y, -z)

    def norm2(self):
        return sum(c * c for c in self._wxyz)

    def norm(self):
        return math.sqrt(self.norm2())

    __abs__ = norm

    def inverse(self):
        n2 = self.norm2()
        if n2 == 0.0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        return self.conj() / n2

    def is_real(self, eps=None):
        if eps is None:
            eps = 1e-12 * max(1.0, self.norm())
        return math.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2) < eps

    def isclose(self, other, tol=1e-12):
        return (self - _coerce(other)).norm() <= tol

    def to_json(self):
        return list(self._wxyz)

    @classmethod
    def from_json(cls, data):
        if len(data) != 4:
            raise ValueError(f"quaternion needs 4 components, got {len(data)}")
        return cls(*data)


class ImaginaryUnit(Quaternion):
    """A purely imaginary unit quaternion, renormalized on construction."""

    __slots__ = ()

    def __init__(self, ux, uy, uz):
        n = math.sqrt(ux * ux + uy * uy + uz * uz)
        if n == 0.0 or not math.isfinite(n):
            raise ValueError("imaginary unit needs a nonzero finite direction")
        super().__init__(0.0, ux / n, uy / n, uz / n)

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr, dtype=np.float64).reshape(-1)
        if arr.size == 4:
            arr = arr[1:]
        return cls(*arr)

    @property
    def vector(self):
        return np.array(self._wxyz[1:], dtype=np.float64)

    def __neg__(self):
        return ImaginaryUnit(-self.x, -self.y, -self.z)

    def __repr__(self):
        return "ImaginaryUnit({!r}, {!r}, {!r})".format(*self._wxyz[1:])

    def to_json(self):
        return list(self._wxyz[1:])

    @classmethod
    def from_json(cls, data):
        if len(data) != 3:
            raise ValueError(f"imaginary unit needs 3 components, got {len(data)}")
        return cls(*data)


ONE = Quaternion(1.0)
ZERO = Quaternion()
UNIT_I = ImaginaryUnit(1.0, 0.0, 0.0)
UNIT_J = ImaginaryUnit(0.0, 1.0, 0.0)
UNIT_K = ImaginaryUnit(0.0, 0.0, 1.0)


def _coerce(value):
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float, np.floating, np.integer)):
        return Quaternion(float(value))
    return None


def as_quaternion(value):
    """Convert a scalar, 4-sequence or Quaternion to a Quaternion."""
    q = _coerce(value)
    if q is not None:
        return q
    return Quaternion.from_array(value)


class SliceCoords(NamedTuple):
    """``q = alpha + axis * beta`` with ``beta >= 0``."""

    alpha: float
    beta: float
    axis: ImaginaryUnit


def mul(p, q):
    return as_quaternion(p) * as_quaternion(q)


def to_slice(q):
    """Split ``q`` into ``alpha + I beta``; real points get the axis ``i``."""
    q = as_quaternion(q)
    beta = math.sqrt(q.x ** 2 + q.y ** 2 + q.z ** 2)
    if beta < 1e-12 * max(1.0, q.norm()):
        return SliceCoords(q.w, 0.0, UNIT_I)
    return SliceCoords(q.w, beta, ImaginaryUnit(q.x, q.y, q.z))


def from_slice(alpha, beta, axis):
    axis = as_quaternion(axis)
    return Quaternion(alpha, beta * axis.x, beta * axis.y, beta * axis.z)


def rotate(w, q):
    """The map S_w(q) = w^-1 q w. Orthogonal on R^4 and fixes the reals."""
    w = as_quaternion(w)
    return w.inverse() * as_quaternion(q) * w


def sample_unit_imaginary(rng_seed):
    """Draw one imaginary unit uniformly from the unit 2-sphere."""
    return ImaginaryUnit(*sample_unit_vectors(1, rng_seed)[0])


def sample_unit_vectors(n, rng):
    """``n`` uniform unit 3-vectors; ``rng`` is a seed or a numpy Generator."""
    rng = np.random.default_rng(rng)
    out = np.empty((n, 3))
    filled = 0
    while filled < n:
        v = rng.standard_normal((n - filled, 3))
        nv = np.linalg.norm(v, axis=1)
        ok = nv > 1e-8
        v = v[ok] / nv[ok, None]
        out[filled:filled + len(v)] = v
        filled += len(v)
    return out


# -- batch helpers -----------------------------------------------------------

def to_slice_arrays(points):
    """Vectorized :func:`to_slice`: returns (alpha, beta, axis) arrays."""
    points = np.asarray(points, dtype=np.float64)
    alpha = points[..., 0]
    im = points[..., 1:]
    beta = np.sqrt(np.einsum("...i,...i->...", im, im))
    scale = np.maximum(1.0, np.sqrt(alpha * alpha + beta * beta))
    real = beta < 1e-12 * scale
    safe = np.where(real, 1.0, beta)
    axis = im / safe[..., None]
    axis[real] = (1.0, 0.0, 0.0)
    beta = np.where(real, 0.0, beta)
    return alpha, beta, axis


def imaginary_array(vectors):
    """Embed 3-vectors as purely imaginary quaternion rows."""
    vectors = np.asarray(vectors, dtype=np.float64)
    out = np.zeros(vectors.shape[:-1] + (4,))
    out[..., 1:] = vectors
    return out


def rotate_array(w, q):
    w = np.asarray(w, dtype=np.float64)
    return kernels.qmul(kernels.qmul(kernels.qinv(w), q), w)
