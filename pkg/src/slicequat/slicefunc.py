"""Slice functions: polynomials with right coefficients, stem evaluators,
exact stem polynomials and semi-regular quotients.

Anything that can be evaluated at a quaternion is called an *evaluable*
here: :class:`SlicePolynomial`, :class:`StemEvaluator`, :class:`SemiRegular`
and plain callables ``Quaternion -> Quaternion`` all qualify. Use
:func:`evaluate_many` to evaluate one at a batch of points.
"""
import json

import numpy as np

from . import kernels
from .errors import DomainError, SingularityError
from .quaternion import (
    ImaginaryUnit,
    Quaternion,
    as_quaternion,
    to_slice,
    to_slice_arrays,
)


def _coeff_array(coeffs):
    if isinstance(coeffs, SlicePolynomial):
        return coeffs.coeffs
    rows = []
    for c in coeffs:
        if isinstance(c, (int, float, np.floating, np.integer)):
            rows.append((float(c), 0.0, 0.0, 0.0))
        else:
            rows.append(tuple(np.asarray(c, dtype=np.float64).reshape(4)))
    return np.array(rows, dtype=np.float64).reshape(-1, 4)


class SlicePolynomial:
    """``f(q) = sum_k q^k a_k`` with quaternion coefficients on the right.

    ``coeffs`` may be a sequence of Quaternions, 4-sequences or real
    numbers indexed by power. Trailing zero coefficients are dropped, so
    the zero polynomial has an empty coefficient array.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        arr = _coeff_array(coeffs)
        nz = np.nonzero(np.any(arr != 0.0, axis=1))[0]
        arr = arr[: nz[-1] + 1] if nz.size else arr[:0]
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("SlicePolynomial is immutable")

    # construction helpers
    @classmethod
    def monomial(cls, k, coeff=1.0):
        c = np.zeros((k + 1, 4))
        c[k] = np.asarray(as_quaternion(coeff))
        return cls(c)

    @classmethod
    def linear(cls, root):
        """``q - root``."""
        r = as_quaternion(root)
        return cls([-r, 1.0])

    @classmethod
    def from_real(cls, coeffs):
        return cls([float(c) for c in coeffs])

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, list):
            raise ValueError("polynomial JSON must be a list of [w,x,y,z] entries")
        rows = []
        for i, entry in enumerate(data):
            if not isinstance(entry, (list, tuple)) or len(entry) != 4:
                raise ValueError(f"coefficient {i}: expected [w,x,y,z]")
            rows.append([float(v) for v in entry])
        return cls(rows)

    def to_json(self):
        return [[float(v) for v in row] for row in self.coeffs]

    # basic properties
    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return self.coeffs.shape[0] - 1

    def is_zero(self):
        return self.coeffs.shape[0] == 0

    def is_real(self, tol=0.0):
        """True if every coefficient is real (slice-preserving)."""
        if self.is_zero():
            return True
        return bool(np.all(np.abs(self.coeffs[:, 1:]) <= tol * self.scale()))

    def scale(self):
        """Largest coefficient norm (0 for the zero polynomial)."""
        if self.is_zero():
            return 0.0
        return float(np.max(kernels.qnorm(self.coeffs)))

    def coeff(self, k):
        if 0 <= k <= self.degree:
            return Quaternion.from_array(self.coeffs[k])
        return Quaternion()

    def __len__(self):
        return self.coeffs.shape[0]

    def __repr__(self):
        return f"SlicePolynomial({self.to_json()!r})"

    def __eq__(self, other):
        if not isinstance(other, SlicePolynomial):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(
            np.all(self.coeffs == other.coeffs)
        )

    __hash__ = None

    def allclose(self, other, tol=1e-12):
        a, b = _pad(self.coeffs, other.coeffs)
        return bool(np.all(np.abs(a - b) <= tol))

    # evaluation
    def __call__(self, q):
        return eval_poly(self, q)

    def eval_array(self, points):
        return kernels.poly_eval(self.coeffs, points)

    # algebra
    def __add__(self, other):
        other = _as_poly(other)
        a, b = _pad(self.coeffs, other.coeffs)
        return SlicePolynomial(a + b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        a, b = _pad(self.coeffs, other.coeffs)
        return SlicePolynomial(a - b)

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __neg__(self):
        return SlicePolynomial(-self.coeffs)

    def __mul__(self, other):
        """Slice product for polynomials; real scalars scale."""
        if isinstance(other, (int, float, np.floating, np.integer)):
            return SlicePolynomial(self.coeffs * float(other))
        return slice_product(self, _as_poly(other))

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return SlicePolynomial(self.coeffs * float(other))
        return slice_product(_as_poly(other), self)

    def __pow__(self, n):
        out = SlicePolynomial([1.0])
        for _ in range(int(n)):
            out = slice_product(out, self)
        return out

    def right_scale(self, c):
        """Multiply every coefficient on the right by the quaternion ``c``."""
        c = np.asarray(as_quaternion(c))
        return SlicePolynomial(kernels.qmul(self.coeffs, c))

    def left_scale(self, c):
        """Multiply every coefficient on the left by ``c``.

        Equals the slice product ``c * f`` for a constant ``c``.
        """
        c = np.asarray(as_quaternion(c))
        return SlicePolynomial(kernels.qmul(c, self.coeffs))

    def conj(self):
        return conjugate(self)

    def stem(self):
        return stem_of_poly(self)


def _as_poly(x):
    if isinstance(x, SlicePolynomial):
        return x
    if isinstance(x, (int, float, np.floating, np.integer, Quaternion)):
        return SlicePolynomial([x])
    return SlicePolynomial(x)


def _pad(a, b):
    n = max(a.shape[0], b.shape[0])
    pa = np.zeros((n, 4))
    pb = np.zeros((n, 4))
    pa[: a.shape[0]] = a
    pb[: b.shape[0]] = b
    return pa, pb


def eval_poly(f, q):
    """Horner evaluation of ``sum q^k a_k`` at a single quaternion."""
    q = as_quaternion(q)
    c = f.coeffs
    if c.shape[0] == 0:
        return Quaternion()
    acc = Quaternion.from_array(c[-1])
    for k in range(c.shape[0] - 2, -1, -1):
        acc = q * acc + Quaternion.from_array(c[k])
    return acc


def slice_product(f, g):
    """Ordered coefficient convolution ``f * g``."""
    f, g = _as_poly(f), _as_poly(g)
    if f.is_zero() or g.is_zero():
        return SlicePolynomial()
    return SlicePolynomial(kernels.convolve(f.coeffs, g.coeffs))


def conjugate(f):
    """``f^c``: conjugate every coefficient."""
    return SlicePolynomial(kernels.qconj(f.coeffs))


def _force_real(p):
    c = np.array(p.coeffs)
    c[:, 1:] = 0.0
    return SlicePolynomial(c)


def symmetrization(f):
    """``f^s = f^c * f``, truncated to exactly real coefficients."""
    return _force_real(slice_product(conjugate(f), f))


def normal(f):
    """``N(f) = f * f^c``; coincides with ``f^s`` for polynomials."""
    return _force_real(slice_product(f, conjugate(f)))


def trace(f):
    """``Tr(f) = f + f^c``: coefficients ``2 Re(a_k)``."""
    c = np.zeros_like(f.coeffs)
    c[:, 0] = 2.0 * f.coeffs[:, 0]
    return SlicePolynomial(c)


def eps_zero(q, deg):
    """Pole threshold ``1e-10 (1+|q|)^deg``."""
    return 1e-10 * (1.0 + as_quaternion(q).norm()) ** max(deg, 0)


def reciprocal_eval(f, q):
    """Slice reciprocal ``f^{-*}(q) = f^s(q)^{-1} f^c(q)``."""
    q = as_quaternion(q)
    fs = symmetrization(f)
    den = eval_poly(fs, q)
    if den.norm() <= eps_zero(q, fs.degree):
        c = to_slice(q)
        raise SingularityError(
            f"slice reciprocal has a pole on the sphere alpha={c.alpha!r}, beta={c.beta!r}",
            sphere=(c.alpha, c.beta),
        )
    return den.inverse() * eval_poly(conjugate(f), q)


def representation_eval(fI_plus, fI_minus, I, J):
    """Value ``f(x+yJ)`` from ``f(x+yI)`` and ``f(x-yI)``."""
    I, J = as_quaternion(I), as_quaternion(J)
    JI = J * I
    return (1.0 - JI) * 0.5 * as_quaternion(fI_plus) + (1.0 + JI) * 0.5 * as_quaternion(fI_minus)


# ---------------------------------------------------------------------------
# stem functions


def _as_qarray(v, shape):
    v = np.asarray(v, dtype=np.float64)
    if v.shape[len(v.shape) - 1:] != (4,) or v.shape == tuple(shape):
        # a real-valued component: embed as the real quaternion part
        out = np.zeros(np.shape(v) + (4,))
        out[..., 0] = v
        v = out
    return np.broadcast_to(v, shape + (4,))


class StemEvaluator:
    """A stem function ``F = F1 + F2 i`` given by two vectorized maps.

    ``F1(a, b)`` and ``F2(a, b)`` receive float arrays of equal shape and
    return quaternion arrays of shape ``a.shape + (4,)`` (real-valued
    arrays of shape ``a.shape`` are accepted and embedded). The induced
    slice function is ``f(alpha + I beta) = F1(alpha, beta) + I F2(alpha, beta)``.

    ``domain`` is an optional predicate ``(a, b) -> bool array``; when it
    is omitted the stem is defined on the whole plane.
    """

    def __init__(self, F1, F2, declared_holomorphic=False, domain=None, name=None):
        self.F1 = F1
        self.F2 = F2
        self.declared_holomorphic = bool(declared_holomorphic)
        self.domain = domain
        self.name = name

    def __repr__(self):
        label = self.name or "anonymous"
        return f"StemEvaluator({label}, declared_holomorphic={self.declared_holomorphic})"

    # components
    def components(self, a, b):
        """Return ``(F1, F2)`` as quaternion arrays at the complex points ``a+ib``."""
        a = np.asarray(a, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        a, b = np.broadcast_arrays(a, b)
        return _as_qarray(self.F1(a, b), a.shape), _as_qarray(self.F2(a, b), a.shape)

    def in_domain(self, a, b):
        if self.domain is None:
            return np.ones(np.broadcast(np.asarray(a), np.asarray(b)).shape, dtype=bool)
        return np.asarray(self.domain(np.asarray(a, float), np.asarray(b, float)), dtype=bool)

    def __call__(self, q):
        return eval_slice(self, q)

    def eval_array(self, points):
        points = np.asarray(points, dtype=np.float64)
        alpha, beta, axis = to_slice_arrays(points)
        if not np.all(self.in_domain(alpha, beta)):
            raise DomainError("some points lie outside the stem domain")
        f1, f2 = self.components(alpha, beta)
        axis_q = np.zeros(axis.shape[:-1] + (4,))
        axis_q[..., 1:] = axis
        return f1 + kernels.qmul(axis_q, f2)

    def eval_on_slice(self, a, b, I):
        """``F1(a,b) + I F2(a,b)`` for a fixed unit ``I`` and arrays ``a``, ``b``.

        Unlike :meth:`eval_array` this allows ``b < 0``.
        """
        f1, f2 = self.components(a, b)
        Iq = np.asarray(as_quaternion(I))
        return f1 + kernels.qmul(Iq, f2)

    def check_symmetry(self, n=32, seed=0, radius=1.0, tol=1e-10):
        """Sample ``F1(conj z) = F1(z)`` and ``F2(conj z) = -F2(z)``.

        Returns the worst absolute defect; raises DomainError if it exceeds ``tol``.
        """
        rng = np.random.default_rng(seed)
        a = rng.uniform(-radius, radius, n)
        b = rng.uniform(0.0, radius, n)
        keep = self.in_domain(a, b) & self.in_domain(a, -b)
        a, b = a[keep], b[keep]
        p1, p2 = self.components(a, b)
        m1, m2 = self.components(a, -b)
        scale = 1.0 + max(np.max(np.abs(p1), initial=0.0), np.max(np.abs(p2), initial=0.0))
        err = max(np.max(np.abs(p1 - m1), initial=0.0), np.max(np.abs(p2 + m2), initial=0.0))
        if err > tol * scale:
            raise DomainError(f"stem symmetry violated (defect {err:.3g})")
        return float(err)

    # stem-level algebra
    def conj(self):
        """Stem of ``f^c``: conjugate both components."""
        F1, F2 = self.F1, self.F2
        return StemEvaluator(
            lambda a, b: kernels.qconj(_as_qarray(F1(a, b), np.shape(a))),
            lambda a, b: kernels.qconj(_as_qarray(F2(a, b), np.shape(a))),
            declared_holomorphic=self.declared_holomorphic,
            domain=self.domain,
            name=f"conj({self.name})" if self.name else None,
        )

    def product(self, other):
        """Stem of the slice product: ``(F1 G1 - F2 G2) + (F1 G2 + F2 G1) i``."""
        s, o = self, other

        def P1(a, b):
            f1, f2 = s.components(a, b)
            g1, g2 = o.components(a, b)
            return kernels.qmul(f1, g1) - kernels.qmul(f2, g2)

        def P2(a, b):
            f1, f2 = s.components(a, b)
            g1, g2 = o.components(a, b)
            return kernels.qmul(f1, g2) + kernels.qmul(f2, g1)

        return StemEvaluator(
            P1, P2,
            declared_holomorphic=s.declared_holomorphic and o.declared_holomorphic,
            domain=_and_domain(s.domain, o.domain),
        )

    __mul__ = product

    def __add__(self, other):
        s, o = self, other
        return StemEvaluator(
            lambda a, b: s.components(a, b)[0] + o.components(a, b)[0],
            lambda a, b: s.components(a, b)[1] + o.components(a, b)[1],
            declared_holomorphic=s.declared_holomorphic and o.declared_holomorphic,
            domain=_and_domain(s.domain, o.domain),
        )

    def scaled(self, c):
        """Real multiple of the stem."""
        s, c = self, float(c)
        return StemEvaluator(
            lambda a, b: c * s.components(a, b)[0],
            lambda a, b: c * s.components(a, b)[1],
            declared_holomorphic=s.declared_holomorphic,
            domain=s.domain,
        )

    def trace(self):
        """Stem of ``Tr(f) = f + f^c``."""
        return self + self.conj()

    def normal(self):
        """Stem of ``N(f) = f * f^c``."""
        return self.product(self.conj())

    def symmetrization(self):
        """Stem of ``f^s = f^c * f``."""
        return self.conj().product(self)

    @classmethod
    def from_real(cls, F1, F2=None, declared_holomorphic=False, domain=None, name=None):
        """Stem with real-valued components (a slice-preserving function)."""
        if F2 is None:
            F2 = lambda a, b: np.zeros(np.shape(a))  # noqa: E731
        return cls(F1, F2, declared_holomorphic=declared_holomorphic, domain=domain, name=name)

    @classmethod
    def constant(cls, c):
        c = np.asarray(as_quaternion(c))
        return cls(
            lambda a, b: np.broadcast_to(c, np.shape(a) + (4,)),
            lambda a, b: np.zeros(np.shape(a) + (4,)),
            declared_holomorphic=True,
            name="constant",
        )


def _and_domain(d1, d2):
    if d1 is None:
        return d2
    if d2 is None:
        return d1
    return lambda a, b: np.logical_and(d1(a, b), d2(a, b))


def eval_slice(stem, q):
    """Evaluate the slice function induced by ``stem`` at ``q``."""
    alpha, beta, axis = to_slice(q)
    if not bool(np.all(stem.in_domain(alpha, beta))):
        raise DomainError(f"({alpha!r}, {beta!r}) lies outside the stem domain")
    f1, f2 = stem.components(np.array([alpha]), np.array([beta]))
    return Quaternion.from_array(f1[0]) + axis * Quaternion.from_array(f2[0])


def stem_of_poly(f):
    """Holomorphic stem of a polynomial: ``F = sum z^k (x) a_k``."""
    return StemPolynomial.from_slice_poly(f).evaluator()


def stem_from_slice(fn, I=None, declared_holomorphic=False, name=None):
    """Recover a stem from a slice function known through its values.

    Uses ``F1(z) = (f(z_I) + f(conj z_I)) / 2`` and
    ``F2(z) = -I (f(z_I) - f(conj z_I)) / 2`` on a fixed slice ``I``.
    """
    I = as_quaternion(I if I is not None else ImaginaryUnit(1.0, 0.0, 0.0))
    Iq = np.asarray(I)

    def _vals(a, b):
        a = np.asarray(a, float)
        b = np.asarray(b, float)
        pts_p = np.zeros(a.shape + (4,))
        pts_p[..., 0] = a
        pts_p += b[..., None] * Iq
        pts_m = pts_p.copy()
        pts_m[..., 1:] *= -1.0
        return evaluate_many(fn, pts_p), evaluate_many(fn, pts_m)

    def F1(a, b):
        vp, vm = _vals(a, b)
        return 0.5 * (vp + vm)

    def F2(a, b):
        vp, vm = _vals(a, b)
        return -0.5 * kernels.qmul(Iq, vp - vm)

    return StemEvaluator(F1, F2, declared_holomorphic=declared_holomorphic, name=name)


def evaluate_many(fn, points):
    """Evaluate an evaluable at every row of a (..., 4) array."""
    points = np.asarray(points, dtype=np.float64)
    if hasattr(fn, "eval_array"):
        return np.asarray(fn.eval_array(points), dtype=np.float64)
    flat = points.reshape(-1, 4)
    out = np.empty_like(flat)
    for i, p in enumerate(flat):
        out[i] = np.asarray(as_quaternion(fn(Quaternion.from_array(p))))
    return out.reshape(points.shape)


def evaluate(fn, q):
    """Evaluate an evaluable at a single quaternion."""
    return as_quaternion(fn(as_quaternion(q)))


class StemPolynomial:
    """Exact stem ``F(z) = sum_{j,k} z^j conj(z)^k (x) c_jk``.

    Coefficients ``c[j, k]`` are quaternions, so ``coeffs`` has shape
    ``(J, K, 4)``. The class supports the exact Wirtinger derivatives,
    the Laplacian, the stem product and conjugation, and converts to a
    :class:`StemEvaluator`. It serves as the exact reference for the
    finite-difference operators.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=np.float64)
        if c.ndim != 3 or c.shape[2] != 4:
            raise ValueError("stem coefficients need shape (J, K, 4)")
        # trim trailing zero rows/cols
        while c.shape[0] > 1 and not np.any(c[-1]):
            c = c[:-1]
        while c.shape[1] > 1 and not np.any(c[:, -1]):
            c = c[:, :-1]
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def from_slice_poly(cls, f):
        """Holomorphic stem ``sum z^k a_k``."""
        n = max(len(f), 1)
        c = np.zeros((n, 1, 4))
        c[: len(f), 0] = f.coeffs
        return cls(c)

    @classmethod
    def anti_regular(cls, f):
        """Stem ``sum conj(z)^k b_k``, inducing ``sum (q^c)^k b_k``."""
        n = max(len(f), 1)
        c = np.zeros((1, n, 4))
        c[0, : len(f)] = f.coeffs
        return cls(c)

    @classmethod
    def monomial(cls, j, k, coeff=1.0):
        c = np.zeros((j + 1, k + 1, 4))
        c[j, k] = np.asarray(as_quaternion(coeff))
        return cls(c)

    def __add__(self, other):
        J = max(self.coeffs.shape[0], other.coeffs.shape[0])
        K = max(self.coeffs.shape[1], other.coeffs.shape[1])
        c = np.zeros((J, K, 4))
        c[: self.coeffs.shape[0], : self.coeffs.shape[1]] += self.coeffs
        c[: other.coeffs.shape[0], : other.coeffs.shape[1]] += other.coeffs
        return StemPolynomial(c)

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def scaled(self, s):
        return StemPolynomial(self.coeffs * float(s))

    def conj(self):
        c = np.array(self.coeffs)
        c[..., 1:] *= -1.0
        return StemPolynomial(c)

    def product(self, other):
        """Stem product; complex scalars commute, quaternion parts keep order."""
        A, B = self.coeffs, other.coeffs
        c = np.zeros((A.shape[0] + B.shape[0] - 1, A.shape[1] + B.shape[1] - 1, 4))
        for j in range(A.shape[0]):
            for k in range(A.shape[1]):
                if not np.any(A[j, k]):
                    continue
                blk = kernels.qmul(A[j, k], B.reshape(-1, 4)).reshape(B.shape)
                c[j: j + B.shape[0], k: k + B.shape[1]] += blk
        return StemPolynomial(c)

    __mul__ = product

    def dz(self):
        """``dF/dz``, inducing ``d_* f``."""
        c = self.coeffs
        if c.shape[0] == 1:
            return StemPolynomial(np.zeros((1, c.shape[1], 4)))
        j = np.arange(1, c.shape[0])[:, None, None]
        return StemPolynomial(c[1:] * j)

    def dzbar(self):
        """``dF/d conj(z)``, inducing the conjugate operator."""
        c = self.coeffs
        if c.shape[1] == 1:
            return StemPolynomial(np.zeros((c.shape[0], 1, 4)))
        k = np.arange(1, c.shape[1])[None, :, None]
        return StemPolynomial(c[:, 1:] * k)

    def laplacian(self):
        """``4 d^2F/(dz d conj z)``."""
        return self.dz().dzbar().scaled(4.0)

    def is_holomorphic(self):
        return not np.any(self.coeffs[:, 1:])

    def complex_parts(self, a, b):
        """Return ``(F1, F2)`` arrays at ``a + ib``."""
        a = np.asarray(a, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        a, b = np.broadcast_arrays(a, b)
        z = a + 1j * b
        zb = np.conj(z)
        J, K = self.coeffs.shape[:2]
        zp = np.stack([z ** j for j in range(J)], axis=-1)
        zbp = np.stack([zb ** k for k in range(K)], axis=-1)
        mon = zp[..., :, None] * zbp[..., None, :]
        F1 = np.einsum("...jk,jkc->...c", mon.real, self.coeffs)
        F2 = np.einsum("...jk,jkc->...c", mon.imag, self.coeffs)
        return F1, F2

    def evaluator(self, name=None, declared_holomorphic=None):
        """Wrap as a :class:`StemEvaluator`; pass ``declared_holomorphic=False``
        to force finite differences on a holomorphic stem."""
        if declared_holomorphic is None:
            declared_holomorphic = self.is_holomorphic()
        return StemEvaluator(
            lambda a, b: self.complex_parts(a, b)[0],
            lambda a, b: self.complex_parts(a, b)[1],
            declared_holomorphic=declared_holomorphic,
            name=name or "stem polynomial",
        )

    def __call__(self, q):
        return eval_slice(self.evaluator(), q)

    def eval_array(self, points):
        return self.evaluator().eval_array(points)

    def to_slice_poly(self):
        """Return the polynomial when the stem is holomorphic."""
        if not self.is_holomorphic():
            raise ValueError("stem is not holomorphic")
        return SlicePolynomial(self.coeffs[:, 0])


# ---------------------------------------------------------------------------
# semi-regular quotients


class SemiRegular:
    """The quotient ``g^{-*} * h`` of two polynomials (``denom`` g, ``numer`` h)."""

    __slots__ = ("denom", "numer", "_gs", "_gch")

    def __init__(self, denom, numer):
        denom = _as_poly(denom)
        numer = _as_poly(numer)
        if denom.is_zero():
            raise DomainError("denominator of a semi-regular function cannot be zero")
        self.denom = denom
        self.numer = numer
        self._gs = symmetrization(denom)
        self._gch = slice_product(conjugate(denom), numer)

    @classmethod
    def from_poly(cls, f):
        return cls(SlicePolynomial([1.0]), f)

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or set(data) != {"denom", "numer"}:
            raise ValueError('semi-regular JSON must be {"denom": [...], "numer": [...]}')
        return cls(SlicePolynomial.from_json(data["denom"]), SlicePolynomial.from_json(data["numer"]))

    def to_json(self):
        return {"denom": self.denom.to_json(), "numer": self.numer.to_json()}

    def __repr__(self):
        return f"SemiRegular(denom={self.denom.to_json()!r}, numer={self.numer.to_json()!r})"

    @property
    def gs(self):
        return self._gs

    @property
    def gc_h(self):
        return self._gch

    def is_slice_preserving(self):
        return self.denom.is_real() and self.numer.is_real()

    def __call__(self, q):
        return eval_semiregular(self, q)

    def eval_array(self, points):
        points = np.asarray(points, dtype=np.float64)
        den = kernels.poly_eval(self._gs.coeffs, points)
        num = kernels.poly_eval(self._gch.coeffs, points)
        thr = 1e-10 * (1.0 + kernels.qnorm(points)) ** max(self._gs.degree, 0)
        if np.any(kernels.qnorm(den) <= thr):
            raise SingularityError("evaluation on a pole sphere")
        return kernels.qmul(kernels.qinv(den), num)


def eval_semiregular(F, q):
    """``(g^{-*} * h)(q) = g^s(q)^{-1} (g^c * h)(q)``."""
    q = as_quaternion(q)
    den = eval_poly(F.gs, q)
    if den.norm() <= eps_zero(q, F.gs.degree):
        c = to_slice(q)
        raise SingularityError(
            f"pole on the sphere alpha={c.alpha!r}, beta={c.beta!r}",
            sphere=(c.alpha, c.beta),
        )
    return den.inverse() * eval_poly(F.gc_h, q)


def eval_product_pointwise(factors, q):
    """Evaluate ``f_1 * f_2 * ... * f_n`` at ``q`` without forming the product.

    Uses ``(f*g)(q) = f(q) g(f(q)^{-1} q f(q))`` (and 0 when ``f(q) = 0``),
    folding from the left.
    """
    q = as_quaternion(q)
    acc = Quaternion(1.0)
    point = q
    for fn in factors:
        val = evaluate(fn, point)
        acc = acc * val
        if acc.norm() == 0.0:
            return Quaternion()
        point = acc.inverse() * q * acc
    return acc


def poly_value_sum(f, x, y, I):
    """``f(x+yI) + f(x-yI)``; independent of ``I`` for slice functions."""
    I = as_quaternion(I)
    return eval_poly(f, x + y * I) + eval_poly(f, x - y * I)

