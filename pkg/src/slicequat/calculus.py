"""Derivatives and second-order operators of slice functions.

Finite-difference operators act on a slice ``C_I`` through the point
``q = alpha + I beta``: ``d_1`` differentiates in ``alpha`` and ``d_I`` in
``beta``. With that notation

* ``d_* f  = (d_1 f - I d_I f) / 2``
* ``dbar_* f = (d_1 f + I d_I f) / 2``
* ``Lap_* f = 4 d_* dbar_* f = d_1^2 f + d_I^2 f``

and ``Lap'`` and ``Lap''`` are ``Lap_*`` applied to ``Tr(f)/2`` and to
``N(f)`` respectively.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, NotHarmonicError
from .quaternion import (
    Quaternion,
    as_quaternion,
    rotate,
    to_slice,
)
from .slicefunc import (
    SlicePolynomial,
    StemEvaluator,
    StemPolynomial,
    evaluate_many,
    stem_of_poly,
)

OPERATORS = ("dstar", "dbarstar", "lapstar", "lapprime", "lapsecond", "G")


def default_step(q):
    """``h = 1e-4 (1 + |q|)``."""
    return 1e-4 * (1.0 + as_quaternion(q).norm())


def cullen_derivative(f):
    """Slice derivative of a polynomial: ``sum k q^(k-1) a_k``."""
    c = f.coeffs
    if c.shape[0] <= 1:
        return SlicePolynomial()
    k = np.arange(1, c.shape[0], dtype=np.float64)[:, None]
    return SlicePolynomial(c[1:] * k)


# ---------------------------------------------------------------------------
# slice-local sampling


def _as_stem(fn):
    if isinstance(fn, StemEvaluator):
        return fn
    if isinstance(fn, StemPolynomial):
        return fn.evaluator()
    if isinstance(fn, SlicePolynomial):
        return stem_of_poly(fn)
    return None


def _sampler(fn, q):
    """Return ``(I, g)`` where ``g(s, t)`` evaluates ``fn`` at ``(alpha+s) + I (beta+t)``."""
    alpha, beta, I = to_slice(q)
    stem = _as_stem(fn)
    if stem is not None:
        def g(s, t):
            return stem.eval_on_slice(alpha + np.asarray(s), beta + np.asarray(t), I)
        return I, g
    if beta == 0.0:
        raise DomainError("finite-difference operators on raw functions need a non-real point")
    Iq = np.asarray(I)

    def g(s, t):
        s = np.asarray(s, dtype=np.float64)
        t = np.asarray(t, dtype=np.float64)
        pts = np.zeros(s.shape + (4,))
        pts[..., 0] = alpha + s
        pts += (beta + t)[..., None] * Iq
        return evaluate_many(fn, pts)

    return I, g


def _check_h(h, q):
    if h is None:
        return default_step(q)
    h = float(h)
    if not h > 0.0:
        raise DomainError("step h must be positive")
    return h


def _partials(fn, q, h):
    """Central differences ``(I, d_1 f, d_I f)`` at ``q``."""
    h = _check_h(h, q)
    I, g = _sampler(fn, q)
    v = g(np.array([h, -h, 0.0, 0.0]), np.array([0.0, 0.0, h, -h]))
    d1 = (v[0] - v[1]) / (2 * h)
    dI = (v[2] - v[3]) / (2 * h)
    return I, Quaternion.from_array(d1), Quaternion.from_array(dI)


def dstar_numeric(stem, q, h=None):
    """``d_* f (q)`` by central differences on the slice of ``q``.

    ``stem`` may be a StemEvaluator, StemPolynomial, SlicePolynomial or a
    raw callable. Raw callables are rejected at real points.
    """
    I, d1, dI = _partials(stem, q, h)
    return 0.5 * (d1 - I * dI)


def dbarstar_numeric(stem, q, h=None):
    """``dbar_* f (q)`` by central differences; zero on regular functions."""
    I, d1, dI = _partials(stem, q, h)
    return 0.5 * (d1 + I * dI)


def d1_numeric(stem, q, h=None):
    """Plain ``d f / d alpha`` on the slice of ``q``."""
    return _partials(stem, q, h)[1]


def laplace_star(stem, q, h=None):
    """``Lap_* f (q)``: 5-point Laplacian on the slice of ``q``.

    Declared-holomorphic stems and polynomials return exact zero.
    """
    if isinstance(stem, SlicePolynomial):
        return Quaternion()
    s = _as_stem(stem)
    if s is not None and s.declared_holomorphic:
        return Quaternion()
    h = _check_h(h, q)
    _, g = _sampler(stem, q)
    v = g(np.array([h, -h, 0.0, 0.0, 0.0]), np.array([0.0, 0.0, h, -h, 0.0]))
    lap = (v[0] + v[1] + v[2] + v[3] - 4.0 * v[4]) / (h * h)
    return Quaternion.from_array(lap)


# ---------------------------------------------------------------------------
# rotations


def rotation_average(f):
    """Keep the real parts of the coefficients: ``sum q^k Re(a_k)``."""
    c = np.zeros_like(f.coeffs)
    c[:, 0] = f.coeffs[:, 0]
    return SlicePolynomial(c)


def rotate_function(w, f):
    """``R_w f = S_w^{-1} o f o S_w``; coefficients ``a_k -> w a_k w^{-1}``."""
    w = as_quaternion(w)
    wa = np.asarray(w)
    winv = np.asarray(w.inverse())
    return SlicePolynomial(kernels.qmul(kernels.qmul(wa, f.coeffs), winv))


OCTAHEDRAL_UNITS = (
    (1.0, 0.0, 0.0), (-1.0, 0.0, 0.0),
    (0.0, 1.0, 0.0), (0.0, -1.0, 0.0),
    (0.0, 0.0, 1.0), (0.0, 0.0, -1.0),
)


def octahedral_average_S(q):
    """Equal-weight average of ``S_w(q)`` over ``w`` in {+-i, +-j, +-k}.

    The map ``w -> S_w(q)`` is quadratic in ``w``, and this 6-point rule
    integrates quadratics on the unit sphere exactly, so the result is
    the average over the uniform measure. It equals ``Re(q) - Im(q)/3``.
    """
    q = as_quaternion(q)
    acc = np.zeros(4)
    for u in OCTAHEDRAL_UNITS:
        acc += np.asarray(rotate(Quaternion(0.0, *u), q))
    return Quaternion.from_array(acc / 6.0)


def octahedral_average_R(f):
    """Equal-weight average of ``R_w f`` over ``w`` in {+-i, +-j, +-k}."""
    acc = np.zeros_like(f.coeffs)
    for u in OCTAHEDRAL_UNITS:
        acc = acc + rotate_function(Quaternion(0.0, *u), f).coeffs
    return SlicePolynomial(acc / 6.0)


# unit quaternions {+-1, +-i, +-j, +-k}: a spherical 3-design on S^3
_CROSS_POLYTOPE = tuple(
    tuple(s * (1.0 if i == j else 0.0) for j in range(4)) for i in range(4) for s in (1.0, -1.0)
)


def haar_average_S(q):
    """Average of ``w^{-1} q w`` over all unit quaternions ``w`` (Haar).

    Computed with the 8 points {+-1, +-i, +-j, +-k}, exact for the
    quadratic integrand. Returns ``Re(q)``.
    """
    q = as_quaternion(q)
    acc = np.zeros(4)
    for u in _CROSS_POLYTOPE:
        acc += np.asarray(rotate(Quaternion(*u), q))
    return Quaternion.from_array(acc / 8.0)


# ---------------------------------------------------------------------------
# Lap', Lap''


def delta_prime(stem_f, q, h=None):
    """``Lap' f (q) = Lap_*(Tr(f)/2)(q)``.

    Polynomials give exact zero. The conjugate stem is derived from
    ``stem_f`` by conjugating both components.
    """
    if isinstance(stem_f, SlicePolynomial):
        return Quaternion()
    s = _as_stem(stem_f)
    if s is None:
        raise DomainError("delta_prime needs a stem (the trace is a stem-level operation)")
    if s.declared_holomorphic:
        return Quaternion()
    return laplace_star(s.trace(), q, h) * 0.5


def delta_second(f, q, h=None):
    """``Lap'' f (q) = Lap_*(N(f))(q)`` with ``N(f) = f * f^c``.

    Zero for polynomials; for stems the normal is formed at stem level.
    """
    if isinstance(f, SlicePolynomial):
        # N(f) is again a polynomial, hence regular
        return Quaternion()
    s = _as_stem(f)
    if s is None:
        raise DomainError("delta_second needs a stem or a polynomial")
    if s.declared_holomorphic:
        return Quaternion()
    return laplace_star(s.normal(), q, h)


# ---------------------------------------------------------------------------
# G operator


def apply_G(fn, q, h=None):
    """Finite-difference evaluation of the first-order operator

    ``G = (x1^2+x2^2+x3^2) d/dx0 + (x1 i + x2 j + x3 k) sum_j x_j d/dx_j``

    in the four real coordinates of ``q``. ``fn`` is any evaluable.
    """
    q = as_quaternion(q)
    h = _check_h(h, q)
    base = np.asarray(q)
    # fourth-order central differences along each coordinate
    offs = np.array([2.0, 1.0, -1.0, -2.0]) * h
    pts = np.repeat(base[None, None, :], 4, axis=0).repeat(4, axis=1)
    for d in range(4):
        pts[d, :, d] += offs
    v = evaluate_many(fn, pts.reshape(-1, 4)).reshape(4, 4, 4)
    grad = (-v[:, 0] + 8.0 * v[:, 1] - 8.0 * v[:, 2] + v[:, 3]) / (12.0 * h)
    x1, x2, x3 = base[1:]
    radial = x1 * grad[1] + x2 * grad[2] + x3 * grad[3]
    out = (x1 * x1 + x2 * x2 + x3 * x3) * grad[0] + kernels.qmul(np.array([0.0, x1, x2, x3]), radial)
    return Quaternion.from_array(out)


def gbar_g_check(stem, q):
    """Experimental comparison for the composite ``Gbar G``.

    With ``G := y^2 dbar_*`` and ``Gbar := y^2 d_*`` (``y = |Im q|``) this
    evaluates ``Gbar G f`` exactly and the expression
    ``y^4 Lap_* f - 2 I y^3 dbar_* f``. ``stem`` must be a StemPolynomial
    (or a SlicePolynomial). Returns ``(lhs, rhs)``.
    """
    if isinstance(stem, SlicePolynomial):
        stem = StemPolynomial.from_slice_poly(stem)
    # y^2 = -(z - zbar)^2 / 4
    c = np.zeros((3, 3, 4))
    c[2, 0, 0] = -0.25
    c[1, 1, 0] = 0.5
    c[0, 2, 0] = -0.25
    y2 = StemPolynomial(c)
    Gf = y2.product(stem.dzbar())
    lhs_stem = y2.product(Gf.dz())
    lhs = lhs_stem(q)
    _, y, I = to_slice(q)
    rhs = (y ** 4) * stem.laplacian()(q) - (2.0 * y ** 3) * (I * stem.dzbar()(q))
    return lhs, rhs


# ---------------------------------------------------------------------------
# harmonic polynomials


def _re_zk(k):
    """Coefficient array ``P[i, j]`` (of ``a^i b^j``) of ``Re((a+ib)^k)``."""
    P = np.zeros((k + 1, k + 1))
    for j in range(0, k + 1, 2):
        P[k - j, j] = math.comb(k, j) * (-1.0) ** (j // 2)
    return P


def bivariate_laplacian(P):
    """Exact Laplacian of ``sum P[i, j] a^i b^j`` as a coefficient array."""
    P = np.asarray(P, dtype=np.float64)
    out = np.zeros_like(P)
    n, m = P.shape
    for i in range(2, n):
        out[i - 2, :] += i * (i - 1) * P[i, :]
    for j in range(2, m):
        out[:, j - 2] += j * (j - 1) * P[:, j]
    return out


def bivariate_eval(P, a, b):
    P = np.asarray(P, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    out = np.zeros(np.broadcast(a, b).shape)
    for i in range(P.shape[0]):
        for j in range(P.shape[1]):
            if P[i, j] != 0.0:
                out = out + P[i, j] * a ** i * b ** j
    return out


def harmonic_conjugate_poly(P, tol=1e-12):
    """Slice-preserving polynomial ``f`` with ``Re f(a + I b) = P(a, b)``.

    ``P`` is a real coefficient array with ``P[i, j]`` the coefficient of
    ``a^i b^j``. It must be harmonic and even in ``b``.
    """
    P = np.array(P, dtype=np.float64, ndmin=2)
    scale = max(np.max(np.abs(P)), 1.0)
    if np.max(np.abs(bivariate_laplacian(P))) > tol * scale:
        raise NotHarmonicError("input polynomial is not harmonic")
    deg = max((i + j for i, j in zip(*np.nonzero(P))), default=0)
    n = max(deg + 1, *P.shape)
    rem = np.zeros((n, n))
    rem[: P.shape[0], : P.shape[1]] = P
    coeffs = np.zeros(deg + 1)
    for k in range(deg, -1, -1):
        ck = rem[k, 0]
        coeffs[k] = ck
        if ck != 0.0:
            rem[: k + 1, : k + 1] -= ck * _re_zk(k)
    if np.max(np.abs(rem)) > tol * scale:
        raise DomainError("harmonic input is not the real part of a slice-preserving polynomial")
    return SlicePolynomial.from_real(coeffs)


# ---------------------------------------------------------------------------
# product rule for Lap''


def product_rule_terms(F, G, q, h=None):
    """Evaluate both sides of the product rule for ``Lap''(f * g)`` at ``q``.

    Returns a dict with ``lhs`` (``Lap''(f*g)``), ``rhs_literal``
    (``f^s Lap'' g + Lap'' f g^s + d_* f^s dbar_* g^s + dbar_* f^s d_* g^s``)
    and ``rhs_corrected`` (the same with the cross terms multiplied by 4,
    as the Leibniz rule ``Lap(uv) = u Lap v + v Lap u + 4(du dbar v + dbar u dv)``
    for ``Lap = 4 d dbar`` gives). All factors on the right are
    slice-preserving, so slice products there are pointwise.
    """
    F = _as_stem(F)
    G = _as_stem(G)
    h = _check_h(h, q)
    fs = F.symmetrization()
    gs = G.symmetrization()
    lhs = laplace_star(F.product(G).normal(), q, h)
    fs_q, gs_q = fs(q), gs(q)
    lap_f = laplace_star(F.normal(), q, h)
    lap_g = laplace_star(G.normal(), q, h)
    cross = dstar_numeric(fs, q, h) * dbarstar_numeric(gs, q, h) + dbarstar_numeric(fs, q, h) * dstar_numeric(gs, q, h)
    base = fs_q * lap_g + lap_f * gs_q
    return {
        "lhs": lhs,
        "rhs_literal": base + cross,
        "rhs_corrected": base + 4.0 * cross,
    }


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class SliceDifferentialReport:
    operator_name: str
    value: Quaternion
    method: str
    step: float

    def __post_init__(self):
        if self.operator_name not in OPERATORS:
            raise ValueError(f"unknown operator {self.operator_name!r}")
        if self.method not in ("exact_poly", "finite_difference"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "exact_poly" and self.step != 0.0:
            raise ValueError("exact evaluations carry step 0")

    def to_json(self):
        return {
            "operator_name": self.operator_name,
            "value": self.value.to_json(),
            "method": self.method,
            "step": self.step,
        }


def differential_report(operator_name, f, q, h=None):
    """Evaluate one operator; exact when ``f`` is a polynomial or stem polynomial."""
    q = as_quaternion(q)
    sp = None
    if isinstance(f, SlicePolynomial):
        sp = StemPolynomial.from_slice_poly(f)
    elif isinstance(f, StemPolynomial):
        sp = f
    if sp is not None and operator_name != "G":
        if operator_name == "dstar":
            val = sp.dz()(q)
        elif operator_name == "dbarstar":
            val = sp.dzbar()(q)
        elif operator_name == "lapstar":
            val = sp.laplacian()(q)
        elif operator_name == "lapprime":
            val = (sp + sp.conj()).laplacian()(q) * 0.5
        elif operator_name == "lapsecond":
            val = sp.product(sp.conj()).laplacian()(q)
        else:
            raise ValueError(f"unknown operator {operator_name!r}")
        return SliceDifferentialReport(operator_name, val, "exact_poly", 0.0)
    h = _check_h(h, q)
    fn = {
        "dstar": dstar_numeric,
        "dbarstar": dbarstar_numeric,
        "lapstar": laplace_star,
        "lapprime": delta_prime,
        "lapsecond": delta_second,
        "G": apply_G,
    }[operator_name]
    target = f.evaluator() if isinstance(f, StemPolynomial) and operator_name == "G" else f
    return SliceDifferentialReport(operator_name, fn(target, q, h), "finite_difference", h)
