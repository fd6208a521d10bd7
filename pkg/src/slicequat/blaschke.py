"""Blaschke factors on the ball of radius ``rho``, Blaschke factorization of
semi-regular functions, Jensen's formula and zero-counting bounds.

The factor ``B_{a,rho} = (rho^2 - q conj(a)) * (rho (q - a))^{-*}`` is stored
as the semi-regular pair ``(rho (q - a), rho^2 - q conj(a))``; the two
polynomials commute under ``*``, so the order in the definition does not
matter. Its slice reciprocal swaps the pair.
"""
import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BoundaryZeroError, DomainError, PreconditionError
from .quadrature import CircleRule, SphereMeasure
from .quaternion import Quaternion, as_quaternion, sample_unit_vectors
from .slicefunc import (
    SemiRegular,
    SlicePolynomial,
    conjugate,
    eval_product_pointwise,
    evaluate_many,
    slice_product,
    symmetrization,
)
from .zeros import (
    divisor_of_poly,
    divisor_semiregular,
    extract_right_factor,
    sup_modulus,
    zero_counts,
)

BOUNDARY_MARGIN = 1e-6


class BlaschkeFactor:
    """``B_{a,rho}`` (``exponent=+1``) or its slice reciprocal (``exponent=-1``)."""

    __slots__ = ("a", "rho", "exponent", "_sr")

    def __init__(self, a, rho, exponent=1):
        a = as_quaternion(a)
        rho = float(rho)
        if not rho > 0:
            raise DomainError("rho must be positive")
        if a.norm() >= rho * (1.0 - 1e-9):
            raise DomainError("the center must satisfy |a| < rho")
        if exponent not in (1, -1):
            raise ValueError("exponent must be +1 or -1")
        self.a = a
        self.rho = rho
        self.exponent = exponent
        lin = SlicePolynomial([-a * rho, rho])
        refl = SlicePolynomial([rho * rho, -a.conj()])
        self._sr = SemiRegular(lin, refl) if exponent == 1 else SemiRegular(refl, lin)

    def __repr__(self):
        return f"BlaschkeFactor(a={self.a!r}, rho={self.rho!r}, exponent={self.exponent})"

    @property
    def semiregular(self):
        return self._sr

    def reciprocal(self):
        return BlaschkeFactor(self.a, self.rho, -self.exponent)

    def conj(self):
        """The conjugate factor: ``(B_{a,rho})^c = B_{conj a, rho}``."""
        return BlaschkeFactor(self.a.conj(), self.rho, self.exponent)

    def __call__(self, q):
        return blaschke_eval(self, q)

    def eval_array(self, points):
        return self._sr.eval_array(points)

    def divisor(self):
        """Signed divisor: ``-{a}`` for ``B``, ``+{a}`` for ``B^{-*}``."""
        d = divisor_of_poly(SlicePolynomial([-self.a, 1.0]))
        return -d if self.exponent == 1 else d

    def to_json(self):
        return {"a": self.a.to_json(), "rho": self.rho, "exponent": self.exponent}


def blaschke_eval(B, q):
    """Evaluate ``B^{exponent}`` at ``q``.

    For ``exponent=+1`` this is ``(rho chi_a(q))^{-1} N(q)`` with
    ``chi_a(q) = q^2 - 2 Re(a) q + |a|^2`` and
    ``N(q) = q^2 (-conj a) + q (rho^2 + conj(a)^2) - rho^2 conj(a)``.
    """
    return B.semiregular(q)


# ---------------------------------------------------------------------------
# factorization


def _check_boundary(F, rho):
    for p in (F.numer, F.denom):
        if p.degree < 1:
            continue
        for a, b, _ in divisor_of_poly(p).entries:
            r = math.hypot(a, b)
            if abs(r - rho) <= BOUNDARY_MARGIN:
                kind = "zero" if p is F.numer else "pole"
                raise BoundaryZeroError(
                    f"{kind} at {a!r}{b:+}i lies within {BOUNDARY_MARGIN} of the boundary |q| = {rho}"
                )


def _peel(poly, rho):
    """Remove the zeros of ``poly`` inside the ball as right factors.

    Returns ``(rest, centers)`` with
    ``poly = rest * B_{c_s}^{-*} * ... * B_{c_1}^{-*}`` (``c_1`` removed first).
    """
    centers = []
    inside = [[a, b, m] for a, b, m in divisor_of_poly(poly).entries if math.hypot(a, b) < rho] if poly.degree >= 1 else []
    for a, b, m in inside:
        for _ in range(m):
            g, c = extract_right_factor(poly, a, b)
            refl = SlicePolynomial([rho * rho, -c.conj()]) * (1.0 / rho)
            poly = slice_product(g, refl)
            centers.append(c)
    return poly, centers


def factorize(F, rho):
    """Blaschke factorization ``F = f0 * B_1 * ... * B_r``.

    ``F`` is a SemiRegular (or a polynomial, read as ``(1, f)``). Returns
    ``(f0, factors)`` where ``f0`` has neither zeros nor poles in the
    closed ball and each factor is a :class:`BlaschkeFactor`.
    """
    if isinstance(F, SlicePolynomial):
        F = SemiRegular.from_poly(F)
    rho = float(rho)
    if not rho > 0:
        raise DomainError("rho must be positive")
    _check_boundary(F, rho)
    # numerator zeros: h = h1 * B_{b_s}^{-*} * ... * B_{b_1}^{-*}
    h1, zs = _peel(F.numer, rho)
    # poles: peel the zeros of g^c * h1 and conjugate back
    n1 = slice_product(conjugate(F.denom), h1)
    psi, ws = _peel(n1, rho)
    f0 = SemiRegular(conjugate(psi), symmetrization(h1))
    factors = [BlaschkeFactor(c.conj(), rho, 1) for c in reversed(ws)]
    factors += [BlaschkeFactor(b, rho, -1) for b in reversed(zs)]
    return f0, factors


def evaluate_product(f0, factors, q):
    """Evaluate ``f0 * B_1 * ... * B_r`` at ``q`` by the pointwise product rule."""
    return eval_product_pointwise([f0] + list(factors), q)


# ---------------------------------------------------------------------------
# Jensen


@dataclass(frozen=True)
class JensenReport:
    lhs: float
    boundary_integral: float
    divisor_sum: float
    gap: float
    equality_expected: bool

    @property
    def rhs(self):
        return self.boundary_integral + self.divisor_sum

    def to_json(self):
        return {
            "lhs": self.lhs,
            "boundary_integral": self.boundary_integral,
            "divisor_sum": self.divisor_sum,
            "rhs": self.rhs,
            "gap": self.gap,
            "equality_expected": self.equality_expected,
        }


def boundary_log_mean(F, rho, mu, rule):
    """``(1/2pi) int_0^{2pi} int_S log|F(rho cos t + rho sin t I)| dmu(I) dt``."""
    theta = rule.nodes
    pts = np.zeros((len(mu), theta.shape[0], 4))
    pts[..., 0] = rho * np.cos(theta)[None, :]
    pts[..., 1:] = mu.points[:, None, :] * (rho * np.sin(theta))[None, :, None]
    vals = kernels.qnorm(evaluate_many(F, pts.reshape(-1, 4))).reshape(pts.shape[:-1])
    with np.errstate(divide="ignore"):
        logs = np.log(vals)
    if not np.all(np.isfinite(logs)):
        raise BoundaryZeroError("the function vanishes at a boundary node")
    return float(np.dot(mu.weights, rule.mean(logs, axis=1)))


def jensen(F, rho, mu=None, rule=None):
    """Both sides of Jensen's inequality for a semi-regular ``F`` on ``|q| < rho``.

    ``divisor_sum`` is the signed term ``-sum_{|p_k| < rho} m_k log(rho/|p_k|)``,
    so the right-hand side is ``boundary_integral + divisor_sum``.
    """
    if isinstance(F, SlicePolynomial):
        F = SemiRegular.from_poly(F)
    mu = mu or SphereMeasure.octahedral6()
    rule = rule or CircleRule(128)
    rho = float(rho)
    if not rho > 0:
        raise DomainError("rho must be positive")
    if F.numer.is_zero():
        raise PreconditionError("f vanishes identically")
    if F.numer.coeff(0).norm() == 0.0:
        raise PreconditionError("f(0) = 0")
    if F.denom.coeff(0).norm() == 0.0:
        raise PreconditionError("f has a pole at 0")
    _check_boundary(F, rho)
    f0 = F(Quaternion())
    lhs = math.log(f0.norm())
    div = divisor_semiregular(F)
    dsum = 0.0
    for a, b, m in div.entries:
        r = math.hypot(a, b)
        if r < rho:
            dsum -= m * math.log(rho / r)
    bint = boundary_log_mean(F, rho, mu, rule)
    return JensenReport(
        lhs=lhs,
        boundary_integral=bint,
        divisor_sum=dsum,
        gap=bint + dsum - lhs,
        equality_expected=F.is_slice_preserving(),
    )


# ---------------------------------------------------------------------------
# consequences


def zero_bound_check(f, r, R, grid=32):
    """Compare ``n_f(r)`` with ``(log M_f(R) - log|f(0)|) / (log R - log r)``.

    Returns ``(n, bound, holds)``.
    """
    if not 0 < r < R:
        raise PreconditionError("need 0 < r < R")
    f0 = f.coeff(0).norm()
    if f0 == 0.0:
        raise PreconditionError("f(0) = 0")
    _, _, n = zero_counts(f, r)
    M = sup_modulus(f, R, grid)
    bound = (math.log(M) - math.log(f0)) / (math.log(R) - math.log(r))
    return n, bound, n <= bound + 1e-9


def schwarz_zero_gap(f, r, eps=1e-3, grid=32):
    """For ``f`` mapping the unit ball into itself: no zero in ``|q| <= r`` when ``r < |f(0)|``.

    Returns True when the divisor of ``f`` has no point of modulus ``<= r``.
    """
    f0 = f.coeff(0).norm()
    if f0 == 0.0:
        raise PreconditionError("f(0) = 0")
    if not r < f0:
        raise PreconditionError("r must be smaller than |f(0)|")
    if sup_modulus(f, 1.0 - eps, grid) > 1.0:
        raise PreconditionError("f does not map the unit ball into itself")
    if f.degree < 1:
        return True
    return all(math.hypot(a, b) > r for a, b, _ in divisor_of_poly(f).entries)


def boundary_table(a, rho, n_points=32, seed=0, exponent=1):
    """Rows ``(unit_x, unit_y, unit_z, theta, modulus, defect)`` on ``|q| = rho``."""
    B = BlaschkeFactor(a, rho, exponent)
    rng = np.random.default_rng(seed)
    units = sample_unit_vectors(n_points, rng)
    theta = rng.uniform(0.0, 2 * np.pi, n_points)
    pts = np.zeros((n_points, 4))
    pts[:, 0] = rho * np.cos(theta)
    pts[:, 1:] = units * (rho * np.sin(theta))[:, None]
    mods = kernels.qnorm(B.eval_array(pts))
    return [
        (u[0], u[1], u[2], t, m, abs(m - 1.0))
        for u, t, m in zip(units, theta, mods)
    ]


def boundary_table_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["unit_x", "unit_y", "unit_z", "theta", "modulus", "defect"])
    for row in rows:
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()
