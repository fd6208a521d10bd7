"""Finite measures on the unit imaginary sphere, circle rules, and the
integral formulas built from them: mean values, the harmonicity
functional, generalized representation coefficients, Poisson averages and
averages over the euclidean 3-sphere.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DiagonalError, DomainError, PoleError
from .quaternion import (
    ImaginaryUnit,
    Quaternion,
    as_quaternion,
    imaginary_array,
    sample_unit_vectors,
    to_slice,
)
from .slicefunc import evaluate_many

EPS_ANGLE = 1e-8
# below this angle between J and I the regularized coefficient form is used
REGULARIZE_ANGLE = 1e-3

MEASURE_KINDS = ("antipodal_pair", "octahedral6", "random_symmetrized")


class SphereMeasure:
    """A probability measure on the unit imaginary sphere with finite support.

    ``points`` is an (m, 3) array of unit vectors, ``weights`` an (m,)
    array summing to one. Every constructor produces a measure invariant
    under ``J -> -J``.
    """

    def __init__(self, points, weights, kind, params=None):
        pts = np.array(points, dtype=np.float64).reshape(-1, 3)
        pts /= np.linalg.norm(pts, axis=1)[:, None]
        w = np.array(weights, dtype=np.float64).reshape(-1)
        if w.shape[0] != pts.shape[0]:
            raise ValueError("points and weights differ in length")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if abs(math.fsum(w) - 1.0) > 1e-14:
            raise ValueError("weights must sum to one")
        pts.setflags(write=False)
        w.setflags(write=False)
        self.points = pts
        self.weights = w
        self.kind = kind
        self.params = dict(params or {})

    def __len__(self):
        return self.points.shape[0]

    def __repr__(self):
        return f"SphereMeasure(kind={self.kind!r}, size={len(self)}, params={self.params!r})"

    @property
    def units(self):
        return [ImaginaryUnit(*p) for p in self.points]

    @property
    def quaternions(self):
        """Support points as an (m, 4) quaternion array."""
        return imaginary_array(self.points)

    def is_symmetric(self, tol=1e-12):
        """Check invariance under ``J -> -J`` with matching weights."""
        for p, w in zip(self.points, self.weights):
            d = np.linalg.norm(self.points + p, axis=1)
            hit = d <= tol
            if abs(self.weights[hit].sum() - w * hit.sum()) > tol or not hit.any():
                return False
        return True

    @classmethod
    def antipodal_pair(cls, J=None):
        """``{J, -J}`` with weight 1/2 each (default ``J = j``)."""
        J = np.array([0.0, 1.0, 0.0]) if J is None else np.asarray(as_quaternion_unit(J))
        return cls([J, -J], [0.5, 0.5], "antipodal_pair", {"J": J.tolist()})

    @classmethod
    def octahedral6(cls):
        pts = np.vstack([np.eye(3), -np.eye(3)])
        return cls(pts, np.full(6, 1.0 / 6.0), "octahedral6")

    @classmethod
    def random_symmetrized(cls, n, seed):
        """``n`` uniform draws together with their antipodes, weight ``1/(2n)``."""
        if n < 1:
            raise ValueError("n must be positive")
        v = sample_unit_vectors(n, seed)
        pts = np.vstack([v, -v])
        return cls(pts, np.full(2 * n, 1.0 / (2 * n)), "random_symmetrized", {"n": n, "seed": seed})

    @classmethod
    def from_kind(cls, kind, n=16, seed=0):
        if kind == "antipodal_pair":
            return cls.antipodal_pair()
        if kind == "octahedral6":
            return cls.octahedral6()
        if kind == "random_symmetrized":
            return cls.random_symmetrized(n, seed)
        raise ValueError(f"unknown measure kind {kind!r}")


def as_quaternion_unit(J):
    """Return the 3-vector of an imaginary unit given in any accepted form."""
    if isinstance(J, Quaternion):
        v = np.array([J.x, J.y, J.z])
    else:
        v = np.asarray(J, dtype=np.float64).reshape(-1)
        if v.size == 4:
            v = v[1:]
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class CircleRule:
    """Equispaced trapezoid rule on the circle, ``theta_k = 2 pi k / n``."""

    n_nodes: int = 64

    def __post_init__(self):
        if int(self.n_nodes) < 1:
            raise ValueError("n_nodes must be positive")

    @property
    def nodes(self):
        return 2.0 * np.pi * np.arange(self.n_nodes) / self.n_nodes

    @property
    def weights(self):
        return np.full(self.n_nodes, 1.0 / self.n_nodes)

    def mean(self, values, axis=-1):
        """Average of samples at the nodes, i.e. ``(1/2pi) int_0^{2pi}``."""
        return np.mean(values, axis=axis)


def _circle_points(a, b, r, units, theta):
    """Points ``a + b J + r e^{J theta}`` for every unit (rows) and node (columns)."""
    re = a + r * np.cos(theta)
    im = b + r * np.sin(theta)
    pts = np.zeros((units.shape[0], theta.shape[0], 4))
    pts[..., 0] = re[None, :]
    pts[..., 1:] = units[:, None, :] * im[None, :, None]
    return pts


def mean_value(f, a, b, I, r, mu, rule=None):
    """Circle means of ``f`` over a symmetric measure.

    Returns ``(F1, F2, reconstructed)`` where ``F1`` and ``F2`` are the
    stem components at ``a + ib`` obtained from the averages and
    ``reconstructed = F1 + I F2`` approximates ``f(a + bI)``.
    """
    rule = rule or CircleRule()
    if b < 0:
        raise DomainError("b must be nonnegative")
    if not r > 0:
        raise DomainError("r must be positive")
    I = as_quaternion(I)
    units = mu.points
    vals = evaluate_many(f, _circle_points(a, b, r, units, rule.nodes))
    circ = rule.mean(vals, axis=1)  # (m, 4)
    F1 = np.einsum("m,mc->c", mu.weights, circ)
    Jf = kernels.qmul(imaginary_array(units), circ)
    F2 = -np.einsum("m,mc->c", mu.weights, Jf)
    F1q, F2q = Quaternion.from_array(F1), Quaternion.from_array(F2)
    return F1q, F2q, F1q + I * F2q


def harmonicity_functional(f, p, r, mu, rule=None):
    """``M_{p,r} = (1/2pi) int int (1 - I J) f(a + bJ + r e^{J theta})``."""
    rule = rule or CircleRule()
    if not r > 0:
        raise DomainError("r must be positive")
    a, b, I = to_slice(p)
    units = mu.points
    vals = evaluate_many(f, _circle_points(a, b, r, units, rule.nodes))
    circ = rule.mean(vals, axis=1)
    IJ = kernels.qmul(np.asarray(I), imaginary_array(units))
    weight = -IJ
    weight[:, 0] += 1.0
    terms = kernels.qmul(weight, circ)
    return Quaternion.from_array(np.einsum("m,mc->c", mu.weights, terms))


# ---------------------------------------------------------------------------
# generalized representation formula


def _angle(I, J):
    u = as_quaternion_unit(I)
    v = as_quaternion_unit(J)
    return float(np.arctan2(np.linalg.norm(np.cross(u, v)), np.dot(u, v)))


def rep_R(I, J):
    """``R(J) = ((1+JI)/2)^{-1} ((1-JI)/2) = (IJ - JI) / |1 + JI|^2``."""
    I, J = as_quaternion(I), as_quaternion(J)
    if _angle(I, J) <= EPS_ANGLE:
        raise PoleError("R(J) has a pole at J = I")
    num = I * J - J * I
    return num / (1.0 + J * I).norm2()


def _half(I, J, sign):
    """``(1 + sign * J I) / 2``."""
    return (1.0 + (J * I) * sign) * 0.5


def rep_coefficients(I, J, H):
    """Coefficients with ``f(x+yI) = M1 f(x+yJ) + M2 f(x+yH)`` for regular ``f``.

    Away from ``J = I`` and ``H = I`` the closed form in ``R`` is used;
    near those points a regularized form without the pole of ``R``.
    """
    I, J, H = as_quaternion(I), as_quaternion(J), as_quaternion(H)
    if _angle(J, H) <= EPS_ANGLE:
        raise DiagonalError("J and H must differ")
    aJ, aH = _angle(I, J), _angle(I, H)
    if aH < REGULARIZE_ANGLE and aH < aJ:
        m1, m2 = _rep_regularized(I, H, J)
        return m2, m1
    if aJ < REGULARIZE_ANGLE:
        return _rep_regularized(I, J, H)
    diff_inv = (rep_R(I, J) - rep_R(I, H)).inverse()
    m1 = diff_inv * _half(I, J, 1.0).inverse()
    m2 = -(diff_inv * _half(I, H, 1.0).inverse())
    return m1, m2


def _rep_regularized(I, J, H):
    """``M1 = (B_J - A_J R(H))^{-1}``, ``M2 = -M1 A_J A_H^{-1}``."""
    aJ = _half(I, J, 1.0)
    bJ = _half(I, J, -1.0)
    aH = _half(I, H, 1.0)
    m1 = (bJ - aJ * rep_R(I, H)).inverse()
    m2 = -(m1 * aJ * aH.inverse())
    return m1, m2


def rep_coefficients_remark(I, J, H):
    """Alternative closed form ``M1 = (I-H)(J-H)^{-1}``, ``M2 = -(I-J)(J-H)^{-1}``."""
    I, J, H = as_quaternion(I), as_quaternion(J), as_quaternion(H)
    if _angle(J, H) <= EPS_ANGLE:
        raise DiagonalError("J and H must differ")
    inv = (J - H).inverse()
    return (I - H) * inv, -((I - J) * inv)


# ---------------------------------------------------------------------------
# Poisson


def _real_values(u, pts):
    vals = np.asarray(evaluate_many(u, pts) if hasattr(u, "eval_array") else _loop_real(u, pts))
    if vals.shape == pts.shape:
        return vals[..., 0]
    return vals


def _loop_real(u, pts):
    flat = pts.reshape(-1, 4)
    out = np.empty(flat.shape[0])
    for i, p in enumerate(flat):
        v = u(Quaternion.from_array(p))
        out[i] = v.w if isinstance(v, Quaternion) else float(v)
    return out.reshape(pts.shape[:-1])


class RealPart:
    """Evaluable ``q -> Re f(q)`` for any evaluable ``f``."""

    def __init__(self, f):
        self.f = f

    def __call__(self, q):
        return as_quaternion(self.f(as_quaternion(q))).w

    def eval_array(self, points):
        return evaluate_many(self.f, points)[..., 0]


def poisson(u, a, R, mu, rule=None):
    """Averaged classical Poisson integral of ``u`` over ``|q| = R`` at real ``a``.

    ``(1/2pi) int_S int_0^{2pi} (R^2 - a^2) / |R e^{I theta} - a|^2 u(R e^{I theta})``
    """
    rule = rule or CircleRule()
    a = float(a)
    if not R > 0:
        raise DomainError("R must be positive")
    if abs(a) >= R:
        raise DomainError("the center must satisfy |a| < R")
    theta = rule.nodes
    kern = (R * R - a * a) / (R * R - 2 * a * R * np.cos(theta) + a * a)
    vals = _real_values(u, _circle_points(0.0, 0.0, R, mu.points, theta))
    circ = rule.mean(kern[None, :] * vals, axis=1)
    return float(np.dot(mu.weights, circ))


@dataclass(frozen=True)
class WeightedPointSet:
    points: np.ndarray
    weights: np.ndarray

    def integrate(self, f):
        vals = evaluate_many(f, self.points)
        return Quaternion.from_array(np.einsum("n,nc->c", self.weights, vals))


def poisson_measure_real_center(p, S_center, S_radius, mu, rule=None):
    """Discrete measure on the 3-sphere ``S`` reproducing regular functions at real ``p``.

    On each slice ``C_J`` of the support of ``mu`` the circle ``S cap C_J``
    carries the classical Poisson weights for ``p``; these are averaged
    with the weights of ``mu``.
    """
    rule = rule or CircleRule(256)
    c = as_quaternion(S_center)
    if not c.is_real():
        raise DomainError("only spheres centered on the real axis are supported")
    p = as_quaternion(p)
    if not p.is_real():
        raise DomainError("the point p must be real")
    d = p.w - c.w
    rho = float(S_radius)
    if not rho > 0 or abs(d) >= rho:
        raise DomainError("p must lie inside the sphere")
    theta = rule.nodes
    kern = (rho * rho - d * d) / (rho * rho - 2 * d * rho * np.cos(theta) + d * d) / rule.n_nodes
    pts = _circle_points(c.w, 0.0, rho, mu.points, theta)
    w = mu.weights[:, None] * kern[None, :]
    return WeightedPointSet(pts.reshape(-1, 4), w.reshape(-1))


# ---------------------------------------------------------------------------
# 3-sphere averages


def s3_grid(n_grid, r=1.0):
    """Product rule on the 3-sphere of radius ``r``.

    Gauss-Legendre in the two polar angles (``n_grid`` nodes each, with
    the ``sin^2 psi sin phi`` Jacobian folded into the weights) and the
    trapezoid rule with ``2 n_grid`` nodes in the azimuth. Weights sum to one.
    """
    if n_grid < 8:
        raise DomainError("n_grid must be at least 8")
    x, wx = np.polynomial.legendre.leggauss(n_grid)
    ang = 0.5 * np.pi * (x + 1.0)
    wa = 0.5 * np.pi * wx
    psi, wpsi = ang, wa * np.sin(ang) ** 2
    phi, wphi = ang, wa * np.sin(ang)
    chi = 2.0 * np.pi * np.arange(2 * n_grid) / (2 * n_grid)
    P, F, C = np.meshgrid(psi, phi, chi, indexing="ij")
    pts = np.stack(
        [
            np.cos(P),
            np.sin(P) * np.cos(F),
            np.sin(P) * np.sin(F) * np.cos(C),
            np.sin(P) * np.sin(F) * np.sin(C),
        ],
        axis=-1,
    ) * r
    W = wpsi[:, None, None] * wphi[None, :, None] * np.ones(2 * n_grid)[None, None, :]
    W = W / W.sum()
    return pts.reshape(-1, 4), W.reshape(-1)


def volume_average_S3(f, r=1.0, n_grid=32):
    """Average of ``f`` over ``|q| = r`` with respect to euclidean surface measure."""
    pts, w = s3_grid(n_grid, r)
    vals = evaluate_many(f, pts)
    return Quaternion.from_array(np.einsum("n,nc->c", w, vals))


# ---------------------------------------------------------------------------
# reports


def _jsonable(v):
    if isinstance(v, Quaternion):
        return v.to_json()
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


@dataclass
class VerificationReport:
    formula: str
    config: dict = field(default_factory=dict)
    lhs: object = None
    rhs: object = None
    abs_error: float = 0.0
    passed: bool = True

    def to_json(self):
        return {
            "formula": self.formula,
            "config": {k: _jsonable(v) for k, v in self.config.items()},
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "abs_error": float(self.abs_error),
            "pass": bool(self.passed),
        }


def _err(lhs, rhs):
    if isinstance(lhs, Quaternion) or isinstance(rhs, Quaternion):
        return (as_quaternion(lhs) - as_quaternion(rhs)).norm()
    return abs(float(lhs) - float(rhs))


def mean_value_report(f, a, b, I, r, mu, rule=None, tol=1e-9):
    rule = rule or CircleRule()
    _, _, rec = mean_value(f, a, b, I, r, mu, rule)
    I = as_quaternion(I)
    direct = as_quaternion(f(Quaternion(a) + b * I))
    err = _err(rec, direct)
    return VerificationReport(
        "mean value",
        {"a": a, "b": b, "I": I, "r": r, "measure": mu.kind, "nodes": rule.n_nodes},
        rec, direct, err, err <= tol,
    )


def poisson_report(u, a, R, mu, rule=None, tol=1e-8):
    rule = rule or CircleRule(128)
    lhs = poisson(u, a, R, mu, rule)
    rhs = _real_values(u, np.array([[a, 0.0, 0.0, 0.0]]))[0]
    err = abs(lhs - rhs)
    return VerificationReport(
        "poisson",
        {"a": a, "R": R, "measure": mu.kind, "nodes": rule.n_nodes},
        lhs, float(rhs), err, err <= tol,
    )
