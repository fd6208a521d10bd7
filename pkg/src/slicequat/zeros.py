"""Zeros of slice polynomials and slice divisors.

The zeros of ``f`` lie on the spheres ``alpha + S beta`` whose complex
representatives ``alpha + i beta`` are roots of the real polynomial
``f^s``. A :class:`Divisor` records those representatives in the closed
upper half-plane together with their multiplicities.
"""
import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import kernels
from .errors import DegenerateError, NoZeroError
from .quaternion import Quaternion, to_slice
from .slicefunc import (
    SlicePolynomial,
    conjugate,
    eval_poly,
    evaluate_many,
    slice_product,
    stem_of_poly,
    symmetrization,
)

CLUSTER_TOL = 1e-6
MERGE_TOL = 1e-3
MULT_TOL = 1e-10
SPHERE_TOL = 1e-9


# ---------------------------------------------------------------------------
# real polynomial roots


def _real_coeffs(p):
    if isinstance(p, SlicePolynomial):
        c = np.array(p.coeffs[:, 0]) if len(p) else np.zeros(0)
    else:
        c = np.asarray(p).reshape(-1)
        if np.iscomplexobj(c):
            if np.any(c.imag != 0):
                raise ValueError("roots_real_poly needs real coefficients")
            c = c.real
        c = c.astype(np.float64)
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        raise DegenerateError("the zero polynomial has no well-defined roots")
    return c[: nz[-1] + 1]


def _magnitude(c, z):
    """``sum |c_k| |z|^k``: the scale of rounding errors when evaluating at ``z``."""
    return float(npoly.polyval(abs(z), np.abs(c)))


def _polish(c, z, m, iters=12):
    """Newton on ``p^(m-1)`` started from ``z``."""
    d0 = npoly.polyder(c, m - 1) if m > 1 else c
    d1 = npoly.polyder(d0)
    best, best_val = z, abs(npoly.polyval(z, d0))
    for _ in range(iters):
        num = npoly.polyval(z, d0)
        den = npoly.polyval(z, d1)
        if den == 0:
            break
        step = num / den
        z = z - step
        val = abs(npoly.polyval(z, d0))
        if val < best_val:
            best, best_val = z, val
        if abs(step) <= 1e-16 * (1 + abs(z)):
            break
    return best


def _is_multiple(c, z, m):
    for j in range(m):
        d = npoly.polyder(c, j) if j else c
        if abs(npoly.polyval(z, d)) > MULT_TOL * max(_magnitude(d, z), 1e-300):
            return False
    return True


class _Groups:
    """Union-find over root approximations."""

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)

    def members(self):
        out = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return list(out.values())


def roots_real_poly(p, maxiter=300):
    """All complex roots of a real polynomial with multiplicities.

    ``p`` is a coefficient sequence indexed by power (or a SlicePolynomial
    with real coefficients). Returns a list of ``(complex root, mult)``
    sorted by real then imaginary part, closed under conjugation.
    """
    c = _real_coeffs(p)
    m0 = int(np.argmax(c != 0))
    c = c[m0:] / c[-1]
    out = []
    if m0:
        out.append((0j, m0))
    n = c.shape[0] - 1
    if n == 0:
        return out
    if n == 1:
        return sorted(out + [(complex(-c[0]), 1)], key=lambda t: (t[0].real, t[0].imag))
    # Fujiwara bound: every root lies within 2 max |c_k|^(1/(n-k))
    radius = 2.0 * max(abs(c[k]) ** (1.0 / (n - k)) for k in range(n))
    z0 = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    z, _ = kernels.aberth(c.astype(np.complex128), z0, tol=1e-15, maxiter=maxiter)

    # group tight clusters
    g = _Groups(n)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= CLUSTER_TOL * (1 + max(abs(z[i]), abs(z[j]))):
                g.union(i, j)
    groups = [(np.mean(z[idx]), len(idx)) for idx in g.members()]
    groups = [(_polish(c, zc, m), m) for zc, m in groups]

    # merge nearby groups when the centroid is a numerically exact multiple root
    merged = True
    while merged and len(groups) > 1:
        merged = False
        cand = []
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                d = abs(groups[i][0] - groups[j][0])
                if d <= MERGE_TOL * (1 + abs(groups[i][0])):
                    cand.append((d, i, j))
        for _, i, j in sorted(cand):
            (zi, mi), (zj, mj) = groups[i], groups[j]
            m = mi + mj
            zc = _polish(c, (zi * mi + zj * mj) / m, m)
            if _is_multiple(c, zc, m):
                groups = [gr for k, gr in enumerate(groups) if k not in (i, j)] + [(zc, m)]
                merged = True
                break

    # snap to the real axis and close under conjugation
    real, upper = [], []
    for zc, m in groups:
        if abs(zc.imag) <= 1e-9 * (1 + abs(zc)):
            real.append((complex(zc.real, 0.0), m))
        elif zc.imag > 0:
            upper.append((zc, m))
    for zc, m in real:
        out.append((complex(_polish(c, zc.real, m).real, 0.0), m))
    for zc, m in upper:
        zc = complex(zc)
        out.append((zc, m))
        out.append((zc.conjugate(), m))
    return sorted(out, key=lambda t: (t[0].real, t[0].imag))


# ---------------------------------------------------------------------------
# divisors


def _clean(x):
    x = float(f"{x:.12g}")
    if x == 0.0:
        return 0
    return int(x) if x.is_integer() and abs(x) < 2 ** 53 else x


class Divisor:
    """Finite formal sum ``sum m_k {a_k + i b_k}`` with ``b_k >= 0``.

    Points closer than ``1e-6 (1 + |p|)`` are merged on construction,
    zero multiplicities are dropped and entries are sorted.
    """

    __slots__ = ("entries",)

    def __init__(self, entries=()):
        pts = []
        for (a, b), m in ((e[0], e[1]) for e in _normalize_entries(entries)):
            b = abs(b)
            for k, (p, mk) in enumerate(pts):
                if abs(complex(a, b) - p) <= CLUSTER_TOL * (1 + abs(p)):
                    pts[k] = (p, mk + m)
                    break
            else:
                pts.append((complex(a, b), m))
        ent = sorted(
            ((p.real, p.imag, int(m)) for p, m in pts if m != 0),
            key=lambda t: (t[0], t[1]),
        )
        self.entries = tuple(ent)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __bool__(self):
        return bool(self.entries)

    def __add__(self, other):
        return Divisor(list(self._pairs()) + list(other._pairs()))

    def __neg__(self):
        return Divisor([((a, b), -m) for (a, b), m in self._pairs()])

    def __sub__(self, other):
        return self + (-other)

    def _pairs(self):
        return [((a, b), m) for a, b, m in self.entries]

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        if len(self) != len(other):
            return False
        for (a, b, m), (c, d, n) in zip(self.entries, other.entries):
            if m != n or abs(complex(a, b) - complex(c, d)) > CLUSTER_TOL * (1 + abs(complex(a, b))):
                return False
        return True

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"{m}{{{a:.6g}{b:+.6g}i}}" for a, b, m in self.entries)
        return f"Divisor({body or '0'})"

    def total(self):
        return sum(m for _, _, m in self.entries)

    def restrict(self, radius, closed=False):
        """Entries with ``|p| < radius`` (``<=`` when ``closed``)."""
        keep = []
        for a, b, m in self.entries:
            r = math.hypot(a, b)
            if r < radius or (closed and r <= radius):
                keep.append(((a, b), m))
        return Divisor(keep)

    def mult_at(self, a, b):
        for x, y, m in self.entries:
            if abs(complex(x, y) - complex(a, abs(b))) <= CLUSTER_TOL * (1 + abs(complex(x, y))):
                return m
        return 0

    def to_json(self):
        return [{"point": [_clean(a), _clean(b)], "mult": m} for a, b, m in self.entries]

    def dumps(self):
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls([((float(e["point"][0]), float(e["point"][1])), int(e["mult"])) for e in data])


def _normalize_entries(entries):
    for e in entries:
        if len(e) == 3:
            yield (float(e[0]), float(e[1])), int(e[2])
        else:
            pt, m = e
            if isinstance(pt, complex):
                yield (pt.real, pt.imag), int(m)
            else:
                yield (float(pt[0]), float(pt[1])), int(m)


def divisor_of_poly(f):
    """``div(f)`` from the roots of ``f^s``; real points get half the root multiplicity.

    For real coefficients ``f^s = f^2``; the roots of ``f`` itself are used
    (doubled) since squaring spoils the conditioning of close roots.
    """
    if f.is_zero():
        raise DegenerateError("the zero polynomial has no divisor")
    if f.is_real():
        roots = [(z, 2 * m) for z, m in roots_real_poly(f)] if f.degree >= 1 else []
    else:
        roots = roots_real_poly(symmetrization(f))
    ent = []
    for z, m in roots:
        if z.imag > 0:
            ent.append(((z.real, z.imag), m))
        elif z.imag == 0:
            ent.append(((z.real, 0.0), (m + 1) // 2))
    return Divisor(ent)


def divisor_semiregular(F):
    """``div(h) - div(g)`` for ``F = g^{-*} * h``."""
    if F.numer.is_zero():
        raise DegenerateError("the numerator is the zero polynomial")
    if F.denom.is_zero():
        raise DegenerateError("the denominator is the zero polynomial")
    return divisor_of_poly(F.numer) - divisor_of_poly(F.denom)


# ---------------------------------------------------------------------------
# zeros on a sphere


@dataclass(frozen=True)
class SphereZero:
    alpha: float
    beta: float
    kind: str
    mult: int
    witness: Optional[Quaternion] = None

    def to_json(self):
        out = {"alpha": self.alpha, "beta": self.beta, "kind": self.kind, "mult": self.mult}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def characteristic(alpha, beta):
    """``q^2 - 2 alpha q + alpha^2 + beta^2`` (coefficients low to high)."""
    return np.array([alpha * alpha + beta * beta, -2.0 * alpha, 1.0])


def divide_characteristic(f, alpha, beta):
    """Divide by the characteristic polynomial of the sphere.

    Returns ``(Q, c, d)`` with ``f = chi * Q + q c + d``. Since ``chi`` is
    real the division does not depend on the side.
    """
    r = np.array(f.coeffs, dtype=np.float64)
    n = r.shape[0] - 1
    if n < 2:
        c = r[1] if n == 1 else np.zeros(4)
        d = r[0] if n >= 0 else np.zeros(4)
        return SlicePolynomial(), Quaternion.from_array(c), Quaternion.from_array(d)
    chi = characteristic(alpha, beta)
    Q = np.zeros((n - 1, 4))
    for k in range(n, 1, -1):
        t = r[k].copy()
        Q[k - 2] = t
        r[k] -= t
        r[k - 1] -= chi[1] * t
        r[k - 2] -= chi[0] * t
    return SlicePolynomial(Q), Quaternion.from_array(r[1]), Quaternion.from_array(r[0])


def spherical_multiplicity(f, alpha, beta, tol=SPHERE_TOL):
    """How many times the characteristic polynomial divides ``f``."""
    if beta == 0.0:
        return 0
    s = 0
    g = f
    scale = f.scale()
    while g.degree >= 2:
        Q, c, d = divide_characteristic(g, alpha, beta)
        if max(c.norm(), d.norm()) > tol * max(scale, g.scale()):
            break
        s += 1
        g = Q
    return s


def classify_sphere(f, alpha, beta, mult=None):
    """Describe the zeros of ``f`` on the sphere ``alpha + S beta``.

    Returns a :class:`SphereZero` (kind ``"spherical"`` or ``"punctual"``)
    or ``None`` when ``f`` has no zero there. ``mult`` defaults to the
    multiplicity of ``alpha + i beta`` in ``div(f)``.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    scale = f.scale()
    if scale == 0.0:
        raise DegenerateError("the zero polynomial vanishes everywhere")
    _, c, d = divide_characteristic(f, alpha, beta)
    tol = SPHERE_TOL * scale
    if mult is None:
        mult = divisor_of_poly(f).mult_at(alpha, beta) if f.degree >= 1 else 0
    if c.norm() <= tol and d.norm() <= tol:
        return SphereZero(alpha, beta, "spherical", mult)
    if c.norm() <= tol:
        return None
    b = -(d * c.inverse())
    ba, bb, _ = to_slice(b)
    rad = 1.0 + math.hypot(alpha, beta)
    if abs(ba - alpha) > 1e-7 * rad or abs(bb - beta) > 1e-7 * rad:
        return None
    fb = eval_poly(f, b).norm()
    if fb > 1e-8 * scale * rad ** max(f.degree, 0):
        return None
    return SphereZero(alpha, beta, "punctual", mult, b)


def extract_right_factor(f, alpha, beta):
    """Write ``f = g * (q - b)`` with ``b`` on the sphere ``alpha + S beta``.

    A right factor ``q - b`` exists exactly when ``f^c`` vanishes at the
    conjugate of ``b``; for a spherical zero any ``b`` on the sphere works
    and ``alpha + i beta`` is used. ``beta = 0`` asks for a real zero.
    Returns ``(g, b)``.
    """
    if f.is_zero():
        raise DegenerateError("the zero polynomial has no factorization")
    scale = f.scale()
    if beta == 0.0:
        b = Quaternion(alpha)
        if eval_poly(f, b).norm() > 1e-8 * scale * (1 + abs(alpha)) ** max(f.degree, 0):
            raise NoZeroError(f"no real zero at {alpha!r}")
    else:
        z = classify_sphere(conjugate(f), alpha, beta, mult=0)
        if z is None:
            raise NoZeroError(f"no zero on the sphere alpha={alpha!r}, beta={beta!r}")
        if z.kind == "spherical":
            b = Quaternion(alpha, beta)
        else:
            b = z.witness.conj()
    a = f.coeffs
    n = a.shape[0] - 1
    if n < 1:
        raise NoZeroError("a nonzero constant has no zeros")
    g = np.zeros((n, 4))
    bq = np.asarray(b)
    g[n - 1] = a[n]
    for k in range(n - 1, 0, -1):
        g[k - 1] = a[k] + kernels.qmul(g[k], bq)
    resid = np.linalg.norm(a[0] + kernels.qmul(g[0], bq))
    if resid > 1e-9 * scale * (1 + abs(complex(alpha, beta))) ** n:
        raise NoZeroError(f"right-factor residual {resid:.3g} too large")
    return SlicePolynomial(g), b


def factor_linear(f, divisor=None):
    """Factor ``f = c * (q - b_1) * ... * (q - b_n)`` by repeated extraction.

    Returns ``(c, [b_1, ..., b_n])``; ``b_n`` is extracted first.
    """
    if f.is_zero():
        raise DegenerateError("the zero polynomial has no factorization")
    div = divisor_of_poly(f) if divisor is None else divisor
    pending = [[a, b, m] for a, b, m in div.entries]
    bs = []
    g = f
    while g.degree >= 1:
        if not pending:
            raise NoZeroError("ran out of divisor points before reaching a constant")
        a, b, m = pending[0]
        g, root = extract_right_factor(g, a, b)
        bs.append(root)
        pending[0][2] -= 1
        if pending[0][2] == 0:
            pending.pop(0)
    return g.coeff(0), bs[::-1]


def product_of_linear(c, bs):
    out = SlicePolynomial([c])
    for b in bs:
        out = slice_product(out, SlicePolynomial.linear(b))
    return out


# ---------------------------------------------------------------------------
# counting and maxima


def zero_counts(f, r, divisor=None):
    """``(P, S, n)``: punctual and spherical zero counts in ``|q| <= r``, ``n = P + 2S``."""
    div = divisor_of_poly(f) if divisor is None else divisor
    P = S = 0
    for a, b, m in div.entries:
        if math.hypot(a, b) > r:
            continue
        if b == 0.0:
            P += m
            continue
        s = spherical_multiplicity(f, a, b)
        s = min(s, m // 2)
        P += m - 2 * s
        S += s
    return P, S, P + 2 * S


def _max_over_units(F1, F2):
    """``max_J |F1 + J F2|`` in closed form, vectorized over leading axes."""
    n1 = kernels.qnorm2(F1)
    n2 = kernels.qnorm2(F2)
    v = kernels.qmul(F2, kernels.qconj(F1))[..., 1:]
    return np.sqrt(np.maximum(n1 + n2 + 2.0 * np.linalg.norm(v, axis=-1), 0.0))


def _slice_stem(f):
    if isinstance(f, SlicePolynomial):
        return stem_of_poly(f)
    from .slicefunc import StemEvaluator, StemPolynomial

    if isinstance(f, StemPolynomial):
        return f.evaluator()
    if isinstance(f, StemEvaluator):
        return f
    return None


def _sup_slice(stem, r, n):
    psi = np.pi * np.arange(n + 1) / n
    F1, F2 = stem.components(r * np.cos(psi), r * np.sin(psi))
    return float(np.max(_max_over_units(F1, F2)))


def _sup_grid(f, r, n):
    psi = np.pi * np.arange(n + 1) / n
    phi = np.pi * np.arange(n + 1) / n
    chi = 2 * np.pi * np.arange(2 * n) / (2 * n)
    P, F, C = np.meshgrid(psi, phi, chi, indexing="ij")
    pts = r * np.stack(
        [np.cos(P), np.sin(P) * np.cos(F), np.sin(P) * np.sin(F) * np.cos(C), np.sin(P) * np.sin(F) * np.sin(C)],
        axis=-1,
    )
    return float(np.max(kernels.qnorm(evaluate_many(f, pts.reshape(-1, 4)))))


def sup_modulus(f, r, grid=32, rel_change=1e-4, max_grid=1024):
    """Lower estimate of ``max_{|q| = r} |f(q)|`` on a hyperspherical grid.

    The grid is doubled until the maximum changes by less than
    ``rel_change``. For slice functions the maximum over the imaginary
    unit at fixed ``(alpha, beta)`` is evaluated in closed form, so only
    the polar angle needs sampling.
    """
    if grid < 8:
        raise ValueError("grid must be at least 8")
    stem = _slice_stem(f)
    if stem is not None:
        step, limit = (lambda n: _sup_slice(stem, r, n)), max(max_grid, 1 << 16)
    else:
        step, limit = (lambda n: _sup_grid(f, r, n)), max_grid // 8
    n = grid
    prev = step(n)
    while n < limit:
        n *= 2
        cur = step(n)
        if abs(cur - prev) <= rel_change * max(abs(cur), 1e-300):
            return cur
        prev = cur
    return prev


def symmetrization_on_sphere(f, alpha, beta, n=8, seed=0):
    """Values ``|f^s|`` at ``n`` random points of the sphere ``alpha + S beta``."""
    from .quaternion import sample_unit_vectors

    fs = symmetrization(f)
    v = sample_unit_vectors(n, seed)
    pts = np.zeros((n, 4))
    pts[:, 0] = alpha
    pts[:, 1:] = beta * v
    return kernels.qnorm(fs.eval_array(pts))


def semiregular_divisor_radii(F):
    """Moduli of every point in ``div(h)`` and ``div(g)`` (before cancellation)."""
    out = []
    for p in (F.numer, F.denom):
        if p.degree >= 1:
            out.extend(math.hypot(a, b) for a, b, _ in divisor_of_poly(p).entries)
    return out

