"""Seeded random inputs shared by the acceptance battery and the tests."""
import numpy as np

from .quaternion import ImaginaryUnit, Quaternion, sample_unit_vectors
from .slicefunc import SemiRegular, SlicePolynomial, StemPolynomial, slice_product


def rng_of(seed):
    return np.random.default_rng(seed)


def random_quaternion(rng, scale=1.0):
    return Quaternion(*(rng.standard_normal(4) * scale))


def random_unit(rng):
    return ImaginaryUnit(*sample_unit_vectors(1, rng)[0])


def random_ball_point(rng, radius=1.0):
    """Uniform point of the 4-ball of the given radius."""
    v = rng.standard_normal(4)
    v /= np.linalg.norm(v)
    return Quaternion(*(v * radius * rng.uniform() ** 0.25))


def random_coeffs(rng, n, max_norm=1.0):
    """``n`` quaternions with norms uniform in ``(0, max_norm]``."""
    v = rng.standard_normal((n, 4))
    v /= np.linalg.norm(v, axis=1)[:, None]
    return v * rng.uniform(0.05, 1.0, n)[:, None] * max_norm


def random_poly(rng, degree, max_norm=1.0, real=False):
    c = random_coeffs(rng, degree + 1, max_norm)
    if real:
        c[:, 1:] = 0.0
        c[:, 0] = rng.uniform(-max_norm, max_norm, degree + 1)
        if c[-1, 0] == 0.0:
            c[-1, 0] = max_norm
    return SlicePolynomial(c)


def random_stem_poly(rng, total_degree, max_norm=1.0):
    """Stem polynomial with random quaternion coefficients for ``j + k <= total_degree``."""
    c = np.zeros((total_degree + 1, total_degree + 1, 4))
    for j in range(total_degree + 1):
        for k in range(total_degree + 1 - j):
            c[j, k] = random_coeffs(rng, 1, max_norm)[0]
    return StemPolynomial(c)


def random_harmonic_stem(rng, degree, max_norm=0.5):
    """Sum of a random regular polynomial and a random anti-regular stem."""
    reg = StemPolynomial.from_slice_poly(random_poly(rng, degree, max_norm))
    anti = StemPolynomial.anti_regular(random_poly(rng, degree, max_norm))
    return reg + anti


def random_nonreal_point(rng, radius=1.0, min_beta=0.1):
    while True:
        q = random_ball_point(rng, radius)
        if np.linalg.norm([q.x, q.y, q.z]) >= min_beta:
            return q


def _radius_avoiding(rng, rho, gap):
    """Radius in ``(0.2 rho, 2 rho)`` at distance at least ``gap rho`` from ``rho``."""
    while True:
        r = rng.uniform(0.2, 2.0) * rho
        if abs(r - rho) >= gap * rho:
            return r


def poly_from_zeros(rng, n_factors, rho, gap=0.15, real=False):
    """Product of linear (or, when ``real``, real quadratic/linear) factors.

    Every divisor point has modulus at distance at least ``gap rho`` from
    ``rho``. The leading coefficient is a random quaternion (real when ``real``).
    """
    lead = 1.0 if real else Quaternion(*random_coeffs(rng, 1)[0])
    out = SlicePolynomial([lead])
    for _ in range(n_factors):
        r = _radius_avoiding(rng, rho, gap)
        if real:
            if rng.uniform() < 0.4:
                x = r * (1 if rng.uniform() < 0.5 else -1)
                fac = SlicePolynomial([-x, 1.0])
            else:
                t = rng.uniform(0.2, np.pi - 0.2)
                a, b = r * np.cos(t), r * np.sin(t)
                fac = SlicePolynomial([a * a + b * b, -2 * a, 1.0])
        else:
            v = rng.standard_normal(4)
            v *= r / np.linalg.norm(v)
            fac = SlicePolynomial([-Quaternion(*v), 1.0])
        out = slice_product(out, fac)
    return out


def random_semiregular(rng, rho, max_factors=3, gap=0.15, real=False):
    g = poly_from_zeros(rng, int(rng.integers(0, max_factors + 1)), rho, gap, real)
    h = poly_from_zeros(rng, int(rng.integers(0, max_factors + 1)), rho, gap, real)
    return SemiRegular(g, h)
