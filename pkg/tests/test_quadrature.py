import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slicequat import DiagonalError, DomainError, PoleError, Quaternion, SlicePolynomial
from slicequat.quadrature import (
    CircleRule,
    RealPart,
    SphereMeasure,
    harmonicity_functional,
    mean_value,
    mean_value_report,
    poisson,
    poisson_measure_real_center,
    poisson_report,
    rep_R,
    rep_coefficients,
    rep_coefficients_remark,
    s3_grid,
    volume_average_S3,
)
from slicequat.quaternion import UNIT_I, UNIT_J, UNIT_K, ImaginaryUnit, from_slice

from conftest import polynomials, unit_vectors

MEASURES = [
    SphereMeasure.antipodal_pair(),
    SphereMeasure.octahedral6(),
    SphereMeasure.random_symmetrized(5, 3),
]


# ---------------------------------------------------------------------------
# measures and rules


@pytest.mark.parametrize("mu", MEASURES, ids=lambda m: m.kind)
def test_measures_are_symmetric_probabilities(mu):
    assert math.isclose(mu.weights.sum(), 1.0, abs_tol=1e-15)
    assert mu.is_symmetric()
    assert np.allclose(np.linalg.norm(mu.points, axis=1), 1.0)


def test_measure_validation():
    with pytest.raises(ValueError):
        SphereMeasure([[1, 0, 0]], [0.5], "bad")
    with pytest.raises(ValueError):
        SphereMeasure([[1, 0, 0], [0, 1, 0]], [1.5, -0.5], "bad")
    with pytest.raises(ValueError):
        SphereMeasure.from_kind("icosahedral")
    assert not SphereMeasure([[1, 0, 0], [0, 1, 0]], [0.5, 0.5], "x").is_symmetric()


def test_circle_rule_is_exact_on_trig_polynomials():
    rule = CircleRule(16)
    th = rule.nodes
    assert math.isclose(rule.mean(np.cos(3 * th) ** 2), 0.5, abs_tol=1e-15)
    assert abs(rule.mean(np.sin(7 * th))) < 1e-15
    with pytest.raises(ValueError):
        CircleRule(0)


# ---------------------------------------------------------------------------
# mean value formula


def test_mean_value_square_at_origin():
    f = SlicePolynomial([0, 0, 1])
    for mu in MEASURES:
        F1, F2, rec = mean_value(f, 0.0, 0.0, UNIT_I, 0.7, mu)
        assert rec.norm() < 1e-15 and F1.norm() < 1e-15 and F2.norm() < 1e-15


def test_mean_value_constant():
    c = Quaternion(1, -2, 0.5, 3)
    F1, F2, rec = mean_value(SlicePolynomial([c]), 0.3, 0.4, UNIT_K, 0.2, MEASURES[1])
    assert F1.isclose(c, 1e-15) and F2.norm() < 1e-15 and rec.isclose(c, 1e-15)


def test_mean_value_example_cubic():
    f = SlicePolynomial([0, UNIT_J, 0, 1])
    _, _, rec = mean_value(f, 0.2, 0.5, UNIT_I, 0.3, SphereMeasure.antipodal_pair(UNIT_J))
    q = Quaternion(0.2, 0.5, 0, 0)
    assert rec.isclose(q * q * q + q * UNIT_J, 1e-13)


@given(polynomials(5), unit_vectors(), st.floats(-1, 1), st.floats(0, 1), st.floats(0.05, 1.5),
       st.sampled_from(MEASURES))
def test_mean_value_reconstructs_regular_functions(f, u, a, b, r, mu):
    I = ImaginaryUnit(*u)
    _, _, rec = mean_value(f, a, b, I, r, mu, CircleRule(32))
    want = f(from_slice(a, b, I))
    assert rec.isclose(want, 1e-11 * max(1.0, want.norm(), f.scale() * (abs(a) + b + r + 1) ** 5))


@given(polynomials(5), st.floats(-1, 1), st.floats(0, 1), st.floats(0.1, 1))
def test_mean_value_components_are_the_stem(f, a, b, r):
    F1, F2, _ = mean_value(f, a, b, UNIT_I, r, MEASURES[1], CircleRule(32))
    s1, s2 = f.stem().components(a, b)
    tol = 1e-11 * max(1.0, f.scale() * (abs(a) + b + r + 1) ** 5)
    assert F1.isclose(Quaternion.from_array(s1), tol)
    assert F2.isclose(Quaternion.from_array(s2), tol)


def test_mean_value_domain_checks():
    f = SlicePolynomial([1])
    with pytest.raises(DomainError):
        mean_value(f, 0, -0.1, UNIT_I, 1, MEASURES[0])
    with pytest.raises(DomainError):
        mean_value(f, 0, 0.1, UNIT_I, 0, MEASURES[0])


# ---------------------------------------------------------------------------
# harmonicity functional


@given(polynomials(4), st.floats(-1, 1), st.floats(-1, 1), st.floats(0.1, 1))
def test_harmonicity_functional_is_point_value_on_regular(f, x, y, r):
    p = Quaternion(x, 0, y, 0.3 * y)
    got = harmonicity_functional(f, p, r, MEASURES[1], CircleRule(32))
    want = f(p)
    assert got.isclose(want, 1e-11 * max(1.0, f.scale() * 4 ** 4))


def test_harmonicity_functional_detects_nonregular():
    sq_norm = lambda q: Quaternion(q.norm2())
    p = Quaternion(0.2, 0.3, 0, 0)
    for mu in MEASURES:
        # circle means of |q|^2 are |p|^2 + r^2; the weight averages to one
        gap = (harmonicity_functional(sq_norm, p, 1.0, mu) - sq_norm(p)).norm()
        assert gap >= 0.5
        assert math.isclose(gap, 1.0, rel_tol=1e-12)


# ---------------------------------------------------------------------------
# representation coefficients


def test_rep_R_examples():
    assert rep_R(UNIT_I, UNIT_J).isclose(UNIT_K, 1e-15)
    assert rep_R(UNIT_I, -UNIT_I).norm() < 1e-15
    with pytest.raises(PoleError):
        rep_R(UNIT_J, UNIT_J)


def test_rep_coefficients_examples():
    with pytest.raises(DiagonalError):
        rep_coefficients(UNIT_I, UNIT_J, UNIT_J)
    with pytest.raises(DiagonalError):
        rep_coefficients_remark(UNIT_I, UNIT_K, UNIT_K)
    m1, m2 = rep_coefficients(UNIT_I, UNIT_I, UNIT_J)
    assert m1.isclose(Quaternion(1), 1e-14) and m2.norm() < 1e-14
    m1, m2 = rep_coefficients(UNIT_I, UNIT_J, UNIT_I)
    assert m1.norm() < 1e-14 and m2.isclose(Quaternion(1), 1e-14)
    # H = -J is the classical representation formula
    m1, m2 = rep_coefficients(UNIT_I, UNIT_J, -UNIT_J)
    assert m1.isclose((1 - UNIT_I * UNIT_J) * 0.5, 1e-14)
    assert m2.isclose((1 + UNIT_I * UNIT_J) * 0.5, 1e-14)


@given(polynomials(5), unit_vectors(), unit_vectors(), unit_vectors(), st.floats(-1, 1), st.floats(0, 1))
def test_rep_coefficients_reconstruct(f, u, v, w, x, y):
    I, J, H = ImaginaryUnit(*u), ImaginaryUnit(*v), ImaginaryUnit(*w)
    if np.linalg.norm(v - w) < 0.2:
        return
    want = f(from_slice(x, y, I))
    scale = max(1.0, f.scale() * 2 ** 5)
    for m1, m2 in (rep_coefficients(I, J, H), rep_coefficients_remark(I, J, H)):
        got = m1 * f(from_slice(x, y, J)) + m2 * f(from_slice(x, y, H))
        assert got.isclose(want, 1e-9 * scale / np.linalg.norm(v - w))


@given(unit_vectors(), unit_vectors(), unit_vectors())
def test_rep_coefficient_forms_agree(u, v, w):
    I, J, H = ImaginaryUnit(*u), ImaginaryUnit(*v), ImaginaryUnit(*w)
    if np.linalg.norm(v - w) < 0.1:
        return
    a = rep_coefficients(I, J, H)
    b = rep_coefficients_remark(I, J, H)
    assert a[0].isclose(b[0], 1e-9) and a[1].isclose(b[1], 1e-9)
    # the coefficients always sum to one (take f constant)
    assert (a[0] + a[1]).isclose(Quaternion(1), 1e-9)


def test_rep_regularized_near_pole_is_continuous():
    J = ImaginaryUnit(1.0, 1e-5, 0.0)
    m1, m2 = rep_coefficients(UNIT_I, J, UNIT_K)
    n1, n2 = rep_coefficients_remark(UNIT_I, J, UNIT_K)
    assert m1.isclose(n1, 1e-10) and m2.isclose(n2, 1e-10)


# ---------------------------------------------------------------------------
# Poisson


def test_poisson_examples():
    mu = MEASURES[1]
    assert abs(poisson(RealPart(SlicePolynomial([0, 1])), 0.0, 1.0, mu)) < 1e-15
    sq = RealPart(SlicePolynomial([0, 0, 1]))
    assert math.isclose(poisson(sq, 0.3, 1.0, mu, CircleRule(128)), 0.09, abs_tol=1e-14)
    assert math.isclose(poisson(lambda q: 1.0, 0.5, 2.0, mu), 1.0, abs_tol=1e-14)


def test_poisson_domain():
    with pytest.raises(DomainError):
        poisson(lambda q: 1.0, 1.0, 1.0, MEASURES[0])
    with pytest.raises(DomainError):
        poisson(lambda q: 1.0, 0.0, -1.0, MEASURES[0])


@given(polynomials(5, bound=1), st.floats(-0.8, 0.8), st.sampled_from(MEASURES))
def test_poisson_reproduces_real_parts(f, a, mu):
    u = RealPart(f)
    got = poisson(u, a, 1.0, mu, CircleRule(128))
    assert math.isclose(got, f(Quaternion(a)).w, abs_tol=1e-10 * max(1, f.scale()))


def test_poisson_report_and_json():
    rep = poisson_report(RealPart(SlicePolynomial([1, 0, 1])), 0.25, 1.0, MEASURES[1])
    d = rep.to_json()
    assert d["pass"] and set(d) == {"formula", "config", "lhs", "rhs", "abs_error", "pass"}
    json.dumps(d)


def test_poisson_measure_real_center_reproduces():
    m = poisson_measure_real_center(Quaternion(0.1), Quaternion(0), 1.0, MEASURES[1])
    assert math.isclose(m.weights.sum(), 1.0, abs_tol=1e-13)
    assert np.all(m.weights > 0)
    assert m.integrate(SlicePolynomial([0, 1])).isclose(Quaternion(0.1), 1e-13)
    rng = np.random.default_rng(11)
    f = SlicePolynomial(rng.uniform(-1, 1, (6, 4)))
    assert m.integrate(f).isclose(f(Quaternion(0.1)), 1e-12)


def test_poisson_measure_off_center_sphere():
    m = poisson_measure_real_center(Quaternion(1.4), Quaternion(1.0), 0.75, MEASURES[2])
    f = SlicePolynomial([UNIT_J, 1, 0, UNIT_K])
    assert m.integrate(f).isclose(f(Quaternion(1.4)), 1e-12)


def test_poisson_measure_domain():
    with pytest.raises(DomainError):
        poisson_measure_real_center(Quaternion(0, 0.1, 0, 0), Quaternion(0), 1.0, MEASURES[0])
    with pytest.raises(DomainError):
        poisson_measure_real_center(Quaternion(0.1), Quaternion(0, 1, 0, 0), 1.0, MEASURES[0])
    with pytest.raises(DomainError):
        poisson_measure_real_center(Quaternion(1.2), Quaternion(0), 1.0, MEASURES[0])


# ---------------------------------------------------------------------------
# 3-sphere


def test_s3_grid_weights():
    pts, w = s3_grid(8, 2.0)
    assert math.isclose(w.sum(), 1.0, abs_tol=1e-14)
    assert np.allclose(np.linalg.norm(pts, axis=1), 2.0)
    with pytest.raises(DomainError):
        s3_grid(4)


def test_volume_average_examples():
    assert volume_average_S3(SlicePolynomial([0, 0, 1])).isclose(Quaternion(-0.5), 1e-13)
    c = Quaternion(2, 1, -1, 0.5)
    assert volume_average_S3(SlicePolynomial([c])).isclose(c, 1e-13)
    assert volume_average_S3(SlicePolynomial([0, 1])).norm() < 1e-13


def test_volume_average_against_monte_carlo(rng):
    """Uniform points on S^3 from normalized gaussians; |q|^2 q_w^2 is not polynomial-regular."""
    f = lambda q: Quaternion(q.w ** 2 + q.x * q.y ** 3, q.z ** 4)
    got = volume_average_S3(f, 1.0, 16)
    # exact moments: E w^2 = 1/4, E z^4 = 1/8 on S^3
    assert got.isclose(Quaternion(0.25, 0.125), 1e-12)
    v = rng.standard_normal((100_000, 4))
    v /= np.linalg.norm(v, axis=1)[:, None]
    assert abs(np.mean(v[:, 0] ** 2) - got.w) < 5e-3


@settings(max_examples=20)
@given(polynomials(5), st.floats(0.2, 2))
def test_volume_average_of_regular_is_constant_term(f, r):
    # harmonic-type mean over the 3-sphere of a regular polynomial: only q^0 and q^2 survive
    want = f.coeff(0) - f.coeff(2) * (0.5 * r * r)
    assert volume_average_S3(f, r, 16).isclose(want, 1e-12 * max(1, f.scale()) * (1 + r) ** 5)


def test_mean_value_report_json():
    rep = mean_value_report(SlicePolynomial([1, UNIT_I]), 0.1, 0.2, UNIT_J, 0.5, MEASURES[1])
    d = rep.to_json()
    assert d["pass"] and d["config"]["measure"] == "octahedral6"
    assert d["lhs"] == pytest.approx(d["rhs"], abs=1e-13)
