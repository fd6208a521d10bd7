import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slicequat import (
    DomainError,
    NotHarmonicError,
    Quaternion,
    SlicePolynomial,
    StemEvaluator,
    StemPolynomial,
    apply_G,
    cullen_derivative,
    delta_prime,
    delta_second,
    differential_report,
    harmonic_conjugate_poly,
    laplace_star,
    product_rule_terms,
    rotate_function,
    rotation_average,
    trace,
)
from slicequat.calculus import (
    dbarstar_numeric,
    dstar_numeric,
    gbar_g_check,
    haar_average_S,
    octahedral_average_R,
    octahedral_average_S,
)
from slicequat.quaternion import UNIT_I, UNIT_J, ImaginaryUnit, to_slice
from slicequat.sampling import random_harmonic_stem, random_nonreal_point, random_stem_poly

from conftest import polynomials, quaternions

H = 1e-4
SQUARE = SlicePolynomial([0, 0, 1])
# q^c as a stem: F1 = a, F2 = -b
QCONJ = StemEvaluator.from_real(lambda a, b: a, lambda a, b: -b, name="q^c")


# ---------------------------------------------------------------------------
# Cullen derivative and the Wirtinger-type operators


def test_cullen_derivative_examples():
    assert cullen_derivative(SQUARE).allclose(SlicePolynomial([0, 2]), 0)
    assert cullen_derivative(SlicePolynomial([Quaternion(1, 2, 3, 4)])).is_zero()
    f = SlicePolynomial.monomial(3, UNIT_J)
    assert cullen_derivative(f).allclose(SlicePolynomial.monomial(2, 3 * UNIT_J), 0)


@given(polynomials(), quaternions)
def test_cullen_derivative_matches_dstar(f, q):
    if to_slice(q).beta < 1e-2:
        return
    want = cullen_derivative(f)(q)
    got = dstar_numeric(f, q, H)
    assert got.isclose(want, 1e-6 * max(1.0, want.norm()))


def test_dstar_examples():
    tol = 4 * H * H
    assert dstar_numeric(SQUARE, Quaternion(1, 1, 0, 0), H).isclose(Quaternion(2, 2, 0, 0), tol)
    assert dstar_numeric(StemEvaluator.constant(Quaternion(3, 1, 0, 2)), Quaternion(0.2, 0, 1, 0), H).isclose(Quaternion(), tol)
    assert dstar_numeric(QCONJ, Quaternion(1, 0, 1, 0), H).isclose(Quaternion(), tol)


def test_dbarstar_examples():
    tol = 4 * H * H
    assert dbarstar_numeric(SQUARE, Quaternion(1, 0, 1, 0), H).isclose(Quaternion(), tol)
    assert dbarstar_numeric(QCONJ, Quaternion(1, 0, 1, 0), H).isclose(Quaternion(1), tol)


def test_raw_callable_rejected_at_real_point():
    with pytest.raises(DomainError):
        dstar_numeric(lambda q: q * q, Quaternion(0.5), H)
    # stems are fine on the real axis
    assert dstar_numeric(SQUARE, Quaternion(0.5), H).isclose(Quaternion(1.0), 1e-8)


def test_nonpositive_step_rejected():
    with pytest.raises(DomainError):
        dstar_numeric(SQUARE, Quaternion(0, 1, 0, 0), 0.0)


@given(st.integers(0, 2**31 - 1))
def test_operators_match_exact_stem_derivatives(seed):
    rng = np.random.default_rng(seed)
    sp = random_stem_poly(rng, 3)
    q = random_nonreal_point(rng)
    ev = sp.evaluator()
    assert dstar_numeric(ev, q, H).isclose(sp.dz()(q), 1e-6)
    assert dbarstar_numeric(ev, q, H).isclose(sp.dzbar()(q), 1e-6)
    assert laplace_star(ev, q, H).isclose(sp.laplacian()(q), 1e-5)


# ---------------------------------------------------------------------------
# Lap_*


def test_laplace_star_examples():
    assert laplace_star(SlicePolynomial([1, 2, 3]), Quaternion(0.1, 0.4, 0, 0)) == Quaternion()
    nonharm = StemEvaluator.from_real(lambda a, b: a * a + b * b)
    assert laplace_star(nonharm, Quaternion(1, 1, 0, 0), H).isclose(Quaternion(4), 1e-5)
    sq = StemEvaluator.from_real(lambda a, b: a * a - b * b, lambda a, b: 2 * a * b)
    assert laplace_star(sq, Quaternion(0.3, 0, 0.7, 0.2), H).isclose(Quaternion(), 1e-6)


@given(st.integers(0, 2**31 - 1))
def test_laplace_star_kills_regular_plus_antiregular(seed):
    rng = np.random.default_rng(seed)
    stem = random_harmonic_stem(rng, int(rng.integers(1, 7)))
    for _ in range(5):
        q = random_nonreal_point(rng)
        # 5-point truncation is h^2/6 times a fourth derivative; coefficients are at most 0.5
        assert laplace_star(stem.evaluator(), q, H).norm() <= 1e-6 + 2e3 * H * H


# ---------------------------------------------------------------------------
# rotations and averages


def test_rotation_average_examples():
    assert rotation_average(SlicePolynomial([0, UNIT_I])).is_zero()
    f = SlicePolynomial.monomial(2, Quaternion(3, 1, 0, 0))
    assert rotation_average(f).allclose(SlicePolynomial.monomial(2, 3.0), 0)


@given(polynomials())
def test_rotation_average_is_half_trace(f):
    assert np.array_equal(rotation_average(f).coeffs, (trace(f) * 0.5).coeffs)


def test_rotate_function_examples():
    f = SlicePolynomial([0, UNIT_J])
    assert rotate_function(UNIT_I, f).allclose(SlicePolynomial([0, -UNIT_J]), 1e-15)
    r = SlicePolynomial([1, -2, 0.5])
    assert rotate_function(Quaternion(0.3, 1, 2, -1), r).allclose(r, 1e-14)


@given(polynomials(4), quaternions, quaternions)
def test_rotate_function_is_conjugated_evaluation(f, w, q):
    """R_w f = S_w^{-1} o f o S_w."""
    if w.norm() < 1e-2:
        return
    winv = w.inverse()
    want = w * f(winv * q * w) * winv
    assert rotate_function(w, f)(q).isclose(want, 1e-10 * max(1.0, want.norm()))


@given(quaternions)
def test_sphere_average_of_rotations(q):
    # uniform average over unit imaginary w of w^-1 q w is Re(q) - Im(q)/3
    want = Quaternion(q.w) - q.imag * (1.0 / 3.0)
    assert octahedral_average_S(q).isclose(want, 1e-14 * max(1, q.norm()))
    # over all unit quaternions it is Re(q)
    assert haar_average_S(q).isclose(Quaternion(q.w), 1e-14 * max(1, q.norm()))


def test_sphere_average_of_rotations_against_monte_carlo(rng):
    q = Quaternion(0.4, 1.0, -2.0, 0.5)
    v = rng.standard_normal((200_000, 3))
    v /= np.linalg.norm(v, axis=1)[:, None]
    im = np.array([q.x, q.y, q.z])
    # w^-1 q w for unit imaginary w reflects Im q through the w axis: 2 (u.w) w - u
    dots = v @ im
    avg_im = (2 * dots[:, None] * v - im).mean(axis=0)
    assert np.allclose(np.asarray(octahedral_average_S(q))[1:], avg_im, atol=2e-2)


def test_octahedral_average_of_rotated_functions(rng):
    f = SlicePolynomial(rng.standard_normal((4, 4)))
    got = octahedral_average_R(f)
    c = f.coeffs.copy()
    c[:, 1:] *= -1.0 / 3.0
    assert got.allclose(SlicePolynomial(c), 1e-14)


# ---------------------------------------------------------------------------
# Lap', Lap''


def test_delta_prime_examples():
    q = Quaternion(0.3, 0.2, 0.9, 0)
    assert delta_prime(SlicePolynomial([1, UNIT_I, 2]), q) == Quaternion()
    F = StemEvaluator.from_real(lambda a, b: a * a + b * b)
    assert delta_prime(F, q, H).isclose(Quaternion(4), 1e-5)
    Fi = StemEvaluator(
        lambda a, b: np.stack([np.zeros_like(a), a * a + b * b, np.zeros_like(a), np.zeros_like(a)], -1),
        lambda a, b: np.zeros(np.shape(a) + (4,)),
    )
    assert delta_prime(Fi, q, H).isclose(Quaternion(), 1e-6)


def test_delta_second_examples():
    q = Quaternion(0.7, 0, 0.4, 0.3)
    assert delta_second(SlicePolynomial([1, UNIT_J, 2]), q) == Quaternion()
    F = StemEvaluator.from_real(lambda a, b: a * a)
    assert delta_second(F, q, H).isclose(Quaternion(12 * 0.7 ** 2), 1e-5)


@given(st.integers(0, 2**31 - 1))
def test_delta_prime_equals_laplace_star_on_real_stems(seed):
    rng = np.random.default_rng(seed)
    c = rng.uniform(-1, 1, (3, 3))
    F1 = lambda a, b: sum(c[i, j] * a ** i * b ** (2 * j) for i in range(3) for j in range(3))
    stem = StemEvaluator.from_real(F1)
    q = random_nonreal_point(rng)
    assert delta_prime(stem, q, H).isclose(laplace_star(stem, q, H), 1e-6)


# ---------------------------------------------------------------------------
# G


def test_G_annihilates_regular_functions():
    assert apply_G(SQUARE, Quaternion(1, 1, 0, 0)).norm() < 1e-8


def test_G_on_conjugate_variable():
    # hand computation in coordinates: G(x0 - x) = |x|^2 + |x|^2 = 2 at q = i
    qc = lambda q: q.conj()
    assert apply_G(qc, UNIT_I).isclose(Quaternion(2), 1e-8)
    y2_dbar = dbarstar_numeric(QCONJ, UNIT_I, H)
    assert (apply_G(qc, UNIT_I) - 2 * y2_dbar).norm() < 1e-8


def test_G_is_twice_y2_dbar_on_stems(rng):
    for _ in range(5):
        sp = random_stem_poly(rng, 3)
        q = random_nonreal_point(rng, min_beta=0.3)
        y2 = q.x ** 2 + q.y ** 2 + q.z ** 2
        want = sp.dzbar()(q) * (2 * y2)
        assert apply_G(sp.evaluator(), q).isclose(want, 1e-7 * max(1, want.norm()))


def test_gbar_g_lhs_matches_finite_differences(rng):
    sp = random_stem_poly(rng, 2)
    q = random_nonreal_point(rng, min_beta=0.3)
    lhs, rhs = gbar_g_check(sp, q)
    c = np.zeros((3, 3, 4))
    c[2, 0, 0], c[1, 1, 0], c[0, 2, 0] = -0.25, 0.5, -0.25
    y2 = StemPolynomial(c)
    Gf = y2.product(sp.dzbar()).evaluator()
    _, y, _ = to_slice(q)
    assert lhs.isclose(dstar_numeric(Gf, q, H) * (y * y), 1e-6)
    assert isinstance(rhs, Quaternion)


# ---------------------------------------------------------------------------
# harmonic polynomials


def test_harmonic_conjugate_examples():
    P = np.zeros((3, 3))
    P[2, 0], P[0, 2] = 1, -1
    assert harmonic_conjugate_poly(P).allclose(SQUARE, 0)
    assert harmonic_conjugate_poly([[0], [1]]).allclose(SlicePolynomial([0, 1]), 0)
    P3 = np.zeros((4, 4))
    P3[3, 0], P3[1, 2] = 1, -3
    assert harmonic_conjugate_poly(P3).allclose(SlicePolynomial.monomial(3), 0)


def test_harmonic_conjugate_errors():
    with pytest.raises(NotHarmonicError):
        harmonic_conjugate_poly([[0, 0, 1], [0, 0, 0], [1, 0, 0]])
    # Im(z^2) = 2ab is harmonic but odd in b
    with pytest.raises(DomainError):
        harmonic_conjugate_poly([[0, 0], [0, 2]])


@given(st.lists(st.floats(-2, 2), min_size=1, max_size=6))
def test_harmonic_conjugate_roundtrip(real_coeffs):
    from slicequat.calculus import _re_zk, bivariate_eval

    n = len(real_coeffs)
    P = np.zeros((n, n))
    for k, c in enumerate(real_coeffs):
        P[: k + 1, : k + 1] += c * _re_zk(k)
    f = harmonic_conjugate_poly(P)
    rng = np.random.default_rng(0)
    for a, b in rng.uniform(-1, 1, (8, 2)):
        v = f(Quaternion(a, b, 0, 0))
        assert abs(v.w - bivariate_eval(P, a, b)) <= 1e-12 * max(1.0, np.abs(P).sum())
        assert dbarstar_numeric(f, Quaternion(a, b, 0, 0) if b else Quaternion(a, 0.5, 0, 0), H).norm() < 1e-6


# ---------------------------------------------------------------------------
# product rule


def test_product_rule_needs_factor_four(rng):
    for _ in range(5):
        F = random_stem_poly(rng, 2).evaluator()
        G = random_stem_poly(rng, 2).evaluator()
        q = random_nonreal_point(rng)
        t = product_rule_terms(F, G, q, H)
        scale = max(1.0, t["lhs"].norm())
        assert t["lhs"].isclose(t["rhs_corrected"], 1e-5 * scale)


def test_product_rule_exact_oracle(rng):
    """Exact stem algebra: N(FG) = N(F) N(G), Lap of a product of real stems."""
    F = random_stem_poly(rng, 2)
    G = random_stem_poly(rng, 2)
    q = random_nonreal_point(rng)
    NF = F.product(F.conj())
    NG = G.product(G.conj())
    lhs = F.product(G).product(F.product(G).conj()).laplacian()(q)
    cross = NF.dz()(q) * NG.dzbar()(q) + NF.dzbar()(q) * NG.dz()(q)
    rhs = NF(q) * NG.laplacian()(q) + NF.laplacian()(q) * NG(q) + 4.0 * cross
    assert lhs.isclose(rhs, 1e-10 * max(1, lhs.norm()))
    t = product_rule_terms(F, G, q, H)
    assert t["lhs"].isclose(lhs, 1e-5 * max(1, lhs.norm()))


def test_product_rule_on_polynomials_vanishes():
    f, g = SlicePolynomial([1, UNIT_I]), SlicePolynomial([UNIT_J, 0, 1])
    t = product_rule_terms(f, g, Quaternion(0.2, 0.5, 0, 0), H)
    assert t["lhs"] == Quaternion()


# ---------------------------------------------------------------------------
# reports


def test_differential_report_exact_and_numeric():
    rep = differential_report("lapstar", SQUARE, Quaternion(0.5, 0.5, 0, 0))
    assert rep.method == "exact_poly" and rep.step == 0.0 and rep.value == Quaternion()
    sp = StemPolynomial.anti_regular(SQUARE)
    rep = differential_report("dbarstar", sp, Quaternion(1, 0, 1, 0))
    assert rep.value.isclose(Quaternion(2, 0, -2, 0), 1e-14)
    rep = differential_report("G", SQUARE, Quaternion(1, 1, 0, 0), 1e-3)
    assert rep.method == "finite_difference" and rep.step == 1e-3
    assert set(rep.to_json()) == {"operator_name", "value", "method", "step"}
    with pytest.raises(ValueError):
        differential_report("nabla", SQUARE, Quaternion(1, 1, 0, 0))


def test_slice_differential_report_validation():
    from slicequat import SliceDifferentialReport

    with pytest.raises(ValueError):
        SliceDifferentialReport("lapstar", Quaternion(), "exact_poly", 1e-4)
    with pytest.raises(ValueError):
        SliceDifferentialReport("lapstar", Quaternion(), "symbolic", 0.0)
    assert ImaginaryUnit(1, 0, 0) == UNIT_I
