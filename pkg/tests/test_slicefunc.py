import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slicequat import (
    Quaternion,
    SemiRegular,
    SingularityError,
    SlicePolynomial,
    StemEvaluator,
    StemPolynomial,
    conjugate,
    eval_poly,
    normal,
    reciprocal_eval,
    slice_product,
    symmetrization,
    trace,
)
from slicequat.quaternion import UNIT_I, UNIT_J, UNIT_K, ImaginaryUnit
from slicequat.slicefunc import (
    eval_product_pointwise,
    eval_slice,
    poly_value_sum,
    representation_eval,
    stem_from_slice,
    stem_of_poly,
)

from conftest import polynomials, quaternions, unit_vectors

I_, J_, K_ = UNIT_I, UNIT_J, UNIT_K


def direct_eval(f, q):
    """Oracle: sum of q^k a_k by repeated multiplication."""
    acc, pw = Quaternion(), Quaternion(1)
    for c in f.coeffs:
        acc = acc + pw * Quaternion.from_array(c)
        pw = pw * q
    return acc


# ---------------------------------------------------------------------------
# evaluation


def test_eval_examples():
    assert eval_poly(SlicePolynomial([0, 0, 1]), I_).isclose(Quaternion(-1), 1e-15)
    assert eval_poly(SlicePolynomial([1]), Quaternion(3, 1, 4, 1)) == Quaternion(1)
    assert eval_poly(SlicePolynomial([0, I_]), J_).isclose(-K_, 1e-15)


@given(polynomials(), quaternions)
def test_horner_matches_power_sum(f, q):
    want = direct_eval(f, q)
    assert eval_poly(f, q).isclose(want, 1e-11 * max(1.0, want.norm()))
    assert Quaternion.from_array(f.eval_array(np.asarray(q)[None])[0]).isclose(want, 1e-11 * max(1.0, want.norm()))


def test_polynomial_trims_and_is_immutable():
    f = SlicePolynomial([1, 2, 0, 0])
    assert f.degree == 1
    assert SlicePolynomial([]).degree == -1
    assert SlicePolynomial([0, 0]).is_zero()
    with pytest.raises(ValueError):
        f.coeffs[0, 0] = 5.0


def test_polynomial_json_roundtrip():
    f = SlicePolynomial([[0, 0, 0, 1], [0, -1, -1, 0], [1, 0, 0, 0]])
    assert SlicePolynomial.from_json(f.to_json()).allclose(f, 0)
    with pytest.raises(ValueError):
        SlicePolynomial.from_json([[1, 2, 3]])


# ---------------------------------------------------------------------------
# stems


def test_stem_of_square_at_1_plus_j():
    F1 = lambda a, b: a * a - b * b
    F2 = lambda a, b: 2 * a * b
    stem = StemEvaluator.from_real(F1, F2)
    assert eval_slice(stem, Quaternion(1, 0, 1, 0)).isclose(Quaternion(0, 0, 2, 0), 1e-15)


def test_constant_stem_and_real_point():
    c = Quaternion(0.5, 1, -2, 3)
    assert eval_slice(StemEvaluator.constant(c), Quaternion(0.3, 1, 1, 0)).isclose(c, 1e-15)
    sq = stem_of_poly(SlicePolynomial([0, 0, 1]))
    assert eval_slice(sq, Quaternion(-1.5)).isclose(Quaternion(2.25), 1e-15)


def test_stem_domain_violation():
    from slicequat import DomainError

    stem = StemEvaluator.from_real(lambda a, b: a, domain=lambda a, b: a > 0)
    with pytest.raises(DomainError):
        eval_slice(stem, Quaternion(-1, 1, 0, 0))


@given(polynomials(max_degree=4))
def test_stem_symmetry(f):
    assert stem_of_poly(f).check_symmetry(n=16, seed=1, tol=1e-10) <= 1e-10 * (1 + np.abs(f.coeffs).sum())


def test_asymmetric_stem_is_rejected():
    from slicequat import DomainError

    bad = StemEvaluator.from_real(lambda a, b: b, lambda a, b: a)
    with pytest.raises(DomainError):
        bad.check_symmetry()


@given(polynomials(max_degree=4), quaternions, unit_vectors())
def test_stem_recovered_from_one_slice(f, q, u):
    stem = stem_from_slice(f, ImaginaryUnit(*u))
    want = eval_poly(f, q)
    assert eval_slice(stem, q).isclose(want, 1e-10 * max(1.0, want.norm()))


# ---------------------------------------------------------------------------
# representation formula


def test_representation_examples():
    f = SlicePolynomial([0, 0, 1])
    v = representation_eval(Quaternion(-1), Quaternion(-1), I_, J_)
    assert v.isclose(Quaternion(-1), 1e-15)
    a, b = Quaternion(1, 2, 3, 4), Quaternion(-5, 6, 0, 1)
    assert representation_eval(a, b, I_, I_).isclose(a, 1e-15)
    assert representation_eval(a, b, I_, -I_).isclose(b, 1e-15)
    assert f(I_).isclose(Quaternion(-1), 1e-15)


@given(polynomials(), st.floats(-1, 1), st.floats(-1, 1), unit_vectors(), unit_vectors())
def test_representation_formula(f, x, y, u, v):
    I, J = ImaginaryUnit(*u), ImaginaryUnit(*v)
    got = representation_eval(f(x + y * I), f(x - y * I), I, J)
    want = f(x + y * J)
    assert got.isclose(want, 1e-11 * max(1.0, want.norm()))


@given(polynomials(), st.floats(-1, 1), st.floats(-1, 1), unit_vectors(), unit_vectors())
def test_sum_over_conjugate_points_is_unit_independent(f, x, y, u, v):
    a = poly_value_sum(f, x, y, ImaginaryUnit(*u))
    b = poly_value_sum(f, x, y, ImaginaryUnit(*v))
    assert a.isclose(b, 1e-11 * max(1.0, a.norm()))


# ---------------------------------------------------------------------------
# slice product


def test_product_examples():
    f = slice_product(SlicePolynomial.linear(I_), SlicePolynomial.linear(J_))
    want = SlicePolynomial([K_, -(I_ + J_), 1])
    assert f.allclose(want, 0)
    g = SlicePolynomial([1, 2, 3])
    assert slice_product(g, SlicePolynomial([1])).allclose(g, 0)
    assert slice_product(SlicePolynomial([0, I_]), SlicePolynomial([0, J_])).allclose(SlicePolynomial([0, 0, K_]), 0)


@given(polynomials(4), polynomials(4), quaternions)
def test_product_matches_pointwise_rule(f, g, q):
    fq = f(q)
    if fq.norm() < 1e-3:
        return
    want = fq * g(fq.inverse() * q * fq)
    got = slice_product(f, g)(q)
    assert got.isclose(want, 1e-10 * max(1.0, want.norm()))


@given(polynomials(3), polynomials(3), polynomials(3))
def test_product_is_associative(f, g, h):
    a = slice_product(slice_product(f, g), h)
    b = slice_product(f, slice_product(g, h))
    assert a.allclose(b, 1e-12)


def test_product_zero_set_inclusion(rng):
    from slicequat import classify_sphere, divisor_of_poly

    checked = 0
    for _ in range(10):
        f = SlicePolynomial(rng.standard_normal((4, 4)))
        g = SlicePolynomial(rng.standard_normal((3, 4)))
        fg = slice_product(f, g)
        for a, b, _ in divisor_of_poly(f).entries:
            if b == 0.0:
                continue
            z = classify_sphere(f, a, b)
            assert z is not None and z.kind == "punctual"
            assert f(z.witness).norm() < 1e-9
            assert fg(z.witness).norm() < 1e-9
            checked += 1
    assert checked > 0


# ---------------------------------------------------------------------------
# conjugate, symmetrization, normal, trace


def test_conjugation_examples():
    f = SlicePolynomial.linear(I_)
    assert conjugate(f).allclose(SlicePolynomial([I_, 1]), 0)
    r = SlicePolynomial([1, -2, 3])
    assert conjugate(r).allclose(r, 0)
    assert symmetrization(f).allclose(SlicePolynomial([1, 0, 1]), 1e-15)
    assert symmetrization(r).allclose(slice_product(r, r), 1e-15)
    assert normal(f).allclose(SlicePolynomial([1, 0, 1]), 1e-15)
    c = Quaternion(1, 2, 3, 4)
    assert normal(SlicePolynomial([c])).allclose(SlicePolynomial([30.0]), 1e-13)
    assert trace(SlicePolynomial([0, I_])).is_zero()
    assert trace(SlicePolynomial([1, 1])).allclose(SlicePolynomial([2, 2]), 0)


@given(polynomials())
def test_symmetrization_is_real_before_truncation(f):
    raw = slice_product(conjugate(f), f) if f.degree >= 0 else f
    scale = max(1.0, float(np.abs(raw.coeffs).max(initial=0.0)))
    assert np.all(np.abs(raw.coeffs[:, 1:]) <= 1e-12 * scale)
    assert symmetrization(f).is_real()
    assert normal(f).is_real()


# ---------------------------------------------------------------------------
# reciprocal and semi-regular quotients


def test_reciprocal_examples():
    f = SlicePolynomial.linear(I_)
    assert reciprocal_eval(f, Quaternion(2)).isclose(Quaternion(2, 1, 0, 0) * 0.2, 1e-15)
    r = SlicePolynomial([0.5, 1, 1])
    q = Quaternion(0.2, 0.3, -0.1, 0.4)
    assert reciprocal_eval(r, q).isclose(r(q).inverse(), 1e-14)
    with pytest.raises(SingularityError) as exc:
        reciprocal_eval(f, J_)
    assert exc.value.sphere == (0.0, 1.0)


@given(polynomials(4), quaternions)
def test_product_with_reciprocal_is_one(f, q):
    if f.degree < 0:
        return
    F = SemiRegular(f, SlicePolynomial([1]))
    fs = symmetrization(f)(q)
    if fs.norm() < 1e-3:
        return
    val = eval_product_pointwise([f, F], q)
    assert val.isclose(Quaternion(1), 1e-9)


def test_semiregular_examples():
    f = SlicePolynomial([1, I_, 2])
    q = Quaternion(0.1, 0.2, 0.3, -0.4)
    assert SemiRegular.from_poly(f)(q).isclose(f(q), 1e-15)
    warn = SemiRegular(SlicePolynomial([1, 0, 1]), slice_product(SlicePolynomial.linear(I_), SlicePolynomial.linear(J_)))
    assert warn(Quaternion()).isclose(K_, 1e-15)
    assert SemiRegular(f, f)(q).isclose(Quaternion(1), 1e-13)


def test_semiregular_pole():
    F = SemiRegular(SlicePolynomial([1, 0, 1]), SlicePolynomial([1]))
    with pytest.raises(SingularityError):
        F(Quaternion(0, 0, 0, 1))
    with pytest.raises(SingularityError):
        F.eval_array(np.array([[0.0, 0.6, 0.8, 0.0]]))


def test_semiregular_batch_matches_scalar(rng):
    F = SemiRegular(SlicePolynomial(rng.standard_normal((3, 4))), SlicePolynomial(rng.standard_normal((4, 4))))
    pts = rng.standard_normal((20, 4))
    batch = F.eval_array(pts)
    for p, v in zip(pts, batch):
        assert Quaternion.from_array(v).isclose(F(Quaternion.from_array(p)), 1e-12 * max(1, np.linalg.norm(v)))


def test_semiregular_json_and_slice_preserving():
    F = SemiRegular(SlicePolynomial([1, 0, 1]), SlicePolynomial([-0.5, 1]))
    assert F.is_slice_preserving()
    G = SemiRegular.from_json(F.to_json())
    assert G.denom.allclose(F.denom, 0) and G.numer.allclose(F.numer, 0)
    assert not SemiRegular(SlicePolynomial([1]), SlicePolynomial([I_])).is_slice_preserving()


# ---------------------------------------------------------------------------
# stem polynomials


def test_stem_polynomial_splitting(rng):
    """On a slice C_I with J orthogonal, f = g + h J with g, h holomorphic in z = x + yI."""
    f = SlicePolynomial(rng.standard_normal((5, 4)))
    I = ImaginaryUnit(1, 0, 0)
    J = ImaginaryUnit(0, 1, 0)
    h = 1e-4
    for _ in range(5):
        x, y = rng.uniform(-1, 1, 2)

        def parts(x, y):
            v = f(x + y * I)
            return np.array([v.w, v.x]), np.array([v.y, v.z])

        for comp in (0, 1):
            ux = (parts(x + h, y)[comp] - parts(x - h, y)[comp]) / (2 * h)
            uy = (parts(x, y + h)[comp] - parts(x, y - h)[comp]) / (2 * h)
            # Cauchy-Riemann for u + i v: u_x = v_y, u_y = -v_x
            assert abs(ux[0] - uy[1]) < 1e-6
            assert abs(uy[0] + ux[1]) < 1e-6
    assert isinstance(J, ImaginaryUnit)


def test_stem_polynomial_algebra(rng):
    f = SlicePolynomial(rng.standard_normal((3, 4)))
    g = SlicePolynomial(rng.standard_normal((2, 4)))
    sf, sg = StemPolynomial.from_slice_poly(f), StemPolynomial.from_slice_poly(g)
    q = Quaternion(0.3, -0.2, 0.5, 0.1)
    assert sf.product(sg)(q).isclose(slice_product(f, g)(q), 1e-13)
    assert sf.conj()(q).isclose(conjugate(f)(q), 1e-13)
    assert sf.is_holomorphic()
    assert not StemPolynomial.anti_regular(f).is_holomorphic()
    assert sf.to_slice_poly().allclose(f, 0)
