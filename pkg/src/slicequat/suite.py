"""Seeded acceptance battery.

Each criterion runs a batch of randomized checks and reports one or more
rows ``{case, paper_ref, lhs, rhs, abs_error, tol, pass}``. For a batch,
``lhs`` and ``rhs`` are taken from the worst instance and ``abs_error``
is the worst error (relative where the criterion is relative).
"""
import math
from dataclasses import dataclass

import numpy as np

from . import calculus as calc
from . import quadrature as quad
from .blaschke import boundary_table, evaluate_product, factorize, jensen, zero_bound_check
from .quaternion import Quaternion, as_quaternion
from .sampling import (
    random_ball_point,
    random_harmonic_stem,
    random_nonreal_point,
    random_poly,
    random_semiregular,
    random_stem_poly,
    random_unit,
)
from .slicefunc import SlicePolynomial, StemEvaluator, slice_product, trace
from .zeros import Divisor, divisor_of_poly

MEASURE_KINDS = ("antipodal_pair", "octahedral6", "random_symmetrized")


@dataclass(frozen=True)
class CaseResult:
    case: str
    paper_ref: str
    lhs: object
    rhs: object
    abs_error: float
    tol: float
    passed: bool

    def to_json(self):
        return {
            "case": self.case,
            "paper_ref": self.paper_ref,
            "lhs": _plain(self.lhs),
            "rhs": _plain(self.rhs),
            "abs_error": float(self.abs_error),
            "tol": float(self.tol),
            "pass": bool(self.passed),
        }


def _plain(v):
    if isinstance(v, Quaternion):
        return [float(c) for c in v.to_json()]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    return v


class _Worst:
    """Track the instance with the largest error."""

    def __init__(self):
        self.err = -math.inf
        self.lhs = None
        self.rhs = None

    def add(self, err, lhs, rhs):
        if err > self.err or self.lhs is None:
            self.err, self.lhs, self.rhs = float(err), lhs, rhs

    def row(self, case, ref, tol, passed=None):
        ok = self.err <= tol if passed is None else passed
        return CaseResult(case, ref, self.lhs, self.rhs, self.err, tol, bool(ok))


def _row(case, ref, lhs, rhs, err, tol, passed=None):
    ok = err <= tol if passed is None else passed
    return CaseResult(case, ref, _plain(lhs), _plain(rhs), float(err), float(tol), bool(ok))


def _qerr(a, b):
    return (a - b).norm()


def _measures(rng):
    J = random_unit(rng)
    return {
        "antipodal_pair": quad.SphereMeasure.antipodal_pair(J),
        "octahedral6": quad.SphereMeasure.octahedral6(),
        "random_symmetrized": quad.SphereMeasure.random_symmetrized(16, int(rng.integers(2**31))),
    }


# ---------------------------------------------------------------------------
# criteria 1 and 2


def crit_mean_value(rng, tols):
    measures = _measures(rng)
    rule = quad.CircleRule(64)
    worst = {k: _Worst() for k in MEASURE_KINDS}
    spread = _Worst()
    for _ in range(50):
        f = random_poly(rng, int(rng.integers(0, 9)))
        a, b = rng.uniform(-1, 1), rng.uniform(0, 1)
        I = random_unit(rng)
        r = rng.uniform(0.05, 0.5)
        direct = f(Quaternion(a) + b * as_quaternion(I))
        f1s = []
        for kind in MEASURE_KINDS:
            F1, _, rec = quad.mean_value(f, a, b, I, r, measures[kind], rule)
            worst[kind].add(_qerr(rec, direct), rec, direct)
            f1s.append(F1)
        d = max(_qerr(x, y) for x in f1s for y in f1s)
        spread.add(d, f1s[0], f1s[1])
    rows = [worst[k].row(f"C01.mean_value.{k}", "mean value formula", tols["C01"]) for k in MEASURE_KINDS]
    rows.append(spread.row("C02.measure_independence", "mean value formula, measure independence", tols["C02"]))
    return rows


# ---------------------------------------------------------------------------
# criterion 3


def crit_divisor(rng, tols):
    bad = 0
    first_bad = None
    for _ in range(100):
        f = random_poly(rng, int(rng.integers(1, 7)))
        g = random_poly(rng, int(rng.integers(1, 7)))
        lhs = divisor_of_poly(slice_product(f, g))
        rhs = divisor_of_poly(f) + divisor_of_poly(g)
        if lhs != rhs:
            bad += 1
            if first_bad is None:
                first_bad = (lhs.to_json(), rhs.to_json())
    rows = [_row("C03.divisor_additivity", "slice divisor additivity", bad, 0, bad, tols["C03"], bad == 0)]
    i, j = SlicePolynomial.linear(Quaternion(0, 1, 0, 0)), SlicePolynomial.linear(Quaternion(0, 0, 1, 0))
    got = divisor_of_poly(slice_product(i, j))
    want = Divisor([((0.0, 1.0), 2)])
    ok = got == want
    rows.append(_row("C03.divisor_example", "slice divisor example (q-i)*(q-j)", got.to_json(), want.to_json(), 0.0 if ok else 1.0, 0.0, ok))
    return rows


# ---------------------------------------------------------------------------
# criterion 4


def crit_representation(rng, tols):
    rec, forms, anti, norm = _Worst(), _Worst(), _Worst(), _Worst()
    for _ in range(100):
        I, J, H = random_unit(rng), random_unit(rng), random_unit(rng)
        x, y = rng.uniform(-1, 1), rng.uniform(-1, 1)
        f = random_poly(rng, int(rng.integers(0, 7)))
        qI, qJ, qH = (Quaternion(x) + y * as_quaternion(u) for u in (I, J, H))
        m1, m2 = quad.rep_coefficients(I, J, H)
        val = m1 * f(qJ) + m2 * f(qH)
        rec.add(_qerr(val, f(qI)), val, f(qI))
        r1, r2 = quad.rep_coefficients_remark(I, J, H)
        scale = max(1.0, m1.norm(), m2.norm())
        forms.add(max(_qerr(m1, r1), _qerr(m2, r2)) / scale, m1, r1)
        Rm = quad.rep_R(I, -as_quaternion(I))
        anti.add(Rm.norm(), Rm, 0.0)
        c = (as_quaternion(I) * as_quaternion(J)).w
        lhs = quad.rep_R(I, J).norm2()
        rhs = (1 - c) / (1 + c)
        norm.add(abs(lhs - rhs) / max(1.0, abs(rhs)), lhs, rhs)
    ref = "generalized representation formula"
    return [
        rec.row("C04.reconstruction", ref, tols["C04"]),
        forms.row("C04.closed_forms", ref + ", alternative coefficients", tols["C04.forms"]),
        anti.row("C04.R_antipode", ref + ", R(-I)", tols["C04.antipode"]),
        norm.row("C04.R_modulus", ref + ", |R(J)|^2", tols["C04.forms"]),
    ]


# ---------------------------------------------------------------------------
# criterion 5


def crit_laplacian(rng, tols):
    h = 1e-4
    worst = _Worst()
    for _ in range(20):
        stem = random_harmonic_stem(rng, int(rng.integers(1, 5))).evaluator()
        for _ in range(20):
            q = random_nonreal_point(rng)
            v = calc.laplace_star(stem, q, h)
            worst.add(v.norm(), v, 0.0)
    sq = StemEvaluator.from_real(lambda a, b: a * a + b * b)
    q = random_nonreal_point(rng)
    v = calc.laplace_star(sq, q, h)
    ref = "Laplacian of regular plus anti-regular"
    return [
        worst.row("C05.harmonic_sums", ref, tols["C05"]),
        _row("C05.nonharmonic_a2_b2", ref + ", non-harmonic stem", v, 4.0, _qerr(v, Quaternion(4.0)), tols["C05.nonharmonic"]),
    ]


# ---------------------------------------------------------------------------
# criterion 6


def crit_product_rule(rng, tols):
    h = 1e-4
    lit, cor = _Worst(), _Worst()
    for _ in range(10):
        F = random_stem_poly(rng, 2).evaluator()
        G = random_stem_poly(rng, 2).evaluator()
        for _ in range(10):
            q = random_nonreal_point(rng)
            t = calc.product_rule_terms(F, G, q, h)
            lhs = t["lhs"]
            for w, key in ((lit, "rhs_literal"), (cor, "rhs_corrected")):
                rhs = t[key]
                scale = max(1.0, lhs.norm(), rhs.norm())
                w.add(_qerr(lhs, rhs) / scale, lhs, rhs)
    ref = "product rule for the normal Laplacian"
    return [
        lit.row("C06.product_rule", ref, tols["C06"]),
        cor.row("C06.product_rule_factor4", ref + ", cross terms times 4", tols["C06"]),
    ]


# ---------------------------------------------------------------------------
# criterion 7


def crit_averaging(rng, tols):
    bad = 0
    for _ in range(100):
        f = random_poly(rng, int(rng.integers(0, 9)))
        if not np.array_equal(calc.rotation_average(f).coeffs, (trace(f) * 0.5).coeffs):
            bad += 1
    oct_w, haar_w = _Worst(), _Worst()
    for _ in range(100):
        q = Quaternion(*rng.standard_normal(4))
        re = Quaternion(q.w)
        v = calc.octahedral_average_S(q)
        oct_w.add(_qerr(v, re), v, re)
        v = calc.haar_average_S(q)
        haar_w.add(_qerr(v, re), v, re)
    ref = "rotation averages"
    return [
        _row("C07a.rotation_average_trace", ref + ", trace", bad, 0, bad, 0.0, bad == 0),
        oct_w.row("C07b.octahedral_S_average", ref + ", S_w average over the sphere", tols["C07"]),
        haar_w.row("C07b.haar_S_average", ref + ", S_w average over unit quaternions", tols["C07"]),
    ]


# ---------------------------------------------------------------------------
# criterion 8


def crit_G(rng, tols):
    rel, reg = _Worst(), _Worst()
    for _ in range(20):
        sp = random_stem_poly(rng, 3)
        ev = sp.evaluator()
        dbar = sp.dzbar()
        q = random_nonreal_point(rng, min_beta=0.3)
        y2 = q.x * q.x + q.y * q.y + q.z * q.z
        g = calc.apply_G(ev, q)
        want = dbar(q) * y2
        rel.add(_qerr(g, want) / max(want.norm(), 1e-300), g, want)
    for _ in range(20):
        f = random_poly(rng, int(rng.integers(0, 7)))
        q = random_nonreal_point(rng)
        g = calc.apply_G(f, q)
        reg.add(g.norm(), g, 0.0)
    ref = "G operator"
    return [
        rel.row("C08a.G_vs_y2_dbar", ref + ", y^2 dbar_*", tols["C08a"]),
        reg.row("C08b.G_on_regular", ref + ", regular functions", tols["C08b"]),
    ]


# ---------------------------------------------------------------------------
# criterion 9


def crit_poisson(rng, tols):
    rule = quad.CircleRule(128)
    measures = _measures(rng)
    worst = _Worst()
    for k in range(50):
        f = random_poly(rng, int(rng.integers(0, 7)), real=True)
        R = rng.uniform(0.5, 2.0)
        a = rng.uniform(-0.8, 0.8) * R
        mu = measures[MEASURE_KINDS[k % 3]]
        lhs = quad.poisson(quad.RealPart(f), a, R, mu, rule)
        rhs = f(Quaternion(a)).w
        worst.add(abs(lhs - rhs), lhs, rhs)
    return [worst.row("C09.poisson", "Poisson formula", tols["C09"])]


# ---------------------------------------------------------------------------
# criterion 10


def crit_blaschke(rng, tols):
    worst = _Worst()
    for _ in range(100):
        rho = rng.uniform(0.2, 3.0)
        a = random_ball_point(rng, 0.95 * rho)
        for row in boundary_table(a, rho, 32, int(rng.integers(2**31))):
            worst.add(row[5], row[4], 1.0)
    return [worst.row("C10.blaschke_boundary", "Blaschke factor boundary modulus", tols["C10"])]


# ---------------------------------------------------------------------------
# criterion 11


def crit_jensen(rng, tols):
    mu = quad.SphereMeasure.octahedral6()
    rule = quad.CircleRule(256)
    neg = _Worst()
    for _ in range(50):
        rho = float(rng.uniform(0.5, 2.0))
        F = random_semiregular(rng, rho)
        rep = jensen(F, rho, mu, rule)
        neg.add(max(0.0, -rep.gap), rep.lhs, rep.rhs)
    eq = _Worst()
    for _ in range(25):
        rho = float(rng.uniform(0.5, 2.0))
        F = random_semiregular(rng, rho, real=True)
        rep = jensen(F, rho, mu, rule)
        eq.add(abs(rep.gap), rep.lhs, rep.rhs)
    ref = "Jensen inequality"
    tol = tols["C11"]
    rows = [
        neg.row("C11.jensen_inequality", ref, tol),
        eq.row("C11.jensen_equality_slice_preserving", ref + ", slice-preserving equality", tol),
    ]
    ex = jensen(SlicePolynomial([-0.5, 1.0]), 1.0, mu, quad.CircleRule(128))
    rows.append(_row("C11.example_gap", ref + ", f = q - 1/2", ex.lhs, ex.rhs, abs(ex.gap), tols["C11.example"]))
    rows.append(_row("C11.example_lhs", ref + ", f = q - 1/2", ex.lhs, math.log(0.5), abs(ex.lhs - math.log(0.5)), tols["C11.example"]))
    rows.append(_row("C11.example_divisor", ref + ", f = q - 1/2", ex.divisor_sum, -math.log(2.0), abs(ex.divisor_sum + math.log(2.0)), tols["C11.example"]))
    return rows


# ---------------------------------------------------------------------------
# criterion 12


def crit_zero_bound(rng, tols):
    worst = _Worst()
    fails = 0
    for _ in range(50):
        f = random_poly(rng, int(rng.integers(1, 7)))
        R = rng.uniform(0.2, 4.0)
        r = R * rng.uniform(0.05, 0.95)
        n, bound, holds = zero_bound_check(f, r, R)
        worst.add(max(0.0, n - bound), n, bound)
        fails += not holds
    return [worst.row("C12.zero_bound", "zero counting bound", tols["C12"], fails == 0)]


# ---------------------------------------------------------------------------
# criterion 13


def crit_s3(rng, tols):
    v = quad.volume_average_S3(SlicePolynomial.monomial(2), 1.0, 32)
    ref = "3-sphere volume average of q^2"
    return [
        _row("C13.s3_average", ref, v.w, -0.5, abs(v.w + 0.5), tols["C13"]),
        _row("C13.s3_negative", ref + ", sign", v.w, 0.0, max(v.w, 0.0), 0.0, v.w < 0),
    ]


# ---------------------------------------------------------------------------
# criterion 14


def crit_factorization(rng, tols):
    worst = _Worst()
    for _ in range(20):
        rho = float(rng.uniform(0.5, 2.0))
        F = random_semiregular(rng, rho)
        f0, factors = factorize(F, rho)
        for _ in range(20):
            q = random_ball_point(rng, rho)
            direct = F(q)
            rec = evaluate_product(f0, factors, q)
            worst.add(_qerr(rec, direct) / max(direct.norm(), 1e-300), rec, direct)
    return [worst.row("C14.factorization", "Blaschke factorization", tols["C14"])]


CRITERIA = (
    ("C01", crit_mean_value),
    ("C03", crit_divisor),
    ("C04", crit_representation),
    ("C05", crit_laplacian),
    ("C06", crit_product_rule),
    ("C07", crit_averaging),
    ("C08", crit_G),
    ("C09", crit_poisson),
    ("C10", crit_blaschke),
    ("C11", crit_jensen),
    ("C12", crit_zero_bound),
    ("C13", crit_s3),
    ("C14", crit_factorization),
)

DEFAULT_TOLS = {
    "C01": 1e-9,
    "C02": 1e-10,
    "C03": 0.0,
    "C04": 1e-10,
    "C04.forms": 1e-12,
    "C04.antipode": 1e-15,
    "C05": 1e-6,
    "C05.nonharmonic": 1e-5,
    "C06": 1e-5,
    "C07": 1e-13,
    "C08a": 1e-5,
    "C08b": 1e-6,
    "C09": 1e-8,
    "C10": 1e-9,
    "C11": 1e-8,
    "C11.example": 1e-9,
    "C12": 0.0,
    "C13": 2e-3,
    "C14": 1e-8,
}


def run_suite(seed=42, tolerance_overrides=None, only=None):
    """Run the battery; rows come back in a fixed order."""
    tols = dict(DEFAULT_TOLS)
    for k, v in (tolerance_overrides or {}).items():
        if k not in tols:
            raise KeyError(f"unknown tolerance key {k!r}")
        tols[k] = float(v)
    rows = []
    for idx, (key, fn) in enumerate(CRITERIA):
        if only and key not in only:
            continue
        rng = np.random.default_rng([int(seed), idx])
        rows.extend(fn(rng, tols))
    return rows


def criterion_of(case):
    """``"C07b.haar_S_average" -> "C07b"``."""
    return case.split(".", 1)[0]
