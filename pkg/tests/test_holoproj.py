import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smalldiv import arithfn, holoproj as hp
from smalldiv.characters import char_from_kronecker
from smalldiv.holoproj import ComplexPoint, HalfInteger

H = Fraction(1, 2)


def jacobi_oracle(r, a, b, z):
    """Jacobi polynomial from mpmath (float), the textbook normalization."""
    return float(mpmath.jacobi(r, float(a), float(b), float(z)))


def test_jacobi_poly_examples():
    assert all(hp.jacobi_poly(0, a, b, z) == 1 for a, b, z in [(-H, -2, 3), (H, 5, Fraction(1, 7))])
    for t in (Fraction(0), Fraction(1, 3), Fraction(5, 7), Fraction(2)):
        assert hp.jacobi_poly(1, -H, -2, 1 - 2 * t) == H + t / 2


@pytest.mark.parametrize("r", range(0, 8))
def test_jacobi_poly_vs_mpmath(r):
    rng = random.Random(r)
    for _ in range(10):
        a = Fraction(rng.randrange(-7, 8), 2)
        b = Fraction(rng.randrange(-7, 8), 2)
        z = Fraction(rng.randrange(-30, 31), rng.randrange(1, 12))
        try:
            v = hp.jacobi_poly(r, a, b, z)
        except hp.PoleInParameter:
            continue
        ref = jacobi_oracle(r, a, b, z)
        assert abs(float(v) - ref) <= 1e-9 * max(1, abs(ref))


def test_jacobi_poly_matches_2f1_form():
    rng = random.Random(7)
    for r in range(11):
        for _ in range(6):
            a, b = Fraction(rng.randrange(-5, 6), 2), Fraction(rng.randrange(-5, 6), 2)
            z = Fraction(rng.randrange(-20, 21), rng.randrange(1, 9))
            try:
                assert hp.jacobi_poly(r, a, b, z) == hp.jacobi_poly_hyp(r, a, b, z)
            except hp.PoleInParameter:
                pass


def test_jacobi_poly_pole():
    with pytest.raises(hp.PoleInParameter):
        hp.jacobi_poly(3, -2, H, Fraction(1, 3))


def test_hyp2f1_examples():
    assert hp.hyp2f1_terminating(0, H, Fraction(3, 2), Fraction(9, 5)) == 1
    assert hp.hyp2f1_terminating(-1, 2, 4, H) == Fraction(3, 4)
    assert hp.hyp2f1_terminating(-2, 1, 1, Fraction(1, 3)) == Fraction(4, 9)
    with pytest.raises(hp.PoleInParameter):
        hp.hyp2f1_terminating(-3, 1, -1, H)


def test_hyp2f1_vs_mpmath():
    for a, b, c, z in [(-3, H, Fraction(5, 2), Fraction(2, 7)), (-4, Fraction(-3, 2), H, Fraction(-3))]:
        ref = float(mpmath.hyp2f1(float(a), float(b), float(c), float(z)))
        assert abs(float(hp.hyp2f1_terminating(a, b, c, z)) - ref) < 1e-10 * max(1, abs(ref))


def test_euler_transformation():
    # both sides terminate: a and c - b are nonpositive integers
    assert hp.euler_transformation_check(-2, Fraction(3, 2), -H, Fraction(1, 3))
    assert hp.euler_transformation_check(-3, Fraction(5, 2), H, Fraction(-2, 5))


def test_homogeneous_P_examples():
    assert hp.homogeneous_P(3, H, 1, 1) == Fraction(3, 2)
    for X, Y in [(2, 5), (Fraction(1, 3), -4)]:
        assert hp.homogeneous_P(3, H, X, Y) == Fraction(X) / 2 + Y
    assert all(hp.homogeneous_P(2, b, 7, 3) == 1 for b in (H, 3, Fraction(-5, 2)))
    with pytest.raises(ValueError):
        hp.homogeneous_P(1, H, 1, 1)


@given(a=st.integers(2, 8), b=st.sampled_from([H, Fraction(3, 2), Fraction(5, 2)]),
       X=st.fractions(max_denominator=20).filter(lambda x: abs(x) < 50),
       Y=st.fractions(max_denominator=20).filter(lambda x: abs(x) < 50))
def test_homogeneous_P_alternate_form(a, b, X, Y):
    assert hp.homogeneous_P(a, b, X, Y) == hp.homogeneous_P_alt(a, b, X, Y)


@settings(max_examples=200)
@given(kappa=st.integers(2, 8), k_f=st.sampled_from([H, Fraction(3, 2), Fraction(5, 2)]),
       n=st.integers(2, 60), data=st.data())
def test_dual_formula(kappa, k_f, n, data):
    m = data.draw(st.integers(1, n - 1))
    lhs, rhs = hp.dual_formula_pair(kappa, k_f, m, n)
    assert lhs == rhs


def test_excluded_weights():
    with pytest.raises(hp.PoleInParameter):
        hp.dual_formula_pair(3, 1, 1, 2)
    with pytest.raises(hp.PoleInParameter):
        hp.dual_formula_pair(2, 3, 1, 2)


def test_defect_factor():
    assert hp.defect_factor_theta(4, 4) == 0
    assert hp.defect_factor_theta(1, 3) == Fraction(2, 3)
    assert hp.defect_factor_theta(1, 2) == Fraction(1, 4)
    for m in range(1, 15):
        for n in range(1, 15):
            assert hp.defect_factor_theta(m, n) == Fraction((n - m) ** 2, 2 * n)


def test_projection_defect_series(one, chi_m4):
    d = hp.projection_defect_series(one, chi_m4, 100)
    assert d[3] == 0 and d[8] == -4
    chi12 = char_from_kronecker(12)
    for chi in (one, chi12):
        d = hp.projection_defect_series(chi, chi_m4, 600, include_constant_term=True)
        num = arithfn.mock_numerator(chi, chi_m4, 600)
        assert all(d[k] == num[k] for k in range(600))


def test_projection_coefficient_float_matches_exact(one, chi_m4):
    """On the square lattice the float projection coefficient is minus the exact defect series."""
    alpha = lambda k: 2.0 / (-2 * math.sqrt(math.pi)) if math.isqrt(k) ** 2 == k else 0.0
    beta = lambda k: (lambda r: chi_m4(r) * r if r * r == k else 0)(math.isqrt(k))
    exact = hp.projection_defect_series(one, chi_m4, 60)
    for r in (8, 24, 48):
        # mmax bounds M = m^2; n^2 - m^2 = r forces m < r / 2
        got = hp.projection_coefficient_float(alpha, beta, Fraction(3, 2), 3, r, mmax=r * r)
        assert abs(got + float(exact[r])) < 1e-9


def test_incomplete_gamma():
    assert abs(hp.incomplete_gamma(1, 1.0) - math.exp(-1)) < 1e-14
    assert abs(hp.incomplete_gamma(H, 1e-12) - math.sqrt(math.pi)) < 1e-5
    assert abs(hp.incomplete_gamma(HalfInteger(-1), 2.3) - float(mpmath.gammainc(-0.5, 2.3))) < 1e-13
    assert hp.incomplete_gamma_recurrence_residual(-0.5, 2.3) < 1e-10
    for s in (-2, -1.5, -1, 0, 0.25, 2.5, 3):
        for x in (0.05, 1.2, 7.0, 40.0):
            ref = float(mpmath.gammainc(s, x))
            assert abs(hp.incomplete_gamma(s, x) - ref) <= 1e-12 * abs(ref)
    with pytest.raises(hp.NonPositiveX):
        hp.incomplete_gamma(1, 0.0)
    assert hp.incomplete_gamma_grid_report().status == "pass"


def test_lipschitz():
    assert hp.lipschitz_check(ComplexPoint(0, 1), 2) < 1e-8
    assert hp.lipschitz_check(ComplexPoint(0.3, 0.7), 3) < 1e-9
    # the two-sided sum is 1-periodic, so w and w + 1 agree
    a = hp.lipschitz_check(ComplexPoint(0.2, 0.5), 4, terms=2000)
    b = hp.lipschitz_check(ComplexPoint(1.2, 0.5), 4, terms=2000)
    assert a < 1e-10 and b < 1e-10
    with pytest.raises(ValueError):
        hp.lipschitz_check(ComplexPoint(0, 1), 1)


def test_eichler(one):
    chi12 = char_from_kronecker(12)
    assert hp.eichler_integral_check(chi12, ComplexPoint(0, 1)) < 1e-8
    assert hp.eichler_integral_check(one, ComplexPoint(0, 1)) < 1e-8
    assert hp.eichler_integral_check(one, ComplexPoint(0.3, 0.8)) < 1e-8
    tau = ComplexPoint(0, 2)
    assert abs(hp.eichler_series(chi12, tau, 1) - hp.eichler_series(chi12, tau, 20)) < 1e-12


def test_eichler_rejects_odd(chi_m4):
    with pytest.raises(ValueError):
        hp.eichler_series(chi_m4, ComplexPoint(0, 1))


@pytest.mark.parametrize("a,b,c,s", [(-0.5, 1.0, 1.0, 1.0), (0.5, 1.5, 2.0, 0.5), (-0.5, 2.0, 4.0, 3.0),
                                     (1.5, 0.5, 1.0, 2.0), (-1.5, 2.5, 3.0, 1.0)])
def test_integral_lemma(a, b, c, s):
    assert hp.integral_lemma_check(a, b, c, s) < 1e-10


def test_projection_integral():
    for k_f, kappa, m, r in [(1.5, 3, 1, 8), (0.5, 2, 2, 3), (2.5, 4, 1, 1)]:
        assert hp.projection_integral_check(k_f, kappa, m, r) < 1e-10


def test_half_integer():
    assert HalfInteger.of(Fraction(-1, 2)).value == Fraction(-1, 2)
    with pytest.raises(ValueError):
        HalfInteger.of(Fraction(1, 3))
