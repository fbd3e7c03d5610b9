from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smalldiv.qseries import (
    FractionalExponents, NonUnitLeading, OutOfRange, QSeries, TwoVarSeries, ZeroDivisor,
    first_difference, gamma0_index, laurent_extract, qs_div, qs_mul, qs_u_operator,
    qs_v_operator, sturm_bound,
)

coef = st.fractions(min_value=-4, max_value=4, max_denominator=5)


def naive_mul(a, b, n):
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < n:
                out[i + j] += x * y
    return out


@settings(max_examples=60, deadline=None)
@given(st.lists(coef, min_size=1, max_size=15), st.lists(coef, min_size=1, max_size=15))
def test_mul_matches_naive(a, b):
    n = min(len(a), len(b))
    A, B = QSeries(a, 0, len(a)), QSeries(b, 0, len(b))
    P = qs_mul(A, B)
    ref = naive_mul(a, b, n)
    for k in range(min(n, P.prec)):
        assert P[k] == ref[k]


@settings(max_examples=60, deadline=None)
@given(st.lists(coef, min_size=2, max_size=15), st.lists(coef, min_size=1, max_size=12))
def test_div_inverts_mul(a, b):
    b = [Fraction(1)] + b
    A, B = QSeries(a, 0, len(a)), QSeries(b, 0, len(b))
    Q = qs_div(A, B)
    back = qs_mul(Q, B)
    for k in range(back.prec):
        assert back[k] == A[k]


def test_div_with_valuations():
    a = QSeries.from_terms({3: 1, 5: 1}, 6)
    b = QSeries.from_terms({1: 1, 3: 1}, 4)
    q = qs_div(a, b)
    assert q[2] == 1 and q.prec_exponent == 5
    assert all(q[k] == 0 for k in range(3, 5))


def test_geometric_series():
    one_minus_q = QSeries([1, -1], 0, 20)
    g = qs_div(QSeries([1], 0, 20), one_minus_q)
    assert all(g[k] == 1 for k in range(20))


def test_fractional_exponents():
    a = QSeries.monomial(Fraction(1, 8), 1, prec=2, den=8)
    p = qs_mul(a, a)
    assert p[Fraction(1, 4)] == 1 and p.den == 8


def test_out_of_range():
    a = QSeries([1, 2], 0, 2)
    with pytest.raises(OutOfRange):
        a[2]


def test_division_errors():
    with pytest.raises(ZeroDivisor):
        qs_div(QSeries([1], 0, 5), QSeries.zero(5))
    with pytest.raises(NonUnitLeading):
        qs_div(QSeries([1], 0, 5), QSeries([2, 1], 0, 5), require_unit=True)


def test_u_and_v():
    f = QSeries.from_terms({1: 1, 3: 2, 9: 3}, 12)
    u = qs_u_operator(f, 3)
    assert u[1] == 2 and u[3] == 3 and u.prec_exponent == 4
    v = qs_v_operator(f, 2)
    assert v[2] == 1 and v[6] == 2 and v.prec_exponent == 24
    with pytest.raises(FractionalExponents):
        qs_u_operator(QSeries.monomial(Fraction(1, 2), 1, prec=4, den=2), 3)


def test_sturm():
    assert gamma0_index(4) == 6
    assert sturm_bound(3, 64) == 24
    assert sturm_bound(2, 1) == 0
    assert sturm_bound(Fraction(3, 2), 4) == 0


def test_first_difference():
    a = QSeries([1, 2, 3], 0, 3)
    b = QSeries([1, 2, 4], 0, 3)
    assert first_difference(a, b) == (2, 3, 4)
    assert first_difference(a, a) is None


def test_json_round_trip():
    a = QSeries.from_terms({Fraction(-1, 4): 3, Fraction(1, 8): Fraction(1, 2)}, 20, 8)
    assert QSeries.from_json(a.to_json()) == a


def test_twovar_mul_and_extract():
    x = TwoVarSeries.from_monomials([(1, 0, 1), (-1, 1, 1)], 10)
    sq = x * x
    assert laurent_extract(sq, 2)[0] == 1
    assert laurent_extract(sq, 0)[1] == 2
    assert laurent_extract(sq, -2)[2] == 1
    with pytest.raises(OutOfRange):
        laurent_extract(sq, 5)
