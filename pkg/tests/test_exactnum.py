import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smalldiv.exactnum import (
    CyclotomicNumber, FormalUnitMismatch, Tagged, cyclo_embed, cyclotomic_polynomial, from_json,
    root, simplify, tagged_equal, to_json,
)

CONDUCTORS = [1, 2, 3, 4, 5, 6, 8, 12, 15, 24]


def elements(n):
    return st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=n, max_size=n)


@st.composite
def cyclo(draw):
    n = draw(st.sampled_from(CONDUCTORS))
    ks = draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=4))
    cs = draw(elements(len(ks)))
    x = CyclotomicNumber(n, [0])
    for k, c in zip(ks, cs):
        x = x + root(n, k) * c
    return x


def close(a, b, eps=1e-9):
    return abs(complex(a) - complex(b)) < eps * max(1.0, abs(complex(b)))


def test_phi_small():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_basic_identities():
    assert simplify(root(4, 1) ** 2) == -1
    assert simplify(root(3, 1) + root(3, 2)) == -1
    assert close(cyclo_embed(root(8, 1)), cmath.exp(2j * cmath.pi / 8))
    assert close(cyclo_embed(root(3, 1)), complex(-0.5, 3 ** 0.5 / 2))


def test_equality_across_conductors():
    assert root(4, 2) == root(2, 1)
    assert hash(root(12, 3)) == hash(root(4, 1))
    assert root(6, 2) == root(3, 1)


@settings(max_examples=60, deadline=None)
@given(cyclo(), cyclo())
def test_ring_ops_match_embedding(x, y):
    ex, ey = cyclo_embed(x), cyclo_embed(y)
    assert close(cyclo_embed(x + y), ex + ey)
    assert close(cyclo_embed(x * y), ex * ey)
    assert close(cyclo_embed(x - y), ex - ey)
    if y:
        assert close(cyclo_embed(x / y), ex / ey, 1e-7)


@settings(max_examples=40, deadline=None)
@given(cyclo())
def test_inverse_and_conjugate(x):
    if x:
        assert x * x.inverse() == 1
    assert close(cyclo_embed(x.conjugate()), cyclo_embed(x).conjugate())


@settings(max_examples=40, deadline=None)
@given(cyclo())
def test_json_round_trip(x):
    assert from_json(to_json(x)) == x


def test_roots_of_unity():
    assert root(5, 2).is_root_of_unity()
    assert not (root(5, 1) + 1).is_root_of_unity()
    assert (-root(3, 1)).is_root_of_unity()


def test_galois_moves_roots():
    assert root(5, 1).galois(2) == root(5, 2)


def test_simplify_rational():
    v = simplify(root(6, 1) + root(6, 5))
    assert v == 1 and isinstance(v, Fraction)


def test_tags_cancel():
    g = Tagged(Fraction(-1), {"Gamma(-1/2)": 1})
    a = Tagged(Fraction(2), {"Gamma(-1/2)": -1})
    assert (g * a).untag() == -2
    with pytest.raises(FormalUnitMismatch):
        g.untag()


def test_i_tag_folds_sign():
    t = Tagged(Fraction(3), {"i": 2})
    assert t.tags == {} and t.value == -3
    assert Tagged(Fraction(1), {"i": 5}).tags == {"i": 1}


def test_tagged_equal_requires_same_units():
    with pytest.raises(FormalUnitMismatch):
        tagged_equal(Tagged(1, {"i": 1}), Tagged(1))
    assert tagged_equal(Tagged(2, {"2pi*i": 1}), Tagged(Fraction(2), {"2pi*i": 1}))
