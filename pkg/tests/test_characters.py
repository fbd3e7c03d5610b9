from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from smalldiv.characters import (
    NonMultiplicative, NonUnitValue, NotADiscriminant, OddnessViolation, char_from_kronecker,
    char_from_table, kronecker, parse_character, require_odd, trivial_character,
)
from smalldiv.exactnum import root


def _legendre(a, p):
    """Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _factor(n):
    out, p = [], 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def kronecker_oracle(D, n):
    """Kronecker symbol from its definition: multiplicative over the prime factors of n."""
    if n == 0:
        return int(abs(D) == 1)
    val = 1
    if n < 0:
        n = -n
        if D < 0:
            val = -val
    for p in _factor(n):
        if p == 2:
            if D % 2 == 0:
                return 0
            val *= 1 if D % 8 in (1, 7) else -1
        else:
            val *= _legendre(D, p)
    return val


@given(st.sampled_from([-8, -4, -3, 2, 5, 8, 12, 24, -7, 13, -15]), st.integers(-300, 300))
def test_kronecker_matches_definition(D, n):
    assert kronecker(D, n) == kronecker_oracle(D, n)


def test_spec_values():
    assert kronecker(-4, 3) == -1
    assert kronecker(-4, 2) == 0
    assert kronecker(2, 7) == 1


def test_parities_and_orders():
    c = char_from_kronecker(-4)
    assert c.parity == 1 and c.order == 2
    assert char_from_kronecker(12).is_even
    assert char_from_kronecker(-3).parity == 1
    assert char_from_kronecker(2).modulus == 8 and char_from_kronecker(2).is_even


def test_char_zero_convention():
    assert trivial_character(1)(0) == 0
    assert char_from_kronecker(-4)(0) == 0
    assert trivial_character(1)(7) == 1


def test_table_character_mod5():
    i = root(4, 1)
    chi = char_from_table(5, [0, 1, i, -i, -1])
    assert chi.parity == 1 and chi.order == 4
    assert not chi.is_rational
    assert chi.conjugate()(2) == -i


def test_table_validation():
    with pytest.raises(NonUnitValue):
        char_from_table(4, [1, 1, 0, -1])
    with pytest.raises(NonUnitValue):
        char_from_table(3, [0, 2, 1])
    with pytest.raises(NonMultiplicative):
        char_from_table(5, [0, 1, 1, -1, -1])


def test_not_a_discriminant():
    with pytest.raises(NotADiscriminant):
        char_from_kronecker(9)


def test_require_odd():
    require_odd(char_from_kronecker(-8))
    with pytest.raises(OddnessViolation):
        require_odd(char_from_kronecker(12))


def test_parse():
    assert parse_character("kronecker:-4") == char_from_kronecker(-4)
    assert parse_character("trivial:1").is_trivial
    t = parse_character("table:4:0,1,0,-1")
    assert t == char_from_kronecker(-4)
    z = parse_character("table:5:0,1,zeta(4),zeta(4)^3,-1")
    assert z(2) == root(4, 1)
    assert parse_character("table:4:0,1,0,1").is_even
    with pytest.raises(ValueError):
        parse_character("dirichlet:5")


def test_values_rational_type():
    assert all(isinstance(v, Fraction) for v in char_from_kronecker(12).values)
