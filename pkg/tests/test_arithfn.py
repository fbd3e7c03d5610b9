import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smalldiv import arithfn
from smalldiv.characters import OddnessViolation, char_from_kronecker, char_from_table, parse_character
from smalldiv.exactnum import root
from smalldiv.qseries import qs_div, qs_mul, qs_u_operator, qs_v_operator


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def small_divisors_oracle(n):
    return [d for d in divisors(n) if d <= n // d and (n // d - d) % 2 == 0]


def lattice_oracle(chi, psi, N):
    """sum_{m >= 1, n > m} chi(m) psi(n) (n - m)^2 q^(n^2 - m^2), straight from the double sum."""
    out = [Fraction(0)] * N
    m = 1
    while 2 * m + 1 < N:
        n = m + 1
        while n * n - m * m < N:
            out[n * n - m * m] += chi(m) * psi(n) * (n - m) ** 2
            n += 1
        m += 1
    return out


@given(st.integers(1, 3000))
def test_small_divisor_set_oracle(n):
    assert list(arithfn.small_divisor_set(n).divisors) == small_divisors_oracle(n)


def test_small_divisor_examples():
    assert arithfn.small_divisor_set(1).divisors == (1,)
    assert arithfn.small_divisor_set(12).divisors == (2,)
    assert arithfn.small_divisor_set(9).divisors == (1, 3)
    assert all(not arithfn.small_divisor_set(n).divisors for n in range(2, 400, 4))


def test_congruent_small_divisors():
    assert arithfn.congruent_small_divisor_set(8, 3, 1).divisors == (2,)
    assert arithfn.congruent_small_divisor_set(1, 3, 1).divisors == ()
    for r in range(1, 300):
        for p, a in ((3, 1), (3, 2), (5, 1)):
            ref = tuple(d for d in small_divisors_oracle(r) if (d + r // d) % (2 * p ** a) == 0)
            assert arithfn.congruent_small_divisor_set(r, p, a).divisors == ref


def test_sigma1(chi_m4):
    assert arithfn.sigma_small_1(char_from_kronecker(-3), 3) == -1
    for n in range(1, 501):
        ref = sum(chi_m4(((n // d) ** 2 - d * d) // 4) * d for d in small_divisors_oracle(n))
        assert arithfn.sigma_small_1(chi_m4, n) == ref
    # the argument ((n/d)^2 - d^2)/4 can be odd (n = 8, d = 2 gives 3), so chi_{-4} does not kill it
    assert [arithfn.sigma_small_1(chi_m4, n) for n in (8, 16, 24, 48)] == [-2, -2, 2, -8]
    assert all(arithfn.sigma_small_1(chi_m4, n) == 0 for n in range(1, 501) if n % 8)
    assert arithfn.sigma_small_1(char_from_kronecker(-3), 1) == 0


def test_sigma2_examples(one, chi_m4):
    assert arithfn.sigma_small_2(one, chi_m4, 8) == -4
    assert arithfn.sigma_small_2(one, chi_m4, 16) == 4
    assert arithfn.sigma_small_2(char_from_kronecker(12), chi_m4, 2) == 0
    with pytest.raises(OddnessViolation):
        arithfn.sigma_small_2(one, char_from_kronecker(12), 5)


@pytest.mark.parametrize("chi,psi", [("trivial:1", "kronecker:-4"), ("kronecker:12", "kronecker:-8"),
                                     ("kronecker:5", "kronecker:-3"), ("kronecker:8", "kronecker:-4")])
def test_double_sum_identity(chi, psi):
    chi, psi = parse_character(chi), parse_character(psi)
    N = 600
    series = arithfn.sigma_generating_series(chi, psi, N)
    ref = lattice_oracle(chi, psi, N)
    assert all(series[k] == ref[k] for k in range(N))
    assert all(arithfn.sigma_small_2(chi, psi, n) == ref[n] for n in range(1, 200))


def test_sigma2_cyclotomic():
    i = root(4, 1)
    chi = char_from_table(5, [0, 1, i, -i, -1])
    chi = char_from_table(5, [0, 1, -1, -1, 1])  # even quadratic character mod 5
    psi = char_from_table(5, [0, 1, i, -i, -1])  # odd quartic character
    v = arithfn.sigma_small_2(chi, psi, 21)
    ref = sum(chi((21 // d - d) // 2) * psi((21 // d + d) // 2) * d * d for d in small_divisors_oracle(21))
    assert v == ref


def test_hurwitz_examples():
    H = lambda n: arithfn.hurwitz_class_number(n).value
    assert H(0) == Fraction(-1, 12)
    assert (H(3), H(4), H(7), H(15)) == (Fraction(1, 3), Fraction(1, 2), 1, 2)
    assert H(1) == H(2) == H(5) == 0


def test_hurwitz_table_matches_single_values():
    tab = arithfn.hurwitz_table(1500)
    assert all(tab[n] == arithfn.hurwitz_class_number(n).value for n in range(1500))
    assert all((12 * h).denominator == 1 and h >= 0 for h in tab[1:])


def test_kronecker_hurwitz_class_number_relation():
    """sum_s H(4n - s^2) = 2 sigma(n) - sum_{d | n} min(d, n/d): an independent check of H."""
    N = 250
    tab = arithfn.hurwitz_table(4 * N + 1)
    for n in range(1, N + 1):
        s_max = math.isqrt(4 * n)
        lhs = sum(tab[4 * n - s * s] for s in range(-s_max, s_max + 1))
        rhs = 2 * sum(divisors(n)) - sum(min(d, n // d) for d in divisors(n))
        assert lhs == rhs, n


def test_theta_series(one, chi_m4):
    t = arithfn.theta_series(chi_m4, 60)
    assert [t[k] for k in (1, 9, 25, 49)] == [1, -3, 5, -7]
    assert t[0] == 0
    t1 = arithfn.theta_series(one, 20)
    assert t1[0] == Fraction(1, 2) and t1[1] == t1[4] == t1[9] == t1[16] == 1
    assert arithfn.theta_series(char_from_kronecker(12), 30)[0] == 0
    assert arithfn.theta_series(char_from_kronecker(12), 30)[1] == 1


def test_mock_numerator_and_plus(one, chi_m4):
    num = arithfn.mock_numerator(one, chi_m4, 200)
    assert num[8] == -4
    assert num[1] == Fraction(1, 2)
    G = arithfn.mock_plus_part(one, chi_m4, 200)
    back = qs_mul(G, arithfn.theta_series(chi_m4, 200))
    assert all(back[k] == num[k] for k in range(back.prec))


def test_plus_part_hurwitz_progression(one, chi_m4):
    G = arithfn.mock_plus_part(one, chi_m4, 500)
    tab = arithfn.hurwitz_table(500)
    assert all(G[k] == -4 * tab[k] for k in range(7, G.prec, 8))


def test_hurwitz_identity_anchors():
    assert arithfn.hurwitz_rhs(8) == -4
    assert arithfn.hurwitz_rhs(16) == 4
    rep = arithfn.verify_hurwitz_identity(800)
    assert rep.status == "pass"


def test_hurwitz_identity_parallel_is_deterministic():
    a = arithfn.verify_hurwitz_identity(400, threads=1).to_dict()
    b = arithfn.verify_hurwitz_identity(400, threads=3).to_dict()
    assert a == b


def test_lattice_coefficient_matches_uv_product(chi_m4):
    """(f V(p^2a) g) | U(p^b) against the D_r(p) formula on the lattice sum."""
    chi = char_from_kronecker(12)
    for p, a in ((3, 1), (5, 1), (3, 2)):
        N = 400
        pa = p ** a
        direct = [Fraction(0)] * N
        m = 1
        while pa * pa - m * m < N or m < pa:
            n = 1
            while (pa * n) ** 2 - m * m < N:
                r = (pa * n) ** 2 - m * m
                if r > 0:
                    direct[r] += chi(m) * chi_m4(n) * (m - pa * n) ** 2
                n += 1
            m += 1
            if m > N:
                break
        L = arithfn.congruence_lattice_series(chi, chi_m4, p, a, N)
        assert all(L[r] == direct[r] for r in range(1, N))


def test_padic_nonrational_rejected(one):
    psi = char_from_table(5, [0, 1, root(4, 1), -root(4, 1), -1])
    with pytest.raises(arithfn.NonRationalCharacter):
        arithfn.padic_congruence_check(psi, one, 3, 1, 1, 50)


def test_padic_bad_prime(one, chi_m4):
    with pytest.raises(ValueError):
        arithfn.padic_congruence_check(chi_m4, one, 9, 1, 1, 50)


def test_padic_report_witness(one, chi_m4):
    """The 1/2 constant term of G^+ survives U(p): the report carries it as witness."""
    rep = arithfn.padic_congruence_check(chi_m4, one, 3, 1, 1, 500)
    assert rep.status == "fail"
    assert rep.witness["exponent"] == 3 and rep.witness["lhs"] == Fraction(1, 2)


def test_padic_passes_when_p_divides_modulus(chi_m4):
    rep = arithfn.padic_congruence_check(chi_m4, char_from_kronecker(12), 3, 1, 1, 800)
    assert rep.status == "pass"
