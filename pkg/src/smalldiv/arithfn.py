"""Small divisor functions, Hurwitz class numbers and the generating series
built from them.

The verification harnesses at the bottom return
:class:`~smalldiv.report.VerificationReport` objects; a failed identity is a
report outcome, not an exception.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .characters import DirichletCharacter, char_eval, require_odd
from .exactnum import CyclotomicNumber, Scalar, simplify
from .qseries import QSeries, first_difference, qs_div, qs_mul, qs_u_operator, qs_v_operator
from .report import VerificationReport


class NonRationalCharacter(ValueError):
    pass


@dataclass(frozen=True)
class SmallDivisorSet:
    n: int
    divisors: tuple[int, ...]


@dataclass(frozen=True)
class CongruentSmallDivisorSet:
    r: int
    p: int
    a: int
    divisors: tuple[int, ...]


@dataclass(frozen=True)
class HurwitzValue:
    n: int
    value: Fraction


def small_divisor_set(n: int) -> SmallDivisorSet:
    """Divisors d of n with d <= n/d and d = n/d (mod 2)."""
    if n < 1:
        raise ValueError("n must be positive")
    ds = []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0 and (n // d - d) % 2 == 0:
            ds.append(d)
    return SmallDivisorSet(n, tuple(ds))


def congruent_small_divisor_set(r: int, p: int, a: int) -> CongruentSmallDivisorSet:
    """Small divisors of r that also satisfy d + r/d = 0 (mod 2 p^a)."""
    if a < 1:
        raise ValueError("a must be at least 1")
    mod = 2 * p ** a
    ds = tuple(d for d in small_divisor_set(r).divisors if (d + r // d) % mod == 0)
    return CongruentSmallDivisorSet(r, p, a, ds)


def sigma_small_1(psi: DirichletCharacter, n: int) -> Scalar:
    total = Fraction(0)
    for d in small_divisor_set(n).divisors:
        e = n // d
        total = total + char_eval(psi, (e * e - d * d) // 4) * d
    return simplify(total)


def sigma_small_2(chi: DirichletCharacter, psi: DirichletCharacter, n: int) -> Scalar:
    require_odd(psi)
    total = Fraction(0)
    for d in small_divisor_set(n).divisors:
        e = n // d
        c = char_eval(chi, (e - d) // 2)
        if not c:
            continue
        s = char_eval(psi, (e + d) // 2)
        if s:
            total = total + c * s * (d * d)
    return simplify(total)


def _sigma2_table(chi: DirichletCharacter, psi: DirichletCharacter, N: int) -> list:
    """sigma_small_2(n) for 0 <= n < N by a sieve over (d, n/d) pairs."""
    require_odd(psi)
    out: list = [Fraction(0)] * max(N, 1)
    d = 1
    while d * d < N:
        e = d
        while d * e < N:
            c = char_eval(chi, (e - d) // 2)
            if c:
                s = char_eval(psi, (e + d) // 2)
                if s:
                    out[d * e] = out[d * e] + c * s * (d * d)
            e += 2
        d += 1
    return [simplify(x) for x in out[:N]]


# ---------------------------------------------------------------------------
# Hurwitz class numbers


def hurwitz_class_number(n: int) -> HurwitzValue:
    """Weighted count of classes of positive definite forms of discriminant -n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return HurwitzValue(0, Fraction(-1, 12))
    if n % 4 in (1, 2):
        return HurwitzValue(n, Fraction(0))
    total = Fraction(0)
    a = 1
    while 3 * a * a <= n:
        for b in range(-a + 1, a + 1):
            num = b * b + n
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if a == b == c:
                total += Fraction(1, 3)
            elif b == 0 and a == c:
                total += Fraction(1, 2)
            else:
                total += 1
        a += 1
    return HurwitzValue(n, total)


def hurwitz_table(N: int) -> list[Fraction]:
    """H(n) for 0 <= n < N from one pass over reduced forms."""
    out = [Fraction(0)] * max(N, 1)
    out[0] = Fraction(-1, 12)
    a = 1
    while 3 * a * a < N:
        for b in range(-a + 1, a + 1):
            c = a
            while True:
                disc = 4 * a * c - b * b
                if disc >= N:
                    break
                if disc > 0 and not (c == a and b < 0):
                    if a == b == c:
                        out[disc] += Fraction(1, 3)
                    elif b == 0 and a == c:
                        out[disc] += Fraction(1, 2)
                    else:
                        out[disc] += 1
                c += 1
        a += 1
    return out[:N]


# ---------------------------------------------------------------------------
# theta series and the mock generating functions


def theta_series(psi: DirichletCharacter, prec: int) -> QSeries:
    """(1/2) sum_n psi(n) n^lambda q^(n^2), known for exponents < prec.

    The n = 0 term is (1/2) psi(0) with the literal value psi(0) = 1 for the
    modulus-one character, so the trivial theta series starts with 1/2.
    """
    lam = psi.parity
    coeffs: list = [Fraction(0)] * max(prec, 0)
    if lam == 0 and psi.modulus == 1 and prec > 0:
        coeffs[0] = Fraction(1, 2)
    n = 1
    while n * n < prec:
        v = char_eval(psi, n)
        if v:
            # the n and -n terms coincide: psi(-n)(-n)^lam = psi(n) n^lam
            coeffs[n * n] = simplify(v * (n if lam else 1))
        n += 1
    return QSeries(coeffs, 0, max(prec, 0))


def sigma_generating_series(chi: DirichletCharacter, psi: DirichletCharacter,
                            prec: int) -> QSeries:
    """sum_{n >= 1} sigma_small_2(n) q^n, known below prec."""
    tab = _sigma2_table(chi, psi, prec)
    if tab:
        tab[0] = Fraction(0)
    return QSeries(tab, 0, prec)


def trivial_extra_term(psi: DirichletCharacter, prec: int) -> QSeries:
    """(1/2) sum_{n >= 1} psi(n) n^2 q^(n^2)."""
    coeffs: list = [Fraction(0)] * prec
    n = 1
    while n * n < prec:
        v = char_eval(psi, n)
        if v:
            coeffs[n * n] = simplify(v * Fraction(n * n, 2))
        n += 1
    return QSeries(coeffs, 0, prec)


def mock_numerator(chi: DirichletCharacter, psi: DirichletCharacter, prec: int) -> QSeries:
    """theta_psi times F^+ (chi nontrivial) or G^+ (chi trivial)."""
    num = sigma_generating_series(chi, psi, prec)
    if chi.is_trivial:
        num = num + trivial_extra_term(psi, prec)
    return num


def mock_plus_part(chi: DirichletCharacter, psi: DirichletCharacter, prec: int) -> QSeries:
    """F^+ or G^+ = mock_numerator / theta_psi, to the provable precision."""
    require_odd(psi)
    return qs_div(mock_numerator(chi, psi, prec), theta_series(psi, prec), require_unit=True)


# ---------------------------------------------------------------------------
# Hurwitz class number identity for psi = chi_{-4}


def hurwitz_rhs(n8: int) -> Fraction:
    """-4 sum_{j>=1, (2j-1)^2 < m} (-1)^(j-1) (2j-1) H(m - (2j-1)^2) for m = n8."""
    total = Fraction(0)
    j = 1
    while (2 * j - 1) ** 2 < n8:
        k = 2 * j - 1
        total += (-1) ** (j - 1) * k * hurwitz_class_number(n8 - k * k).value
        j += 1
    return -4 * total


def _hurwitz_chunk(ns: list[int]) -> list[tuple[int, Fraction, Fraction]]:
    from .characters import char_from_kronecker, trivial_character

    psi = char_from_kronecker(-4)
    one = trivial_character(1)
    return [(n, simplify(sigma_small_2(one, psi, 8 * n)), hurwitz_rhs(8 * n)) for n in ns]


def verify_hurwitz_identity(prec: int, threads: int = 1) -> VerificationReport:
    """sigma_small_2(8n) against the Hurwitz class number sum for all 8n <= prec,
    plus the q-series form -4 theta_psi sum H(8n-1) q^(8n-1) on exponents = 0 mod 8."""
    from .characters import char_from_kronecker, trivial_character
    from .parallel import parallel_map

    ns = list(range(1, prec // 8 + 1))
    rows = []
    for chunk in parallel_map(_hurwitz_chunk, _chunks(ns, threads), threads):
        rows.extend(chunk)
    params = {"psi": "kronecker:-4", "chi": "trivial:1", "prec": prec}
    for n, lhs, rhs in rows:
        if lhs != rhs:
            return VerificationReport.failed("hurwitz", params, exponent=8 * n, lhs=lhs, rhs=rhs)
    # q-series form
    psi = char_from_kronecker(-4)
    one = trivial_character(1)
    N = prec + 1
    htab = hurwitz_table(N)
    hser = QSeries([htab[k] if k % 8 == 7 else 0 for k in range(N)], 0, N)
    prod = qs_mul(theta_series(psi, N), hser).scale(-4)
    sig = sigma_generating_series(one, psi, N)
    for k in range(8, min(prod.prec, N), 8):
        if prod[k] != sig[k]:
            return VerificationReport.failed("hurwitz", params, exponent=k, lhs=sig[k], rhs=prod[k])
    return VerificationReport.passed("hurwitz", params, verified=(8, 8 * len(ns)),
                                     detail=f"{len(ns)} values of n, q-series form to q^{N - 1}")


def _chunks(items: list, parts: int) -> list[list]:
    parts = max(1, parts)
    size = -(-len(items) // parts) if items else 1
    return [items[i:i + size] for i in range(0, len(items), size)] or [[]]


# ---------------------------------------------------------------------------
# p-adic congruences


def _require_rational(*chars: DirichletCharacter) -> None:
    for c in chars:
        if not c.is_rational:
            raise NonRationalCharacter(f"{c.label or c} has non-rational values")


def congruence_series(chi: DirichletCharacter, psi: DirichletCharacter, p: int, a: int, b: int,
                      prec: int, plus_part: QSeries | None = None) -> QSeries:
    """(theta_psi(p^(2a) tau) * plus_part) | U(p^b)."""
    if plus_part is None:
        plus_part = mock_plus_part(chi, psi, prec)
    shifted = qs_v_operator(theta_series(psi, prec), p ** (2 * a))
    return qs_u_operator(qs_mul(shifted, plus_part), p ** b)


def congruence_lattice_coefficient(chi: DirichletCharacter, psi: DirichletCharacter, r: int,
                                   p: int, a: int) -> Scalar:
    """sum over m, n >= 1 with (p^a n)^2 - m^2 = r of chi(m) psi(n) (m - p^a n)^2,
    written as a sum over the congruent small divisors of r."""
    pa = p ** a
    total = Fraction(0)
    for d in congruent_small_divisor_set(r, p, a).divisors:
        e = r // d
        c = char_eval(chi, (e - d) // 2)
        if c:
            s = char_eval(psi, (e + d) // (2 * pa))
            if s:
                total = total + c * s * (d * d)
    return simplify(total)


def congruence_lattice_series(chi: DirichletCharacter, psi: DirichletCharacter, p: int, a: int,
                              prec: int) -> QSeries:
    """The series theta_psi(p^(2a) tau) times the plus part must equal:
    the lattice sum via congruent small divisors, plus, for trivial chi,
    (p^a / 2) sum psi(n) n^2 q^(p^(2a) n^2)."""
    coeffs = [congruence_lattice_coefficient(chi, psi, r, p, a) if r else Fraction(0)
              for r in range(prec)]
    if chi.is_trivial:
        pa = p ** a
        n = 1
        while pa * pa * n * n < prec:
            v = char_eval(psi, n)
            if v:
                k = pa * pa * n * n
                coeffs[k] = simplify(coeffs[k] + v * Fraction(pa * n * n, 2))
            n += 1
    return QSeries(coeffs, 0, prec)


def _p_valuation_ok(c: Scalar, modulus: int, p: int) -> bool:
    c = Fraction(c)
    return c.denominator % p != 0 and c.numerator % modulus == 0


def padic_congruence_check(psi: DirichletCharacter, chi: DirichletCharacter, p: int, a: int,
                           b: int, prec: int, plus_part: QSeries | None = None
                           ) -> VerificationReport:
    """Every coefficient of (theta_psi(p^(2a) tau) F^+) | U(p^b) is divisible
    by p^min(a, b) (G^+ when chi is trivial)."""
    if p < 3 or p % 2 == 0 or any(p % k == 0 for k in range(3, math.isqrt(p) + 1, 2)):
        raise ValueError("p must be an odd prime")
    if a < 1 or b < 1:
        raise ValueError("a and b must be positive")
    _require_rational(psi, chi)
    name = "congruence-G" if chi.is_trivial else "congruence-F"
    params = {"psi": psi.label, "chi": chi.label, "p": p, "a": a, "b": b, "prec": prec}
    series = congruence_series(chi, psi, p, a, b, prec, plus_part)
    modulus = p ** min(a, b)
    denoms = 1
    for k, c in series.nonzero():
        c = Fraction(c)
        denoms = math.lcm(denoms, c.denominator)
        if not _p_valuation_ok(c, modulus, p):
            return VerificationReport.failed(name, params, exponent=k, lhs=c,
                                             rhs=f"0 mod {p}^{min(a, b)}")
    return VerificationReport.passed(
        name, params, verified=(series.offset, series.prec - 1),
        detail=f"divisible by {modulus}; cleared denominator {denoms}")


# ---------------------------------------------------------------------------


def series_mismatch_report(name: str, params: dict, lhs: QSeries, rhs: QSeries,
                           upto=None) -> VerificationReport:
    diff = first_difference(lhs, rhs, upto)
    hi = min(lhs.prec_exponent, rhs.prec_exponent)
    if upto is not None:
        hi = min(hi, Fraction(upto))
    if diff is None:
        return VerificationReport.passed(name, params, verified=(0, hi))
    e, x, y = diff
    return VerificationReport.failed(name, params, exponent=e, lhs=x, rhs=y)


@lru_cache(maxsize=32)
def _cached_plus_part(chi_spec: str, psi_spec: str, prec: int) -> QSeries:
    from .characters import parse_character

    return mock_plus_part(parse_character(chi_spec), parse_character(psi_spec), prec)


def is_cyclotomic(x) -> bool:
    return isinstance(x, CyclotomicNumber)
