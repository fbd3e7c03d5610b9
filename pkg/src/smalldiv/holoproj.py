"""Holomorphic projection combinatorics and numeric checks of the analytic lemmas.

The exact path (Jacobi polynomials, terminating 2F1, the homogeneous
polynomial P_{a,b}, the projection defect series) never evaluates a Gamma
function: every Gamma ratio is a rising factorial over Fraction.  The
floating-point verifiers at the end use mpmath for quadrature and as the
reference implementation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .characters import DirichletCharacter, char_eval, require_odd
from .exactnum import Tagged, simplify
from .qseries import QSeries
from .report import VerificationReport


class PoleInParameter(ValueError):
    pass


class NonPositiveX(ValueError):
    pass


class QuadratureFailure(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class HalfInteger:
    twice: int

    @classmethod
    def of(cls, x) -> HalfInteger:
        if isinstance(x, HalfInteger):
            return x
        f = Fraction(x)
        if (2 * f).denominator != 1:
            raise ValueError(f"{x} is not a half-integer")
        return cls(int(2 * f))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __add__(self, other):
        return HalfInteger(self.twice + HalfInteger.of(other).twice)

    __radd__ = __add__

    def __neg__(self):
        return HalfInteger(-self.twice)

    def __sub__(self, other):
        return self + (-HalfInteger.of(other))

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class ComplexPoint:
    re: float
    im: float

    def __post_init__(self):
        if not self.im > 0:
            raise ValueError("point must lie in the upper half plane")

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


def _frac(x) -> Fraction:
    if isinstance(x, HalfInteger):
        return x.value
    return Fraction(x)


def rising(x: Fraction, k: int) -> Fraction:
    """Pochhammer symbol (x)_k."""
    out = Fraction(1)
    for i in range(k):
        out *= x + i
    return out


def gen_binomial(x: Fraction, k: int) -> Fraction:
    """C(x, k) for rational x and integer k (zero when k < 0)."""
    if k < 0:
        return Fraction(0)
    out = Fraction(1)
    for i in range(k):
        out = out * (x - i) / (i + 1)
    return out


def _is_nonpos_int(x: Fraction) -> bool:
    return x.denominator == 1 and x <= 0


def jacobi_poly(r: int, a, b, z) -> Fraction:
    """P_r^{(a,b)}(z) as the finite sum with Gamma ratios written as rising factorials."""
    if r < 0:
        raise ValueError("degree must be nonnegative")
    a, b, z = _frac(a), _frac(b), Fraction(z)
    for j in range(r + 1):
        if _is_nonpos_int(a + j + 1):
            raise PoleInParameter(f"Gamma(a + {j} + 1) has a pole at a = {a}")
    if _is_nonpos_int(a + b + r + 1):
        raise PoleInParameter(f"Gamma(a + b + r + 1) has a pole at a + b = {a + b}")
    w = (z - 1) / 2
    total = Fraction(0)
    for j in range(r + 1):
        total += math.comb(r, j) * rising(a + j + 1, r - j) * rising(a + b + r + 1, j) * w ** j
    return total / math.factorial(r)


def hyp2f1_terminating(a, b, c, z) -> Fraction:
    a, b, c, z = _frac(a), _frac(b), _frac(c), Fraction(z)
    if _is_nonpos_int(a):
        n = int(-a)
    elif _is_nonpos_int(b):
        n = int(-b)
    else:
        raise ValueError("2F1 terminates only if a or b is a nonpositive integer")
    total = Fraction(0)
    term = Fraction(1)
    for k in range(n + 1):
        total += term
        if k == n:
            break
        if c + k == 0:
            raise PoleInParameter(f"c + {k} vanishes")
        term = term * (a + k) * (b + k) / ((c + k) * (k + 1)) * z
    return total


def jacobi_poly_hyp(r: int, a, b, z) -> Fraction:
    """(a+1)_r / r! * 2F1(-r, a+b+r+1; a+1; (1-z)/2)."""
    a, b, z = _frac(a), _frac(b), Fraction(z)
    return rising(a + 1, r) / math.factorial(r) * hyp2f1_terminating(-r, a + b + r + 1, a + 1, (1 - z) / 2)


def euler_transformation_check(a, b, c, z) -> bool:
    """2F1(a,b;c;z) = (1-z)^(c-a-b) 2F1(c-a,c-b;c;z) on instances where both sides terminate."""
    a, b, c, z = _frac(a), _frac(b), _frac(c), Fraction(z)
    e = c - a - b
    if e.denominator != 1:
        raise ValueError("c - a - b must be an integer for an exact check")
    return hyp2f1_terminating(a, b, c, z) == (1 - z) ** int(e) * hyp2f1_terminating(c - a, c - b, c, z)


def homogeneous_P(a: int, b, X, Y) -> Fraction:
    """P_{a,b}(X, Y) = sum_j C(j+b-2, j) X^j (X+Y)^(a-j-2)."""
    if a < 2:
        raise ValueError("a must be at least 2")
    b, X, Y = _frac(b), Fraction(X), Fraction(Y)
    return sum((gen_binomial(j + b - 2, j) * X ** j * (X + Y) ** (a - j - 2) for j in range(a - 1)),
               Fraction(0))


def homogeneous_P_alt(a: int, b, X, Y) -> Fraction:
    """The closed form sum_j C(a+b-3, a-2-j) C(j+b-2, j) (X+Y)^(a-2-j) (-Y)^j, valid for b != 1, 2."""
    b, X, Y = _frac(b), Fraction(X), Fraction(Y)
    if b in (1, 2):
        raise ValueError("alternate form requires b != 1, 2")
    return sum((gen_binomial(a + b - 3, a - 2 - j) * gen_binomial(j + b - 2, j)
                * (X + Y) ** (a - 2 - j) * (-Y) ** j for j in range(a - 1)), Fraction(0))


def dual_formula_pair(kappa: int, k_f, m: int, n: int) -> tuple[Fraction, Fraction]:
    """Both sides of P_{kappa-2}^{(1-k_f, 1-kappa)}(1 - 2m/n) = P_{kappa, 2-k_f}(n-m, m) / n^(kappa-2)."""
    k_f = _frac(k_f)
    _check_weights(k_f, kappa - k_f)
    lhs = jacobi_poly(kappa - 2, 1 - k_f, 1 - kappa, 1 - Fraction(2 * m, n))
    rhs = homogeneous_P(kappa, 2 - k_f, n - m, m) / Fraction(n) ** (kappa - 2)
    return lhs, rhs


def _check_weights(k_f, k_g) -> None:
    k_f, k_g = Fraction(k_f), Fraction(k_g)
    if k_f.denominator == 1 and k_f >= 1:
        raise PoleInParameter("k_f must not be a positive integer")
    if k_g.denominator == 1 and k_g <= -1:
        raise PoleInParameter("k_g must not be a negative integer")


# ---------------------------------------------------------------------------
# exact defect on the square lattice (k_f = 3/2, kappa = 3)


GAMMA_M_HALF = "Gamma(-1/2)"


def defect_factor_theta(m: int, n: int) -> Fraction:
    """N^(1/2) P_1^{(-1/2,-2)}(1 - 2M/N) - M^(1/2) at M = m^2, N = n^2, which is (n-m)^2/(2n)."""
    if m < 0 or n < 1:
        raise ValueError("need m >= 0 and n >= 1")
    return n * jacobi_poly(1, Fraction(-1, 2), -2, 1 - Fraction(2 * m * m, n * n)) - m


def _defect_term(chi_m, psi_n_times_n, factor) -> Fraction:
    # -Gamma(1 - k_f) * alpha(m^2) * beta(n^2) * factor with alpha(m^2) = 2 chi(m) / Gamma(-1/2)
    gamma = Tagged(Fraction(-1), {GAMMA_M_HALF: 1})
    alpha = Tagged(2 * chi_m, {GAMMA_M_HALF: -1})
    return (gamma * alpha * (psi_n_times_n * factor)).untag()


def projection_defect_series(chi: DirichletCharacter, psi: DirichletCharacter, prec: int,
                             include_constant_term: bool = False) -> QSeries:
    """The negated holomorphic-projection defect of F theta_psi, summed over the lattice
    m >= 1, n > m with exponent n^2 - m^2 < prec.  Equals
    sum chi(m) psi(n) (n - m)^2 q^(n^2 - m^2).

    With ``include_constant_term`` and trivial chi the m = 0 point, carrying
    the constant 1/2 of theta_1, is added; it contributes (1/2) psi(n) n^2 q^(n^2).
    """
    require_odd(psi)
    coeffs: list = [Fraction(0)] * prec
    m0 = 0 if (include_constant_term and chi.is_trivial) else 1
    for m in range(m0, prec):
        if 2 * m + 1 >= prec:
            break
        cm = Fraction(1, 2) if m == 0 else char_eval(chi, m)
        if not cm:
            continue
        n = m + 1
        while n * n - m * m < prec:
            pn = char_eval(psi, n)
            if pn:
                k = n * n - m * m
                coeffs[k] = coeffs[k] - _defect_term(cm, pn * n, defect_factor_theta(m, n))
            n += 1
    return QSeries([simplify(c) for c in coeffs], 0, prec)


def projection_coefficient_float(alpha, beta, k_f, kappa: int, r: int, mmax: int = 2000) -> complex:
    """Coefficient of q^r in pi_kappa(f g) for general weights, floating point.

    ``alpha`` and ``beta`` map positive integers to numbers; the sum over m
    is cut at ``mmax``.
    """
    kf = _frac(k_f)
    _check_weights(kf, kappa - kf)
    total = 0j
    for m in range(1, mmax + 1):
        n = m + r
        a, bb = alpha(m), beta(n)
        if a and bb:
            p = float(jacobi_poly(kappa - 2, 1 - kf, 1 - kappa, 1 - Fraction(2 * m, n)))
            total += a * bb * (n ** (float(kf) - 1) * p - m ** (float(kf) - 1))
    return -math.gamma(1 - float(kf)) * total


# ---------------------------------------------------------------------------
# incomplete gamma


_EULER_GAMMA = 0.5772156649015329


def _gamma_series_lower(s: float, x: float) -> float:
    """gamma(s, x) by its power series, s > 0."""
    term = 1.0 / s
    total = term
    k = 1
    while abs(term) > 1e-17 * abs(total):
        term *= x / (s + k)
        total += term
        k += 1
        if k > 10000:
            break
    return total * math.exp(-x + s * math.log(x))


def _gamma_cf_upper(s: float, x: float) -> float:
    """Gamma(s, x) by the Legendre continued fraction (modified Lentz)."""
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        d = tiny if abs(d) < tiny else d
        c = b + an / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return math.exp(-x + s * math.log(x)) * h


def _e1(x: float) -> float:
    if x >= 1.5:
        return _gamma_cf_upper(0.0, x)
    total = 0.0
    term = 1.0
    k = 1
    while True:
        term *= -x / k
        add = term / k
        total += add
        if abs(add) < 1e-18:
            break
        k += 1
    return -_EULER_GAMMA - math.log(x) - total


def _upper_base(s: float, x: float) -> float:
    if s == 0.0:
        return _e1(x)
    if x < 1.5:
        return math.gamma(s) - _gamma_series_lower(s, x)
    return _gamma_cf_upper(s, x)


def incomplete_gamma(s, x: float) -> float:
    """Gamma(s, x) for real s and x > 0."""
    if not x > 0:
        raise NonPositiveX(f"x must be positive, got {x}")
    s = float(_frac(s)) if isinstance(s, HalfInteger) else float(s)
    if x >= max(1.5, s):
        # the continued fraction converges for every real s here; recurrences would cancel
        return _gamma_cf_upper(s, x)
    if s > 1:
        base = s - math.ceil(s) + 1  # in (0, 1]
        val = _upper_base(base, x)
        t = base
        while t < s - 1e-12:
            val = t * val + math.exp(-x + t * math.log(x))
            t += 1
        return val
    if s > 0:
        return _upper_base(s, x)
    frac = s - math.floor(s)
    base = frac if frac > 0 else 0.0
    if base == 0.0:
        val, t = _e1(x), 0.0
    else:
        val, t = _upper_base(base, x), base
    while t > s + 1e-12:
        t -= 1
        val = (val - math.exp(-x + t * math.log(x))) / t
    return val


def incomplete_gamma_recurrence_residual(s: float, x: float) -> float:
    """|Gamma(s+1, x) - s Gamma(s, x) - x^s e^(-x)| relative to Gamma(s+1, x)."""
    lhs = incomplete_gamma(s + 1, x)
    rhs = s * incomplete_gamma(s, x) + math.exp(-x + s * math.log(x))
    return abs(lhs - rhs) / max(1.0, abs(lhs))


def incomplete_gamma_grid_report(tol: float = 1e-10) -> VerificationReport:
    """Recurrence residual and agreement with mpmath over s in [-2, 2], x in [0.1, 20]."""
    worst_rec = worst_ref = 0.0
    witness = None
    for i in range(17):
        s = -2 + 0.25 * i
        for x in (0.1, 0.3, 0.7, 1.0, 1.4, 1.6, 2.3, 3.5, 5.0, 8.0, 12.0, 20.0):
            rec = incomplete_gamma_recurrence_residual(s, x)
            ref = float(mpmath.gammainc(s, x))
            rel = abs(incomplete_gamma(s, x) - ref) / max(abs(ref), 1e-300)
            if max(rec, rel) > max(worst_rec, worst_ref):
                witness = (s, x)
            worst_rec, worst_ref = max(worst_rec, rec), max(worst_ref, rel)
    params = {"s": "[-2,2] step 1/4", "x": "[0.1,20]", "tol": tol}
    res = max(worst_rec, worst_ref)
    detail = f"recurrence {worst_rec:.1e}, vs mpmath {worst_ref:.1e}, worst at {witness}"
    if res < tol:
        return VerificationReport.passed("incomplete-gamma", params, residual=res, detail=detail)
    return VerificationReport.failed("incomplete-gamma", params, residual=res, detail=detail)


# ---------------------------------------------------------------------------
# Lipschitz summation


def lipschitz_check(w: ComplexPoint | complex, r: int, terms: int = 10_000) -> float:
    """|sum_j (w+j)^(-r) - (-2 pi i)^r/(r-1)! sum_{j>=1} j^(r-1) e(jw)|.

    The two-sided sum over |j| <= terms is completed by the midpoint
    integral of its tails, which leaves an error of order terms^-(r+1).
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    w = w.value if isinstance(w, ComplexPoint) else complex(w)
    if not w.imag > 0:
        raise ValueError("w must lie in the upper half plane")
    re_parts, im_parts = [], []
    for j in range(-terms, terms + 1):
        t = (w + j) ** (-r)
        re_parts.append(t.real)
        im_parts.append(t.imag)
    tail = ((w + terms + 0.5) ** (1 - r) + (-1) ** r * (terms + 0.5 - w) ** (1 - r)) / (r - 1)
    lhs = complex(math.fsum(re_parts), math.fsum(im_parts)) + tail
    q = cmath.exp(2j * math.pi * w)
    rhs = 0j
    j = 1
    qj = q
    while True:
        t = j ** (r - 1) * qj
        rhs += t
        if abs(t) < 1e-20 * max(1.0, abs(rhs)) and j > 2:
            break
        j += 1
        qj *= q
    rhs *= (-2j * math.pi) ** r / math.factorial(r - 1)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# Eichler integral rewriting of F^- and G^-


def _theta_even_terms(chi: DirichletCharacter, trunc: int):
    if chi.parity != 0:
        raise ValueError("the non-holomorphic parts use an even chi")
    if not chi.is_rational:
        raise ValueError("numeric evaluation needs a rational-valued chi")
    return [(m, float(char_eval(chi, m))) for m in range(1, trunc + 1) if char_eval(chi, m)]


def eichler_quadrature(chi: DirichletCharacter, tau: ComplexPoint, trunc: int = 20,
                       quad_tol: float = 1e-10):
    """(i/(pi sqrt 2)) int_{-conj(tau)}^{i oo} theta_chi(w) (-i(w+tau))^(-3/2) dw by quadrature.

    With w = -conj(tau) + i s the integrand becomes
    theta_chi(-u + i(v+s)) (2v+s)^(-3/2) and the prefactor -1/(pi sqrt 2).
    """
    u, v = tau.re, tau.im
    terms = _theta_even_terms(chi, trunc)
    const = 0.5 if chi.is_trivial else 0.0
    mp = mpmath.mp
    with mpmath.workdps(30):
        def integrand(s):
            th = mpmath.mpf(const)
            for m, c in terms:
                th += c * mpmath.expj(-2 * mp.pi * m * m * u) * mpmath.exp(-2 * mp.pi * m * m * (v + s))
            return th * (2 * v + s) ** mpmath.mpf(-1.5)

        val, err = mpmath.quad(integrand, [0, 1, 10, mpmath.inf], error=True)
        val = -val / (mp.pi * mpmath.sqrt(2))
    if err > quad_tol:
        raise QuadratureFailure(f"quadrature error estimate {float(err):.2e} exceeds {quad_tol:.0e}")
    return complex(val)


def eichler_series(chi: DirichletCharacter, tau: ComplexPoint, trunc: int = 20) -> complex:
    """2/Gamma(-1/2) sum chi(m) m Gamma(-1/2, 4 pi m^2 v) q^(-m^2), minus 1/(2 pi sqrt v) for trivial chi."""
    u, v = tau.re, tau.im
    g = -2.0 * math.sqrt(math.pi)
    total = 0j
    for m, c in _theta_even_terms(chi, trunc):
        x = 4 * math.pi * m * m * v
        if x > 120:
            # the term is of size e^(-x/2) x^(-3/2); stop before q^(-m^2) overflows
            break
        total += c * m * incomplete_gamma(-0.5, x) * cmath.exp(-2j * math.pi * m * m * complex(u, v))
    total *= 2 / g
    if chi.is_trivial:
        total -= 1 / (2 * math.pi * math.sqrt(v))
    return total


def eichler_integral_check(chi: DirichletCharacter, tau: ComplexPoint, trunc: int = 20,
                           quad_tol: float = 1e-10) -> float:
    return abs(eichler_quadrature(chi, tau, trunc, quad_tol) - eichler_series(chi, tau, trunc))


def integral_lemma_check(a: float, b: float, c: float, s: float) -> float:
    """Residual of int_0^oo Gamma(a, cz) z^(b-1) e^(-sz) dz
    = c^a Gamma(a+b) / (b (c+s)^(a+b)) 2F1(1, a+b; b+1; s/(s+c))."""
    if not (b > 0 and a + b > 0 and c + s > 0):
        raise ValueError("need b > 0, a + b > 0, c + s > 0")
    with mpmath.workdps(30):
        lhs = mpmath.quad(lambda z: mpmath.gammainc(a, c * z) * z ** (b - 1) * mpmath.exp(-s * z),
                          [0, 1, 10, mpmath.inf])
        rhs = (mpmath.mpf(c) ** a * mpmath.gamma(a + b) / (b * mpmath.mpf(c + s) ** (a + b))
               * mpmath.hyp2f1(1, a + b, b + 1, mpmath.mpf(s) / (s + c)))
        return float(abs(lhs - rhs) / max(1, abs(rhs)))


def projection_integral_check(k_f: float, kappa: int, m: int, r: int) -> float:
    """Residual of the identity expressing
    int_0^oo Gamma(1-k_f, 4 pi m y) y^(kappa-2) e^(-4 pi r y) dy through P_{kappa, 2-k_f}."""
    k_g = kappa - k_f
    with mpmath.workdps(30):
        pi4 = 4 * mpmath.pi
        lhs = mpmath.quad(lambda y: mpmath.gammainc(1 - k_f, pi4 * m * y) * y ** (kappa - 2)
                          * mpmath.exp(-pi4 * r * y), [0, 1, mpmath.inf])
        P = float(homogeneous_P(kappa, Fraction(2 - k_f).limit_denominator(1000), r, m))
        rhs = (-(pi4 ** (1 - kappa)) * mpmath.mpf(m) ** (1 - k_f) * mpmath.gamma(1 - k_f)
               * math.factorial(kappa - 2) / mpmath.mpf(r) ** (kappa - 1)
               * (mpmath.mpf(r + m) ** (1 - k_g) * P - mpmath.mpf(m) ** (k_f - 1)))
        return float(abs(lhs - rhs) / max(mpmath.mpf(1e-30), abs(rhs)))
