"""Jacobi theta function, Appell-Lerch sums at torsion points, and the
verifiers built on them.

Sign convention.  Throughout, ``S(z)`` denotes the signed half-integer sum
sum_{nu in 1/2 + Z} (-1)^(nu - 1/2) q^(nu^2/2) zeta^nu.  The product side
-i zeta^(-1/2) q^(1/8) prod (1-q^(j+1))(1-zeta q^j)(1-zeta^-1 q^(j+1)) equals
i S(z), so theta is handled as the pair (S, formal unit i).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .characters import DirichletCharacter, char_eval, require_odd
from .exactnum import CyclotomicNumber, Scalar, Tagged, inverse, root, simplify
from .holoproj import ComplexPoint, QuadratureFailure
from .qseries import QSeries, TwoVarSeries, laurent_extract, qs_div, qs_mul
from .report import VerificationReport

ZERO = Fraction(0)


class PoleAtSpecialization(ArithmeticError):
    pass


class TruncationBoundExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class TorsionPoint:
    """mu * tau + nu (+ t_coeff * t for the auxiliary unit-circle variable x = e(t))."""

    mu: Fraction
    nu: Fraction
    t_coeff: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mu", Fraction(self.mu))
        object.__setattr__(self, "nu", Fraction(self.nu))


def e_rational(x: Fraction) -> Scalar:
    """e^(2 pi i x) for rational x as an exact root of unity."""
    x = Fraction(x)
    return simplify(root(x.denominator, x.numerator % x.denominator))


# ---------------------------------------------------------------------------
# theta


@dataclass
class TaggedSeries:
    series: TwoVarSeries
    tags: dict = field(default_factory=dict)


def _theta_prec(prec) -> int:
    """Numerator bound (den 8) for q-exponents below prec + 1/8."""
    return 8 * int(prec) + 1


def jacobi_theta_series(prec) -> TaggedSeries:
    """theta(z; tau) = i * S(z) with S the signed half-integer sum; x stands for zeta.

    All q-exponents below prec + 1/8 are exact.
    """
    P = _theta_prec(prec)
    mons = []
    k = 0
    while (2 * k + 1) ** 2 < P:
        for nu2 in (2 * k + 1, -(2 * k + 1)):
            sign = 1 if ((nu2 - 1) // 2) % 2 == 0 else -1
            mons.append((Fraction(nu2, 2), nu2 * nu2, Fraction(sign)))
        k += 1
    s = TwoVarSeries.from_monomials(mons, P, 8)
    return TaggedSeries(s, {"i": 1})


def jacobi_theta_product(prec) -> TaggedSeries:
    """The triple product expanded to the same precision as :func:`jacobi_theta_series`.

    The product is -i times zeta^(-1/2) q^(1/8) prod(...), recorded as
    i times the negated core so both sides carry the same formal unit.
    """
    N = int(prec)  # core exponents k < N give 8k + 1 < 8N + 1
    poly: dict[tuple[int, int], int] = {(0, 0): 1}

    def times(factor):
        out: dict[tuple[int, int], int] = {}
        for (xa, qa), ca in poly.items():
            for xb, qb, cb in factor:
                qq = qa + qb
                if qq >= N:
                    continue
                key = (xa + xb, qq)
                out[key] = out.get(key, 0) + ca * cb
        return {k: v for k, v in out.items() if v}

    for j in range(N + 1):
        if j + 1 < N:
            poly = times([(0, 0, 1), (0, j + 1, -1)])
        if j < N:
            poly = times([(0, 0, 1), (1, j, -1)])
        if j + 1 < N:
            poly = times([(0, 0, 1), (-1, j + 1, -1)])
    mons = [(Fraction(2 * xa - 1, 2), 8 * qa + 1, Fraction(-c)) for (xa, qa), c in poly.items()]
    return TaggedSeries(TwoVarSeries.from_monomials(mons, _theta_prec(prec), 8), {"i": 1})


def triple_product_report(prec: int = 20) -> VerificationReport:
    a, b = jacobi_theta_series(prec), jacobi_theta_product(prec)
    params = {"prec": prec}
    if a.tags != b.tags:
        return VerificationReport.failed("triple-product", params, residual=float("inf"),
                                         detail=f"formal units {a.tags} vs {b.tags}")
    d = a.series.first_difference(b.series)
    if d is not None:
        j, e, x, y = d
        return VerificationReport.failed("triple-product", params, exponent=f"zeta^{j} q^{e}", lhs=x, rhs=y)
    return VerificationReport.passed("triple-product", params, verified=(0, prec),
                                     detail=f"{len(a.series.terms)} zeta-powers")


def elliptic_shift_check(lam: int, mu: int, prec: int = 20) -> VerificationReport:
    """theta(z + lam tau + mu) = (-1)^(lam+mu) q^(-lam^2/2) zeta^(-lam) theta(z), both sides exact.

    The left side is enumerated term by term: zeta^nu -> zeta^nu q^(lam nu) (-1)^mu.
    """
    P = _theta_prec(prec)
    shift_num = 4 * lam * lam  # lam^2/2 in den 8
    mons = []
    k = 0
    # exponent (nu + lam)^2/2 - lam^2/2 >= -lam^2/2; stop once every further nu is >= P - shift
    while True:
        hit = False
        for nu2 in (2 * k + 1, -(2 * k + 1)):
            e = (nu2 * nu2 + 4 * lam * nu2)  # 8 * (nu^2/2 + lam nu)
            if e < P - shift_num:
                hit = True
                sign = 1 if ((nu2 - 1) // 2) % 2 == 0 else -1
                sign *= (-1) ** mu
                mons.append((Fraction(nu2, 2), e, Fraction(sign)))
        if not hit and (2 * k + 1) > 2 * lam + 2:
            break
        k += 1
    lhs = TwoVarSeries.from_monomials(mons, P - shift_num, 8)
    rhs = jacobi_theta_series(prec).series.shift(-lam, Fraction(-lam * lam, 2)) * Fraction((-1) ** (lam + mu))
    params = {"lambda": lam, "mu": mu, "prec": prec}
    d = lhs.first_difference(rhs)
    if d is not None:
        j, e, x, y = d
        return VerificationReport.failed("elliptic-shift", params, exponent=f"zeta^{j} q^{e}", lhs=x, rhs=y)
    return VerificationReport.passed("elliptic-shift", params,
                                     verified=(Fraction(-lam * lam, 2), Fraction(rhs.prec, 8)))


def eval_theta_numeric(z: complex, tau: ComplexPoint | complex, trunc: int | None = None) -> complex:
    """i * S(z) by the truncated signed half-integer sum."""
    t = tau.value if isinstance(tau, ComplexPoint) else complex(tau)
    v = t.imag
    if trunc is None:
        # |q|^(nu^2/2) e^(2 pi |nu| |Im z|) < 1e-17 for |nu| > trunc
        y = abs(complex(z).imag)
        trunc = 1
        while math.pi * v * (trunc + 0.5) ** 2 - 2 * math.pi * (trunc + 0.5) * y < 40:
            trunc += 1
    total = 0j
    for k in range(-trunc - 1, trunc + 1):
        nu = k + 0.5
        total += (-1) ** (k % 2) * cmath.exp(1j * math.pi * nu * nu * t + 2j * math.pi * nu * z)
    return 1j * total


def eval_theta_product_numeric(z: complex, tau: ComplexPoint | complex, factors: int = 60) -> complex:
    t = tau.value if isinstance(tau, ComplexPoint) else complex(tau)
    q = cmath.exp(2j * math.pi * t)
    ze = cmath.exp(2j * math.pi * z)
    p = -1j * cmath.exp(-1j * math.pi * z) * cmath.exp(1j * math.pi * t / 4)
    qj = 1
    for _ in range(factors):
        p *= (1 - qj * q) * (1 - ze * qj) * (1 - qj * q / ze)
        qj *= q
    return p


# ---------------------------------------------------------------------------
# Appell-Lerch sums


def _al_terms(ell: int, j: int, w: TorsionPoint, z: TorsionPoint, prec_exp: Fraction,
              tau_scale: int = 1, max_terms: int = 100_000):
    """Yield (n, x_power, q_exponent, coefficient) for every monomial of
    D_z^j A_ell(w, z; T tau) with q-exponent < prec_exp.

    Completeness: the smallest exponent contributed by index n is a convex
    function of n, so scanning outward from its minimum until it reaches
    prec_exp on both sides covers every contributing n.
    """
    if ell < 1:
        raise ValueError("level must be positive")
    if z.t_coeff:
        raise ValueError("the elliptic variable must not involve t")
    T = tau_scale
    rho = e_rational(w.nu)
    pre_root = e_rational(Fraction(ell, 2) * w.nu)
    pre_q = Fraction(ell, 2) * w.mu

    def base(n):  # exponent of q^(T ell n(n+1)/2) e(n z), plus the prefactor
        return pre_q + Fraction(T * ell * n * (n + 1), 2) + n * z.mu

    def geo(n):
        return T * n + w.mu

    def first(n):
        g = geo(n)
        return base(n) + (-g if g < 0 else 0)

    # locate the minimum of the convex function first(n)
    n = round(-0.5 - float(z.mu) / (T * ell))
    while first(n - 1) < first(n):
        n -= 1
    while first(n + 1) < first(n):
        n += 1
    count = 0
    for direction in (0, 1):
        m = n if direction == 0 else n + 1
        step = -1 if direction == 0 else 1
        while first(m) < prec_exp:
            count += 1
            if count > max_terms:
                raise TruncationBoundExceeded(f"more than {max_terms} indices below q^{prec_exp}")
            yield from _al_index_terms(m, ell, j, w, z, prec_exp, base(m), geo(m), rho, pre_root)
            m += step


def _al_index_terms(n, ell, j, w, z, prec_exp, b, g, rho, pre_root):
    if j and n == 0:
        return
    c = Fraction(n) ** j * (-1) ** ((ell * n) % 2)
    c = simplify(c * e_rational(n * z.nu) * pre_root)
    xt = w.t_coeff
    xpre = Fraction(ell * xt, 2)
    if g > 0:
        k = 0
        while b + k * g < prec_exp:
            yield n, xpre + k * xt, b + k * g, simplify(c * rho ** k if k else c)
            k += 1
    elif g < 0:
        k = 1
        rinv = inverse(rho)
        while b - k * g < prec_exp:
            yield n, xpre - k * xt, b - k * g, simplify(-c * rinv ** k)
            k += 1
    else:
        if xt or rho == 1:
            raise PoleAtSpecialization(f"denominator 1 - e(w) q^{n} vanishes identically at n = {n}")
        if b < prec_exp:
            yield n, xpre, b, simplify(c * inverse(1 - rho))


def _series_den(*fracs) -> int:
    d = 1
    for f in fracs:
        d = math.lcm(d, Fraction(f).denominator)
    return d


def appell_lerch_specialized(ell: int, j: int, w: TorsionPoint, z: TorsionPoint, prec,
                             tau_scale: int = 1) -> QSeries:
    """D_z^j A_ell(w, z; T tau) at torsion points, exact for q-exponents below ``prec``."""
    if w.t_coeff:
        raise ValueError("use appell_lerch_twovar for w involving t")
    prec = Fraction(prec)
    den = _series_den(Fraction(ell, 2) * w.mu, z.mu, w.mu, prec)
    terms: dict[Fraction, Scalar] = {}
    for _, _, e, c in _al_terms(ell, j, w, z, prec, tau_scale):
        terms[e] = terms.get(e, ZERO) + c
    return QSeries.from_terms(terms, int(prec * den), den)


def appell_lerch_twovar(ell: int, j: int, w: TorsionPoint, z: TorsionPoint, prec,
                        tau_scale: int = 1, branches: bool = False):
    """D_z^j A_ell with w = t_coeff * t + mu tau + nu as a Laurent series in x = e(t).

    With ``branches`` the result is split by the sign of n (keys "n>=1", "n=0",
    "n<=-1").
    """
    prec = Fraction(prec)
    den = _series_den(Fraction(ell, 2) * w.mu, z.mu, w.mu, prec)
    P = int(prec * den)
    buckets: dict[str, list] = {"n>=1": [], "n=0": [], "n<=-1": []}
    for n, xp, e, c in _al_terms(ell, j, w, z, prec, tau_scale):
        key = "n>=1" if n >= 1 else ("n=0" if n == 0 else "n<=-1")
        buckets[key].append((xp, int(e * den), c))
    everything = [m for ms in buckets.values() for m in ms]
    lo = min((m[0] for m in everything), default=Fraction(0))
    hi = max((m[0] for m in everything), default=Fraction(0))
    # every monomial below prec was enumerated, so any x-power is exact
    xr = (min(lo, Fraction(-1)) - 1000, max(hi, Fraction(1)) + 1000)

    def build(ms):
        s = TwoVarSeries.from_monomials(ms, P, den)
        return TwoVarSeries(s.terms, P, den, xrange=xr)

    if branches:
        return {k: build(ms) for k, ms in buckets.items()}
    return build(everything)


def partial_theta_branches(prec) -> dict[str, QSeries]:
    """x^(-2) coefficient of A_2(t - tau/2, 0; tau), split into the three n-ranges."""
    w = TorsionPoint(Fraction(-1, 2), 0, 1)
    z = TorsionPoint(0, 0)
    parts = appell_lerch_twovar(2, 0, w, z, prec, branches=True)
    return {k: laurent_extract(F, -2).canonical() for k, F in parts.items()}


def partial_theta_extraction(prec) -> QSeries:
    """J(tau) = int_{-1/2}^{1/2} e(2t) A_2(t - tau/2, 0; tau) dt as exact Fourier extraction."""
    w = TorsionPoint(Fraction(-1, 2), 0, 1)
    z = TorsionPoint(0, 0)
    return laurent_extract(appell_lerch_twovar(2, 0, w, z, prec), -2).canonical()


def partial_theta_report(prec: int = 100) -> VerificationReport:
    J = partial_theta_extraction(prec)
    target = QSeries.from_terms({n * n: Fraction(-1) for n in range(1, math.isqrt(prec) + 1)
                                 if n * n < prec}, prec)
    br = partial_theta_branches(prec)
    params = {"prec": prec}
    if not br["n>=1"].is_zero():
        return VerificationReport.failed("partial-theta", params, exponent=br["n>=1"].valuation(),
                                         lhs=br["n>=1"][br["n>=1"].valuation()], rhs=0,
                                         detail="n >= 1 branch")
    n0 = br["n=0"]
    if n0 != QSeries.from_terms({1: Fraction(-1)}, n0.prec, n0.den):
        return VerificationReport.failed("partial-theta", params, exponent=1, lhs=n0[1], rhs=-1,
                                         detail="n = 0 branch")
    from .arithfn import series_mismatch_report

    return series_mismatch_report("partial-theta", params, J, target, upto=prec)


# ---------------------------------------------------------------------------
# Laurent data of 1/theta^2


@dataclass
class LaurentData:
    D1: QSeries
    D2: QSeries
    lead: QSeries  # zhat-coefficient of S, so theta = i (lead zhat + ...)
    normalization: dict = field(default_factory=lambda: {"2pi*i": 0})


def theta_zhat_coefficients(orderK: int, prec) -> list[QSeries]:
    """Coefficients s_k of S(z) = sum_k s_k zhat^k, zhat = 2 pi i z, for k = 0..orderK."""
    P = _theta_prec(prec)
    out = []
    for k in range(orderK + 1):
        terms: dict[int, Fraction] = {}
        r = 0
        while (2 * r + 1) ** 2 < P:
            for nu2 in (2 * r + 1, -(2 * r + 1)):
                sign = 1 if ((nu2 - 1) // 2) % 2 == 0 else -1
                e = Fraction(nu2 * nu2, 8)
                terms[e] = terms.get(e, ZERO) + sign * Fraction(nu2, 2) ** k / math.factorial(k)
            r += 1
        out.append(QSeries.from_terms(terms, P, 8))
    return out


def theta_reciprocal_laurent(orderK: int, prec) -> LaurentData:
    """D2 / zhat^2 + D1 / zhat + O(1) = 1 / theta(z)^2 with zhat = 2 pi i z."""
    if orderK < 2:
        raise ValueError("orderK must be at least 2")
    s = theta_zhat_coefficients(orderK, prec)
    sq = []
    for k in range(orderK + 1):
        acc = QSeries.zero(s[0].prec, 8)
        for a in range(k + 1):
            acc = acc + qs_mul(s[a], s[k - a])
        sq.append(acc)
    v = next((k for k in range(orderK + 1) if not sq[k].is_zero()), None)
    if v != 2:
        raise ArithmeticError(f"theta^2 should vanish to order 2 in zhat, found {v}")
    # theta^2 = i^2 S^2; the formal unit folds into a sign
    unit = Tagged(Fraction(1), {"i": 2}).untag()
    a0, a1 = sq[2], sq[3] if orderK >= 3 else QSeries.zero(sq[2].prec, 8)
    b0 = qs_div(QSeries.from_terms({0: Fraction(1)}, a0.prec, 8), a0, require_unit=True)
    b1 = -qs_mul(a1, qs_mul(b0, b0))
    D2 = b0.scale(1 / unit)
    D1 = b1.scale(1 / unit)
    return LaurentData(D1, D2, s[1])


def eval_qseries(f: QSeries, tau: complex) -> complex:
    """Numeric value at tau; fractional exponents use the principal branch e(tau k/den)."""
    total = 0j
    for k, c in f.nonzero():
        cc = complex(c) if not isinstance(c, CyclotomicNumber) else complex(c.embed())
        total += cc * cmath.exp(2j * math.pi * tau * k / f.den)
    return total


def verify_prop_ii(tau: ComplexPoint, quad_tol: float = 1e-10, qprec: int = 50) -> tuple[float, LaurentData]:
    """|D1 sum q^(n^2) + 2 D2 sum n q^(n^2) - int e(2t) / theta(t - tau/2)^2 dt|."""
    t = tau.value
    data = theta_reciprocal_laurent(2, qprec)
    q = cmath.exp(2j * math.pi * t)
    s0 = sum(q ** (n * n) for n in range(1, 40))
    s1 = sum(n * q ** (n * n) for n in range(1, 40))
    lhs = eval_qseries(data.D1, t) * s0 + 2 * eval_qseries(data.D2, t) * s1
    with mpmath.workdps(25):
        def f(x):
            th = eval_theta_numeric(complex(x) - t / 2, t)
            return mpmath.mpc(cmath.exp(4j * math.pi * float(x)) / th ** 2)

        rhs, err = mpmath.quad(f, [-0.5, -0.25, 0, 0.25, 0.5], error=True)
    if err > quad_tol:
        raise QuadratureFailure(f"quadrature error estimate {float(err):.2e} exceeds {quad_tol:.0e}")
    return abs(lhs - complex(rhs)), data


# ---------------------------------------------------------------------------
# Appell-Lerch form of the sigma generating series


def alprop_rhs(chi: DirichletCharacter, psi: DirichletCharacter, prec: int) -> QSeries:
    M = chi.modulus
    total = QSeries.zero(prec)
    for b in range(1, M):
        cb = char_eval(chi, b)
        if not cb:
            continue
        for c in range(M):
            pc = char_eval(psi, b + c)
            if not pc:
                continue
            w = TorsionPoint(2 * M * c, 0)
            z = TorsionPoint((2 * (b + c) - M) * M, Fraction(1, 2))
            shift = c * (c + 2 * b - M)
            inner = None
            for j, coef in ((2, M * M), (1, 2 * c * M), (0, c * c)):
                if not coef:
                    continue
                a = appell_lerch_specialized(1, j, w, z, prec - shift, tau_scale=2 * M * M)
                a = a.scale(coef)
                inner = a if inner is None else inner + a
            total = total + inner.shift(shift).scale(simplify(cb * pc * Fraction(1, 2)))
    return total


def verify_alprop(chi: DirichletCharacter, psi: DirichletCharacter, prec: int) -> VerificationReport:
    from .arithfn import series_mismatch_report, sigma_generating_series

    if chi.is_trivial or chi.parity != 0:
        raise ValueError("chi must be even and non-trivial")
    require_odd(psi)
    if chi.modulus % psi.modulus:
        raise ValueError("the modulus of psi must divide the modulus of chi")
    params = {"chi": chi.label, "psi": psi.label, "prec": prec}
    lhs = sigma_generating_series(chi, psi, prec)
    rhs = alprop_rhs(chi, psi, prec)
    return series_mismatch_report("alprop", params, lhs, rhs, upto=prec)
