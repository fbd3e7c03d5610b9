"""Named verification harnesses shared by the CLI and the acceptance tests.

Each harness returns a list of :class:`VerificationReport`; ordering is
fixed so ``verify all`` output is deterministic.
"""

from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction

from . import arithfn, holoproj, jacobi
from .characters import char_from_kronecker, parse_character, trivial_character
from .qseries import QSeries, qs_u_operator, sturm_bound
from .report import VerificationReport

ODD_PSI = ("kronecker:-4", "kronecker:-8", "kronecker:-3")


def hurwitz(prec: int = 800, threads: int = 1) -> list[VerificationReport]:
    return [arithfn.verify_hurwitz_identity(prec, threads)]


def holoproj_cancellation(prec: int = 2000) -> list[VerificationReport]:
    """mock_numerator against the projection defect, by divisor sums versus lattice sums."""
    pairs = [("trivial:1", "kronecker:-4")] + [("kronecker:12", p) for p in ODD_PSI]
    out = []
    for c, p in pairs:
        chi, psi = parse_character(c), parse_character(p)
        lhs = arithfn.mock_numerator(chi, psi, prec)
        rhs = holoproj.projection_defect_series(chi, psi, prec, include_constant_term=True)
        out.append(arithfn.series_mismatch_report("holoproj", {"chi": c, "psi": p, "prec": prec},
                                                  lhs, rhs))
    return out


def lattice_congruence_check(psi, chi, p: int, a: int, b: int, prec: int) -> VerificationReport:
    """Divisibility of the lattice side (the sum over D_r(p)) after U(p^b)."""
    L = qs_u_operator(arithfn.congruence_lattice_series(chi, psi, p, a, prec), p ** b)
    mod = p ** min(a, b)
    params = {"psi": psi.label, "chi": chi.label, "p": p, "a": a, "b": b, "prec": prec}
    for k, c in L.nonzero():
        c = Fraction(c)
        if c.denominator % p == 0 or c.numerator % mod:
            return VerificationReport.failed("congruence-lattice", params, exponent=k, lhs=c,
                                             rhs=f"0 mod {mod}")
    return VerificationReport.passed("congruence-lattice", params, verified=(0, L.prec - 1))


def congruence(prec: int = 2000, primes=(3, 5, 7)) -> list[VerificationReport]:
    psi = char_from_kronecker(-4)
    out = []
    for chi in (char_from_kronecker(12), trivial_character(1)):
        plus = arithfn.mock_plus_part(chi, psi, prec)
        for p in primes:
            for a in (1, 2):
                for b in (1, 2):
                    out.append(arithfn.padic_congruence_check(psi, chi, p, a, b, prec, plus))
                    out.append(lattice_congruence_check(psi, chi, p, a, b, prec))
    return out


def alprop(prec: int = 300) -> list[VerificationReport]:
    return [jacobi.verify_alprop(char_from_kronecker(8), char_from_kronecker(-4), prec)]


def partial_theta(prec: int = 100) -> list[VerificationReport]:
    return [jacobi.partial_theta_report(prec)]


def prop_ii(tol: float = 1e-8, quad_tol: float = 1e-10, taus=((0.0, 1.0), (0.0, 2.0))) -> list[VerificationReport]:
    out = []
    for re, im in taus:
        tau = holoproj.ComplexPoint(re, im)
        params = {"tau": f"{re}+{im}i", "tol": tol}
        res, data = jacobi.verify_prop_ii(tau, quad_tol, qprec=52)
        d1 = "D1 = 0" if data.D1.is_zero() else f"D1 nonzero, valuation {data.D1.valuation()}"
        detail = f"{d1} to q^{data.D1.prec_exponent}"
        if res < tol:
            out.append(VerificationReport.passed("prop-ii", params, residual=res, detail=detail))
        else:
            out.append(VerificationReport.failed("prop-ii", params, residual=res, detail=detail))
    return out


def triple_product(prec: int = 20) -> list[VerificationReport]:
    out = [jacobi.triple_product_report(prec)]
    for lam in (0, 1):
        for mu in (0, 1):
            out.append(jacobi.elliptic_shift_check(lam, mu, prec))
    return out


def appell_lerch_numeric(ell, j, w, z, tau: complex, tau_scale: int = 1, N: int = 60) -> complex:
    """Direct numeric summation of the defining series of D_z^j A_ell."""
    wv = complex(w.mu) * tau + float(w.nu)
    zv = complex(z.mu) * tau + float(z.nu)
    q = cmath.exp(2j * math.pi * tau_scale * tau)
    ew = cmath.exp(2j * math.pi * wv)
    total = 0j
    for n in range(-N, N + 1):
        total += (n ** j * (-1) ** (ell * n) * q ** (ell * n * (n + 1) / 2)
                  * cmath.exp(2j * math.pi * n * zv) / (1 - ew * q ** n))
    return cmath.exp(1j * math.pi * ell * wv) * total


def appell_lerch_exactness(seed: int = 0, trials: int = 5, tol: float = 1e-9) -> list[VerificationReport]:
    rng = random.Random(seed)
    tau = 0.4j
    out = []
    for _ in range(trials):
        ell = rng.choice((1, 2))
        j = rng.choice((0, 1, 2))
        w = jacobi.TorsionPoint(Fraction(rng.randint(1, 6), rng.choice((1, 2))), Fraction(rng.randint(1, 5), 6))
        z = jacobi.TorsionPoint(Fraction(rng.randint(-3, 3), rng.choice((1, 2))), Fraction(rng.randint(0, 3), 4))
        params = {"ell": ell, "j": j, "w": f"{w.mu}tau+{w.nu}", "z": f"{z.mu}tau+{z.nu}"}
        exact = jacobi.appell_lerch_specialized(ell, j, w, z, 30)
        res = abs(jacobi.eval_qseries(exact, tau) - appell_lerch_numeric(ell, j, w, z, tau))
        rep = VerificationReport.passed if res < tol else VerificationReport.failed
        out.append(rep("appell-lerch", params, residual=res))
    return out


def _rand_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-50, 50), rng.randint(1, 30))


def jacobi_poly(max_degree: int = 10, trials: int = 100, seed: int = 0) -> list[VerificationReport]:
    rng = random.Random(seed)
    out = []
    # finite sum against the 2F1 form
    bad = None
    count = 0
    for r in range(max_degree + 1):
        for a, b in ((Fraction(-1, 2), -2), (Fraction(-1, 2), -3), (Fraction(1, 2), Fraction(-5, 2)),
                     (Fraction(-3, 2), Fraction(1, 2))):
            for _ in range(trials):
                z = _rand_rational(rng)
                try:
                    x, y = holoproj.jacobi_poly(r, a, b, z), holoproj.jacobi_poly_hyp(r, a, b, z)
                except holoproj.PoleInParameter:
                    continue
                count += 1
                if x != y and bad is None:
                    bad = (f"r={r} a={a} b={b} z={z}", x, y)
    params = {"max_degree": max_degree, "trials": trials, "seed": seed}
    out.append(VerificationReport.failed("jacobi-2f1", params, exponent=bad[0], lhs=bad[1], rhs=bad[2])
               if bad else VerificationReport.passed("jacobi-2f1", params, detail=f"{count} evaluations"))
    # dual formula of the two projection proofs
    bad, count = None, 0
    for kappa in range(2, 9):
        for kf in (Fraction(1, 2), Fraction(3, 2), Fraction(5, 2)):
            for _ in range(trials):
                n = rng.randint(2, 200)
                m = rng.randint(1, n - 1)
                x, y = holoproj.dual_formula_pair(kappa, kf, m, n)
                count += 1
                if x != y and bad is None:
                    bad = (f"kappa={kappa} k_f={kf} m={m} n={n}", x, y)
    out.append(VerificationReport.failed("jacobi-dual", params, exponent=bad[0], lhs=bad[1], rhs=bad[2])
               if bad else VerificationReport.passed("jacobi-dual", params, detail=f"{count} evaluations"))
    # the two forms of P_{a,b}
    bad, count = None, 0
    for a in range(2, 9):
        for b in (Fraction(1, 2), Fraction(3, 2), Fraction(5, 2)):
            for _ in range(trials):
                X, Y = _rand_rational(rng), _rand_rational(rng)
                x, y = holoproj.homogeneous_P(a, b, X, Y), holoproj.homogeneous_P_alt(a, b, X, Y)
                count += 1
                if x != y and bad is None:
                    bad = (f"a={a} b={b} X={X} Y={Y}", x, y)
    out.append(VerificationReport.failed("homogeneous-P", params, exponent=bad[0], lhs=bad[1], rhs=bad[2])
               if bad else VerificationReport.passed("homogeneous-P", params, detail=f"{count} evaluations"))
    # Euler transformation on doubly terminating instances
    ok, count = True, 0
    for k in range(0, 6):
        for l in range(0, 6):
            for b in (Fraction(1, 2), Fraction(7, 2), Fraction(-5, 2)):
                a, c = -k, b - l
                if any(c + i == 0 for i in range(max(k, l) + 1)):
                    continue
                z = _rand_rational(rng)
                if z == 1:
                    continue
                count += 1
                ok = ok and holoproj.euler_transformation_check(a, b, c, z)
    out.append(VerificationReport.passed("euler-transformation", params, detail=f"{count} instances") if ok
               else VerificationReport.failed("euler-transformation", params, residual=1.0))
    return out


def lipschitz(tol: float = 1e-8) -> list[VerificationReport]:
    out = []
    for r in (2, 3, 4):
        for w in (1j, 0.3 + 0.7j):
            res = holoproj.lipschitz_check(w, r)
            rep = VerificationReport.passed if res < tol else VerificationReport.failed
            out.append(rep("lipschitz", {"r": r, "w": str(w), "tol": tol}, residual=res))
    return out


def incomplete_gamma(tol: float = 1e-10) -> list[VerificationReport]:
    return [holoproj.incomplete_gamma_grid_report(tol)]


def eichler(tol: float = 1e-8, quad_tol: float = 1e-10) -> list[VerificationReport]:
    out = []
    for spec in ("trivial:1", "kronecker:12"):
        chi = parse_character(spec)
        for im in (1.0, 2.0):
            tau = holoproj.ComplexPoint(0.0, im)
            res = holoproj.eichler_integral_check(chi, tau, quad_tol=quad_tol)
            scale = abs(holoproj.eichler_series(chi, tau))
            rep = VerificationReport.passed if res < tol else VerificationReport.failed
            out.append(rep("eichler", {"chi": spec, "tau": f"{im}i", "tol": tol}, residual=res,
                           detail=f"|F^-| = {scale:.3e}"))
    return out


def integral_lemma(tol: float = 1e-8) -> list[VerificationReport]:
    out = []
    for a, b, c, s in ((-0.5, 1.5, 2.0, 1.0), (0.5, 2.0, 1.0, 0.5), (-0.5, 2.0, 4.0, 2.0),
                       (1.5, 0.5, 3.0, -1.0), (0.25, 1.0, 1.0, 1.0)):
        res = holoproj.integral_lemma_check(a, b, c, s)
        rep = VerificationReport.passed if res < tol else VerificationReport.failed
        out.append(rep("integral-lemma", {"a": a, "b": b, "c": c, "s": s}, residual=res))
    for kf, kappa, m, r in ((1.5, 3, 1, 2), (0.5, 4, 2, 3), (2.5, 5, 3, 1)):
        res = holoproj.projection_integral_check(kf, kappa, m, r)
        rep = VerificationReport.passed if res < tol else VerificationReport.failed
        out.append(rep("projection-integral", {"k_f": kf, "kappa": kappa, "m": m, "r": r}, residual=res))
    return out


# ---------------------------------------------------------------------------


def search_hurwitz_analogue(psi_spec: str, C_values, t_values, prec: int, max_modulus: int = 24,
                            min_hits: int = 3) -> list[dict]:
    """Scan (C, t, A, B): does C [q^m] G^+(t tau) = H(m) for all m = B mod A below prec?"""
    psi = parse_character(psi_spec)
    G = arithfn.mock_plus_part(trivial_character(1), psi, prec)
    H = arithfn.hurwitz_table(prec)
    cands = []
    for t in t_values:
        t = Fraction(t)
        top = int(G.prec_exponent * t)  # exponents of G(t tau) known below this
        top = min(top, prec)

        def g(m):
            e = Fraction(m) / t
            k = e * G.den
            return G[e] if k.denominator == 1 else Fraction(0)

        for A in range(1, max_modulus + 1):
            for B in range(A):
                ms = [m for m in range(B, top, A) if m > 0]
                if len(ms) < min_hits:
                    continue
                for C in C_values:
                    C = Fraction(C)
                    if not C:
                        continue
                    hits = 0
                    ok = True
                    for m in ms:
                        v = C * g(m)
                        if v != H[m]:
                            ok = False
                            break
                        hits += v != 0
                    if ok and hits >= min_hits:
                        cands.append({"psi": psi_spec, "C": C, "t": t, "A": A, "B": B,
                                      "checked_upto": top, "nonzero": hits,
                                      "sturm_bound_weight_3/2": sturm_bound(Fraction(3, 2), 4 * psi.modulus ** 2 * A)})
    # keep the primitive progressions only
    prim = []
    for c in cands:
        if not any(d is not c and d["C"] == c["C"] and d["t"] == c["t"] and c["A"] % d["A"] == 0
                   and c["B"] % d["A"] == d["B"] and d["A"] < c["A"] for d in cands):
            prim.append(c)
    return prim


HARNESSES = {
    "hurwitz": hurwitz,
    "holoproj": holoproj_cancellation,
    "congruence": congruence,
    "alprop": alprop,
    "partial-theta": partial_theta,
    "prop-ii": prop_ii,
    "triple-product": triple_product,
    "appell-lerch": appell_lerch_exactness,
    "jacobi-poly": jacobi_poly,
    "lipschitz": lipschitz,
    "incomplete-gamma": incomplete_gamma,
    "eichler": eichler,
    "integral-lemma": integral_lemma,
}
