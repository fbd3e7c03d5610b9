"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import arithfn, suite
from .characters import parse_character
from .parallel import default_threads
from .qseries import sturm_bound
from .report import VerificationReport

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    precision: int = 800
    tolerance: float = 1e-8
    seed: int = 0
    threads: int = 1
    output: str = "text"

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("--prec must be at least 1")
        if not self.tolerance > 0:
            raise ValueError("--tol must be positive")
        if self.threads < 1:
            raise ValueError("--threads must be at least 1")
        if self.output not in ("text", "json", "csv"):
            raise ValueError("unknown output format")


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    return str(x)


def _json_value(x):
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return str(x)


def _emit_table(cfg: RunConfig, header: list[str], rows: list[list], out) -> None:
    if cfg.output == "json":
        json.dump([dict(zip(header, map(_json_value, r))) for r in rows], out)
        out.write("\n")
    elif cfg.output == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows([[_fmt(x) for x in r] for r in rows])
    else:
        for r in rows:
            out.write("\t".join(_fmt(x) for x in r) + "\n")


def _emit_reports(cfg: RunConfig, reports: list[VerificationReport], out) -> int:
    if cfg.output == "json":
        json.dump([r.to_dict() for r in reports], out, sort_keys=True)
        out.write("\n")
    elif cfg.output == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["name", "status", "params", "verified", "residual", "witness", "detail"])
        for r in reports:
            d = r.to_dict()
            w.writerow([d["name"], d["status"], json.dumps(d["params"], sort_keys=True),
                        json.dumps(d["verified"]), d["residual"], json.dumps(d["witness"]), d["detail"]])
    else:
        for r in reports:
            out.write(r.to_text() + "\n")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def _rational_range(text: str) -> list[Fraction]:
    """'a:b:step' or a comma list of rationals."""
    try:
        if ":" in text:
            lo, hi, step = (Fraction(x) for x in text.split(":"))
            if step <= 0:
                raise ValueError
            vals = []
            x = lo
            while x <= hi:
                vals.append(x)
                x += step
            return vals
        return [Fraction(x) for x in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad rational range {text!r}") from None


def _character(text: str):
    try:
        return parse_character(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad character {text!r}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=None, help="series precision (exponent bound)")
    common.add_argument("--tol", type=float, default=1e-8, help="numeric acceptance tolerance")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--csv", action="store_true", help="emit CSV")
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes (default: $SMALLDIV_THREADS or 1)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    p = argparse.ArgumentParser(prog="smalldiv", description="small divisor functions and identity checks")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sigma", parents=[common], help="small divisor function values")
    s.add_argument("--kind", type=int, choices=(1, 2), default=2)
    s.add_argument("--chi", type=_character, default="trivial:1")
    s.add_argument("--psi", type=_character, default="kronecker:-4")
    s.add_argument("--upto", type=int, required=True)

    s = sub.add_parser("theta", parents=[common], help="theta series coefficients")
    s.add_argument("--psi", type=_character, default="kronecker:-4")

    s = sub.add_parser("hurwitz", parents=[common], help="Hurwitz class numbers")
    s.add_argument("--upto", type=int, required=True)

    s = sub.add_parser("mockq", parents=[common], help="plus part F^+ or G^+")
    s.add_argument("--chi", type=_character, default="trivial:1")
    s.add_argument("--psi", type=_character, default="kronecker:-4")

    s = sub.add_parser("sturm", parents=[common], help="Sturm bound for Gamma_0(N)")
    s.add_argument("--weight", type=Fraction, required=True)
    s.add_argument("--level", type=int, required=True)

    s = sub.add_parser("congruence", parents=[common], help="p-adic congruence check")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--psi", type=_character, default="kronecker:-4")
    s.add_argument("--chi", type=_character, default="trivial:1")

    s = sub.add_parser("verify", parents=[common], help="run identity harnesses")
    s.add_argument("identity", choices=sorted(suite.HARNESSES) + ["all"])
    s.add_argument("--chi", type=_character, default=None)
    s.add_argument("--psi", type=_character, default=None)
    s.add_argument("--max-degree", type=int, default=10)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--tau", default=None, help="complex point like 0+1i")

    s = sub.add_parser("search-hurwitz-analogue", parents=[common],
                       help="scan (C, t) for Hurwitz class number progressions")
    s.add_argument("--psi", type=_character, required=True)
    s.add_argument("--C-range", dest="c_range", type=_rational_range, default="-1:1:1/4")
    s.add_argument("--t-range", dest="t_range", type=_rational_range, default="1/2,1,2")
    s.add_argument("--max-modulus", type=int, default=24)
    return p


def _parse_tau(text: str) -> tuple[float, float]:
    try:
        z = complex(text.replace("i", "j").replace(" ", ""))
    except ValueError:
        raise UsageError(f"--tau: cannot parse {text!r}") from None
    if z.imag <= 0:
        raise UsageError("--tau must lie in the upper half plane")
    return z.real, z.imag


def _config(ns, default_prec: int) -> RunConfig:
    threads = ns.threads if ns.threads is not None else default_threads()
    fmt = "json" if ns.json else ("csv" if ns.csv else "text")
    try:
        return RunConfig(ns.prec if ns.prec is not None else default_prec, ns.tol, ns.seed, threads, fmt)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _verify(ns, cfg: RunConfig) -> list[VerificationReport]:
    name = ns.identity
    N = cfg.precision
    if name == "all":
        out = []
        out += suite.hurwitz(N, cfg.threads)
        out += suite.holoproj_cancellation(N)
        out += suite.congruence(N)
        out += suite.alprop(min(N, 300))
        out += suite.partial_theta(min(N, 100))
        out += suite.prop_ii(cfg.tolerance)
        out += suite.triple_product(20)
        out += suite.appell_lerch_exactness(cfg.seed)
        out += suite.jacobi_poly(ns.max_degree, ns.trials, cfg.seed)
        out += suite.lipschitz(cfg.tolerance)
        out += suite.incomplete_gamma(min(cfg.tolerance, 1e-10))
        out += suite.eichler(cfg.tolerance)
        out += suite.integral_lemma(cfg.tolerance)
        return out
    if name == "hurwitz":
        return suite.hurwitz(N, cfg.threads)
    if name == "holoproj":
        if ns.chi is not None or ns.psi is not None:
            chi = ns.chi or parse_character("trivial:1")
            psi = ns.psi or parse_character("kronecker:-4")
            from .holoproj import projection_defect_series

            lhs = arithfn.mock_numerator(chi, psi, N)
            rhs = projection_defect_series(chi, psi, N, include_constant_term=True)
            return [arithfn.series_mismatch_report("holoproj", {"chi": chi.label, "psi": psi.label,
                                                                "prec": N}, lhs, rhs)]
        return suite.holoproj_cancellation(N)
    if name == "congruence":
        return suite.congruence(N)
    if name == "alprop":
        from .jacobi import verify_alprop

        chi = ns.chi or parse_character("kronecker:8")
        psi = ns.psi or parse_character("kronecker:-4")
        try:
            return [verify_alprop(chi, psi, N)]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if name == "partial-theta":
        return suite.partial_theta(N)
    if name == "prop-ii":
        taus = ((0.0, 1.0), (0.0, 2.0)) if ns.tau is None else (_parse_tau(ns.tau),)
        return suite.prop_ii(cfg.tolerance, taus=taus)
    if name == "triple-product":
        return suite.triple_product(N)
    if name == "appell-lerch":
        return suite.appell_lerch_exactness(cfg.seed)
    if name == "jacobi-poly":
        return suite.jacobi_poly(ns.max_degree, ns.trials, cfg.seed)
    return suite.HARNESSES[name](cfg.tolerance)


_DEFAULT_PREC = {"verify": 800, "theta": 50, "mockq": 50, "congruence": 500,
                 "search-hurwitz-analogue": 400}
_VERIFY_PREC = {"holoproj": 2000, "congruence": 2000, "alprop": 300, "partial-theta": 100,
                "triple-product": 20}


def run_command(argv: list[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    buf = io.StringIO()
    try:
        old = sys.stderr
        sys.stderr = buf
        try:
            ns = parser.parse_args(argv)
        finally:
            sys.stderr = old
    except SystemExit as exc:
        err.write(buf.getvalue())
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    for key in ("chi", "psi"):
        v = getattr(ns, key, None)
        if isinstance(v, str):
            setattr(ns, key, parse_character(v))
    for key in ("c_range", "t_range"):
        v = getattr(ns, key, None)
        if isinstance(v, str):
            setattr(ns, key, _rational_range(v))
    default = _DEFAULT_PREC.get(ns.command, 800)
    if ns.command == "verify":
        default = _VERIFY_PREC.get(ns.identity, 800)
    try:
        cfg = _config(ns, default)
        random.seed(cfg.seed)
        return _dispatch(ns, cfg, out)
    except UsageError as exc:
        err.write(f"smalldiv: error: {exc}\n")
        return EXIT_USAGE
    except (ValueError, ArithmeticError) as exc:
        err.write(f"smalldiv: error: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE


def _dispatch(ns, cfg: RunConfig, out) -> int:
    cmd = ns.command
    if cmd == "sigma":
        if ns.upto < 1:
            raise UsageError("--upto must be positive")
        if ns.kind == 1:
            rows = [[n, arithfn.sigma_small_1(ns.psi, n)] for n in range(1, ns.upto + 1)]
        else:
            rows = [[n, arithfn.sigma_small_2(ns.chi, ns.psi, n)] for n in range(1, ns.upto + 1)]
        _emit_table(cfg, ["n", "sigma"], rows, out)
        return EXIT_OK
    if cmd == "theta":
        f = arithfn.theta_series(ns.psi, cfg.precision)
        _emit_table(cfg, ["exponent", "coefficient"], [[e, c] for e, c in f.items() if c], out)
        return EXIT_OK
    if cmd == "hurwitz":
        if ns.upto < 0:
            raise UsageError("--upto must be nonnegative")
        tab = arithfn.hurwitz_table(ns.upto + 1)
        _emit_table(cfg, ["n", "H"], [[n, tab[n]] for n in range(ns.upto + 1)], out)
        return EXIT_OK
    if cmd == "mockq":
        f = arithfn.mock_plus_part(ns.chi, ns.psi, cfg.precision)
        _emit_table(cfg, ["exponent", "coefficient"], [[e, c] for e, c in f.items()], out)
        return EXIT_OK
    if cmd == "sturm":
        if ns.level < 1:
            raise UsageError("--level must be positive")
        _emit_table(cfg, ["weight", "level", "bound"], [[ns.weight, ns.level, sturm_bound(ns.weight, ns.level)]], out)
        return EXIT_OK
    if cmd == "congruence":
        try:
            rep = arithfn.padic_congruence_check(ns.psi, ns.chi, ns.p, ns.a, ns.b, cfg.precision)
        except arithfn.NonRationalCharacter as exc:
            raise UsageError(str(exc)) from None
        return _emit_reports(cfg, [rep], out)
    if cmd == "verify":
        return _emit_reports(cfg, _verify(ns, cfg), out)
    if cmd == "search-hurwitz-analogue":
        cands = suite.search_hurwitz_analogue(ns.psi.label, ns.c_range, ns.t_range, cfg.precision,
                                              ns.max_modulus)
        header = ["psi", "C", "t", "A", "B", "checked_upto", "nonzero", "sturm_bound_weight_3/2"]
        _emit_table(cfg, header, [[c[h] for h in header] for c in cands], out)
        return EXIT_OK
    raise UsageError(f"unknown command {cmd}")


def main(argv: list[str] | None = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
