"""Truncated q-series with exact coefficients.

A :class:`QSeries` stores the coefficients of q^(k/den) for
``offset <= k < prec``.  Everything at or above ``prec`` is unknown, and
every operation records how far its result is provably correct.

Coefficients are ``Fraction`` or :class:`~smalldiv.exactnum.CyclotomicNumber`
values; rational series never leave ``Fraction`` arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .exactnum import CyclotomicNumber, Scalar, from_json, inverse, is_unit, simplify, to_json

ZERO = Fraction(0)


class NonUnitLeading(ArithmeticError):
    pass


class ZeroDivisor(ArithmeticError):
    pass


class FractionalExponents(ValueError):
    pass


class OutOfRange(KeyError):
    pass


class QSeries:
    __slots__ = ("den", "offset", "prec", "coeffs")

    def __init__(self, coeffs: Iterable[Scalar], offset: int = 0, prec: int | None = None,
                 den: int = 1):
        coeffs = [simplify(c) for c in coeffs]
        if prec is None:
            prec = offset + len(coeffs)
        if prec < offset:
            raise ValueError("prec must be >= offset")
        n = prec - offset
        if len(coeffs) < n:
            coeffs.extend([ZERO] * (n - len(coeffs)))
        elif len(coeffs) > n:
            del coeffs[n:]
        if den < 1:
            raise ValueError("den must be positive")
        self.den = den
        self.offset = offset
        self.prec = prec
        self.coeffs = coeffs

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, prec: int, den: int = 1, offset: int = 0) -> QSeries:
        return cls([], offset, prec, den)

    @classmethod
    def from_terms(cls, terms: Mapping, prec: int, den: int = 1) -> QSeries:
        """Sparse constructor: ``{exponent: coefficient}`` with rational
        exponents; ``prec`` is a numerator over ``den``."""
        num_terms = {}
        for e, c in terms.items():
            e = Fraction(e)
            k = e * den
            if k.denominator != 1:
                raise ValueError(f"exponent {e} not in (1/{den})Z")
            num_terms[int(k)] = num_terms.get(int(k), ZERO) + c
        lo = min([k for k in num_terms if k < prec], default=prec)
        lo = min(lo, 0) if lo >= 0 else lo
        coeffs = [ZERO] * (prec - lo)
        for k, c in num_terms.items():
            if k < prec:
                coeffs[k - lo] = c
        return cls(coeffs, lo, prec, den)

    @classmethod
    def monomial(cls, exponent, coefficient: Scalar = 1, prec: int | None = None,
                 den: int = 1) -> QSeries:
        e = Fraction(exponent)
        den = math.lcm(den, e.denominator)
        k = int(e * den)
        if prec is None:
            prec = k + 1
        return cls.from_terms({e: coefficient}, prec, den)

    # -- access --------------------------------------------------------------

    def __getitem__(self, exponent) -> Scalar:
        """Coefficient of q^exponent (rational exponent)."""
        k = Fraction(exponent) * self.den
        if k.denominator != 1:
            return ZERO
        k = int(k)
        if k >= self.prec:
            raise OutOfRange(f"exponent {exponent} beyond precision {self.prec_exponent}")
        if k < self.offset:
            return ZERO
        return self.coeffs[k - self.offset]

    def coefficient(self, exponent) -> Scalar:
        return self[exponent]

    @property
    def prec_exponent(self) -> Fraction:
        return Fraction(self.prec, self.den)

    def items(self):
        """Nonzero ``(exponent, coefficient)`` pairs, exponents as Fractions."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield Fraction(self.offset + i, self.den), c

    def nonzero(self) -> list[tuple[int, Scalar]]:
        return [(self.offset + i, c) for i, c in enumerate(self.coeffs) if c]

    def valuation(self) -> int:
        """Numerator of the first nonzero exponent (``prec`` if none known)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return self.offset + i
        return self.prec

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return all(not isinstance(c, CyclotomicNumber) for c in self.coeffs)

    def conductor(self) -> int:
        n = 1
        for c in self.coeffs:
            if isinstance(c, CyclotomicNumber):
                n = math.lcm(n, c.conductor)
        return n

    # -- normalization -------------------------------------------------------

    def with_den(self, den: int) -> QSeries:
        if den == self.den:
            return self
        if den % self.den:
            raise ValueError(f"cannot refine den {self.den} to {den}")
        s = den // self.den
        coeffs = [ZERO] * ((self.prec - self.offset) * s)
        for i, c in enumerate(self.coeffs):
            coeffs[i * s] = c
        return QSeries(coeffs, self.offset * s, self.prec * s, den)

    def canonical(self) -> QSeries:
        """Minimal ``den`` and leading zeros trimmed; values unchanged."""
        g = self.den
        for k, _ in self.nonzero():
            g = math.gcd(g, k)
        prec = -(-self.prec // g)
        start = min(-(-self.valuation() // g), prec)
        coeffs = [self.coeffs[k * g - self.offset] for k in range(start, prec)]
        return QSeries(coeffs, start, prec, self.den // g)

    def truncate(self, prec_exponent) -> QSeries:
        k = Fraction(prec_exponent) * self.den
        k = math.floor(k) if k.denominator != 1 else int(k)
        k = min(k, self.prec)
        if k <= self.offset:
            return QSeries([], k, k, self.den)
        return QSeries(self.coeffs[: k - self.offset], self.offset, k, self.den)

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _unify(a: QSeries, b: QSeries) -> tuple[QSeries, QSeries]:
        if a.den == b.den:
            return a, b
        d = math.lcm(a.den, b.den)
        return a.with_den(d), b.with_den(d)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            if self.prec <= 0:
                return self
            return qs_add(self, QSeries([other], 0, self.prec, self.den))
        if not isinstance(other, QSeries):
            return NotImplemented
        return qs_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.offset, self.prec, self.den)

    def __sub__(self, other):
        if isinstance(other, QSeries):
            return qs_add(self, -other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return qs_mul(self, other)
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return qs_div(self, other)
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self.scale(inverse(other))
        return NotImplemented

    def scale(self, c: Scalar) -> QSeries:
        return QSeries([x * c for x in self.coeffs], self.offset, self.prec, self.den)

    def shift(self, exponent) -> QSeries:
        """Multiply by q^exponent (exact, precision moves along)."""
        e = Fraction(exponent)
        s = self.with_den(math.lcm(self.den, e.denominator))
        k = int(e * s.den)
        return QSeries(s.coeffs, s.offset + k, s.prec + k, s.den)

    def map_coefficients(self, fn: Callable[[Scalar], Scalar]) -> QSeries:
        return QSeries([fn(c) for c in self.coeffs], self.offset, self.prec, self.den)

    # -- comparison ----------------------------------------------------------

    def agrees_with(self, other: QSeries, upto=None) -> bool:
        return first_difference(self, other, upto) is None

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = QSeries._unify(self, other)
        return a.prec == b.prec and first_difference(a, b) is None

    __hash__ = None

    def __repr__(self):
        terms = []
        for e, c in list(self.items())[:8]:
            terms.append(f"({c})*q^{e}")
        more = " + ..." if len(self.nonzero()) > 8 else ""
        return f"QSeries({' + '.join(terms) or '0'}{more} + O(q^{self.prec_exponent}))"

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {"den": self.den, "offset": self.offset, "prec": self.prec,
                "coeffs": [to_json(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> QSeries:
        return cls([from_json(c) for c in obj["coeffs"]], int(obj["offset"]), int(obj["prec"]),
                   int(obj["den"]))

    def to_text(self) -> str:
        """One line per stored coefficient: ``exponent<TAB>value``."""
        lines = []
        for i, c in enumerate(self.coeffs):
            lines.append(f"{Fraction(self.offset + i, self.den)}\t{c}")
        return "\n".join(lines)


def first_difference(a: QSeries, b: QSeries, upto=None):
    """First exponent where ``a`` and ``b`` differ, or None.

    The comparison runs up to the smaller precision (or ``upto`` if lower).
    Returns ``(exponent, a_value, b_value)``.
    """
    a, b = QSeries._unify(a, b)
    hi = min(a.prec, b.prec)
    if upto is not None:
        hi = min(hi, math.ceil(Fraction(upto) * a.den))
    lo = min(a.offset, b.offset)
    for k in range(lo, hi):
        x = a.coeffs[k - a.offset] if k >= a.offset else ZERO
        y = b.coeffs[k - b.offset] if k >= b.offset else ZERO
        if x != y:
            return Fraction(k, a.den), x, y
    return None


# ---------------------------------------------------------------------------
# operations


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    a, b = QSeries._unify(a, b)
    prec = min(a.prec, b.prec)
    lo = min(a.offset, b.offset, prec)
    out = [ZERO] * (prec - lo)
    for s in (a, b):
        for i, c in enumerate(s.coeffs):
            k = s.offset + i
            if k >= prec:
                break
            if c:
                out[k - lo] = out[k - lo] + c
    return QSeries(out, lo, prec, a.den)


def _rational_lcm_denominator(coeffs) -> int:
    d = 1
    for c in coeffs:
        if c:
            d = math.lcm(d, c.denominator)
    return d


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    a, b = QSeries._unify(a, b)
    va, vb = a.valuation(), b.valuation()
    prec = min(a.prec + vb, b.prec + va)
    lo = min(va + vb, prec)
    n = prec - lo
    if n <= 0:
        return QSeries([], prec, prec, a.den)
    sa, sb = a.nonzero(), b.nonzero()
    if len(sa) > len(sb):
        sa, sb = sb, sa
    if a.is_rational() and b.is_rational():
        # integer fast path on a common denominator
        da = _rational_lcm_denominator(c for _, c in sa)
        db = _rational_lcm_denominator(c for _, c in sb)
        ia = [(k, int(c * da)) for k, c in sa]
        ib = [(k, int(c * db)) for k, c in sb]
        acc = [0] * n
        for ka, ca in ia:
            base = ka - lo
            for kb, cb in ib:
                idx = base + kb
                if idx >= n:
                    break
                acc[idx] += ca * cb
        d = da * db
        return QSeries([Fraction(x, d) for x in acc], lo, prec, a.den)
    acc = [ZERO] * n
    for ka, ca in sa:
        base = ka - lo
        for kb, cb in sb:
            idx = base + kb
            if idx >= n:
                break
            acc[idx] = acc[idx] + ca * cb
    return QSeries(acc, lo, prec, a.den)


def qs_div(a: QSeries, b: QSeries, require_unit: bool = False) -> QSeries:
    """Exact quotient a / b to the largest precision both inputs support."""
    a, b = QSeries._unify(a, b)
    vb = b.valuation()
    if vb >= b.prec:
        raise ZeroDivisor("divisor vanishes to its known precision")
    lead = b.coeffs[vb - b.offset]
    if require_unit and not is_unit(lead):
        raise NonUnitLeading(f"leading coefficient {lead} is not a unit")
    inv = inverse(lead)
    va = a.valuation()
    start = min(va - vb, a.prec - vb)
    prec = min(a.prec - vb, (va - vb) + (b.prec - vb))
    n = prec - start
    if n <= 0:
        return QSeries([], prec, prec, a.den)
    tail = [(k - vb, c) for k, c in b.nonzero() if k != vb]
    rational = a.is_rational() and b.is_rational()
    out = [ZERO] * n
    for i in range(n):
        k = start + i
        src = k + vb
        acc = a.coeffs[src - a.offset] if a.offset <= src < a.prec else ZERO
        for d, c in tail:
            j = i - d
            if j < 0:
                break
            qj = out[j]
            if qj:
                acc = acc - c * qj
        out[i] = acc * inv if acc else ZERO
        if not rational:
            out[i] = simplify(out[i])
    return QSeries(out, start, prec, a.den)


def qs_u_operator(f: QSeries, p: int) -> QSeries:
    """Coefficient of q^n in the result is the coefficient of q^(pn) in f."""
    if f.den != 1:
        g = f.canonical()
        if g.den != 1:
            raise FractionalExponents("U(p) needs integer exponents")
        f = g
    if p < 1:
        raise ValueError("p must be positive")
    lo = -((-f.offset) // p)
    prec = -((-f.prec) // p)
    coeffs = [f.coeffs[k * p - f.offset] for k in range(lo, prec)]
    return QSeries(coeffs, lo, prec, 1)


def qs_v_operator(f: QSeries, m: int) -> QSeries:
    """Substitute q -> q^m."""
    if m < 1:
        raise ValueError("m must be positive")
    coeffs = [ZERO] * ((f.prec - f.offset) * m)
    for i, c in enumerate(f.coeffs):
        coeffs[i * m] = c
    return QSeries(coeffs, f.offset * m, f.prec * m, f.den)


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def gamma0_index(N: int) -> int:
    m = Fraction(N)
    for p in _prime_factors(N):
        m *= Fraction(p + 1, p)
    return int(m)


def sturm_bound(k, N: int) -> int:
    """Coefficient index up to which agreement forces equality in M_k(Gamma_0(N))."""
    k = Fraction(k)
    if k <= 1:
        raise ValueError("weight must exceed 1")
    if N < 1:
        raise ValueError("level must be positive")
    return math.floor(k * gamma0_index(N) / 12)


# ---------------------------------------------------------------------------
# two-variable series


class TwoVarSeries:
    """Laurent series in an auxiliary variable x with q-series coefficients.

    ``terms`` maps x-exponents (Fractions) to :class:`QSeries`.  Absent
    x-powers are zero up to ``prec``; ``prec`` (numerator, over ``den``) is
    shared by all components.
    """

    __slots__ = ("terms", "prec", "den", "_xrange")

    def __init__(self, terms: Mapping, prec: int, den: int = 1, xrange=None):
        self.den = den
        self.prec = prec
        clean = {}
        for j, s in terms.items():
            s = s.with_den(math.lcm(s.den, den)) if s.den != den else s
            if s.den != den:
                raise ValueError("component den exceeds the series den")
            if s.prec != prec:
                s = s.truncate(Fraction(prec, den)) if s.prec > prec else s
                if s.prec != prec:
                    raise ValueError("component precision below the series precision")
            if not s.is_zero():
                clean[Fraction(j)] = s
        self.terms = clean
        if xrange is not None:
            lo, hi = Fraction(xrange[0]), Fraction(xrange[1])
            if clean and (min(clean) < lo or max(clean) > hi):
                raise ValueError("stored x-powers fall outside the declared range")
            self._xrange = (lo, hi)
        else:
            self._xrange = None

    @classmethod
    def from_monomials(cls, monomials: Iterable[tuple], prec: int, den: int = 1) -> TwoVarSeries:
        """Build from ``(x_exponent, q_exponent_numerator, coefficient)`` triples;
        monomials at or beyond ``prec`` are dropped."""
        buckets: dict[Fraction, dict[int, Scalar]] = {}
        for xj, qk, c in monomials:
            if qk >= prec or not c:
                continue
            b = buckets.setdefault(Fraction(xj), {})
            b[qk] = b.get(qk, ZERO) + c
        terms = {}
        for xj, b in buckets.items():
            lo = min(min(b), 0)
            coeffs = [ZERO] * (prec - lo)
            for k, c in b.items():
                coeffs[k - lo] = c
            terms[xj] = QSeries(coeffs, lo, prec, den)
        return cls(terms, prec, den)

    @property
    def xmin(self) -> Fraction:
        if self._xrange is not None:
            return self._xrange[0]
        return min(self.terms, default=Fraction(0))

    @property
    def xmax(self) -> Fraction:
        if self._xrange is not None:
            return self._xrange[1]
        return max(self.terms, default=Fraction(0))

    @property
    def xden(self) -> int:
        d = 1
        for j in self.terms:
            d = math.lcm(d, j.denominator)
        return d

    def x_powers(self) -> list[Fraction]:
        return sorted(self.terms)

    def component(self, j) -> QSeries:
        j = Fraction(j)
        if j in self.terms:
            return self.terms[j]
        return QSeries.zero(self.prec, self.den)

    def __add__(self, other: TwoVarSeries) -> TwoVarSeries:
        den = math.lcm(self.den, other.den)
        prec = min(self.prec * (den // self.den), other.prec * (den // other.den))
        out = {}
        for src in (self, other):
            for j, s in src.terms.items():
                s = s.with_den(den).truncate(Fraction(prec, den))
                out[j] = qs_add(out[j], s) if j in out else s
        return TwoVarSeries(out, prec, den)

    def __neg__(self):
        return TwoVarSeries({j: -s for j, s in self.terms.items()}, self.prec, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return TwoVarSeries({j: s.scale(other) for j, s in self.terms.items()},
                                self.prec, self.den)
        if not isinstance(other, TwoVarSeries):
            return NotImplemented
        den = math.lcm(self.den, other.den)
        a = {j: s.with_den(den) for j, s in self.terms.items()}
        b = {j: s.with_den(den) for j, s in other.terms.items()}
        pa, pb = self.prec * (den // self.den), other.prec * (den // other.den)
        va = min((s.valuation() for s in a.values()), default=pa)
        vb = min((s.valuation() for s in b.values()), default=pb)
        prec = min(pa + vb, pb + va)
        out: dict[Fraction, QSeries] = {}
        for ja, sa in a.items():
            for jb, sb in b.items():
                # component valuations are >= the global ones, so prod.prec >= prec
                prod = qs_mul(sa, sb).truncate(Fraction(prec, den))
                j = ja + jb
                out[j] = qs_add(out[j], prod) if j in out else prod
        return TwoVarSeries(out, prec, den)

    __rmul__ = __mul__

    def shift(self, x_exponent=0, q_exponent=0) -> TwoVarSeries:
        """Multiply by x^a q^b."""
        xa = Fraction(x_exponent)
        qb = Fraction(q_exponent)
        den = math.lcm(self.den, qb.denominator)
        k = int(qb * den)
        terms = {j + xa: s.with_den(den).shift(qb) for j, s in self.terms.items()}
        return TwoVarSeries(terms, self.prec * (den // self.den) + k, den)

    def substitute_x(self, power: int) -> TwoVarSeries:
        """x -> x^power (power = -1 inverts the auxiliary variable)."""
        return TwoVarSeries({j * power: s for j, s in self.terms.items()}, self.prec, self.den)

    def specialize(self, x_value_fn: Callable[[Fraction], tuple[Scalar, Fraction]]) -> QSeries:
        """Collapse to a one-variable series: ``x_value_fn(j)`` returns
        ``(root_of_unity, q_exponent)`` standing for x^j.

        Only stored components are used; the caller must know that x-powers
        outside the stored range cannot reach below the result's precision.
        """
        total = None
        for j, s in self.terms.items():
            c, e = x_value_fn(j)
            term = s.shift(e).scale(c)
            total = term if total is None else qs_add(total, term)
        if total is None:
            return QSeries.zero(self.prec, self.den)
        return total

    def equals(self, other: TwoVarSeries, upto=None) -> bool:
        return self.first_difference(other, upto) is None

    def first_difference(self, other: TwoVarSeries, upto=None):
        for j in sorted(set(self.terms) | set(other.terms)):
            d = first_difference(self.component(j), other.component(j), upto)
            if d is not None:
                return (j,) + d
        return None

    def __repr__(self):
        return (f"TwoVarSeries(x^[{self.xmin}..{self.xmax}], {len(self.terms)} components, "
                f"O(q^{Fraction(self.prec, self.den)}))")


def laurent_extract(F: TwoVarSeries, j) -> QSeries:
    """The q-series coefficient of x^j."""
    j = Fraction(j)
    if not (F.xmin <= j <= F.xmax):
        raise OutOfRange(f"x^{j} outside [{F.xmin}, {F.xmax}]")
    return F.component(j)
