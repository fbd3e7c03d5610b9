"""Exact scalars: rationals and elements of cyclotomic fields.

Rational values are plain :class:`fractions.Fraction` objects.  An element of
Q(zeta_n) is a :class:`CyclotomicNumber`, stored in the power basis
1, zeta, ..., zeta^(phi(n)-1) and reduced modulo the n-th cyclotomic
polynomial, so two elements of the same conductor are equal iff their
coefficient tuples are equal.

Arithmetic between different conductors lifts both operands to the lcm of
the conductors.  Mixing with ``int`` and ``Fraction`` works through the
usual operator protocol.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

import mpmath

Scalar = Union[int, Fraction, "CyclotomicNumber"]


# ---------------------------------------------------------------------------
# integer polynomial helpers (coefficient lists, lowest degree first)


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c, r = divmod(num[i + len(den) - 1], lead)
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Integer coordinates of zeta_n^k for 0 <= k < max(n, 2*phi(n) - 1)."""
    phi = euler_phi(n)
    cp = cyclotomic_polynomial(n)
    size = max(n, 2 * phi - 1)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(size):
        rows.append(tuple(cur))
        # multiply by zeta: shift up and reduce the overflow with Phi_n (monic)
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(phi):
                cur[j] -= top * cp[j]
    return tuple(rows)


def _lift_coeffs(coeffs: tuple[Fraction, ...], n: int, m: int) -> tuple[Fraction, ...]:
    """Re-express an element of Q(zeta_n) inside Q(zeta_m), n | m."""
    if n == m:
        return coeffs
    step = m // n
    table = _power_table(m)
    out = [Fraction(0)] * euler_phi(m)
    for k, c in enumerate(coeffs):
        if c:
            for j, t in enumerate(table[(k * step) % m]):
                if t:
                    out[j] += c * t
    return tuple(out)


def _solve(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gauss-Jordan solve of a square or overdetermined consistent system.

    Returns None when the system has no solution.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(matrix, rhs)]
    piv_cols = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    if any(aug[i][cols] != 0 for i in range(r, rows)):
        return None
    sol = [Fraction(0)] * cols
    for i, c in enumerate(piv_cols):
        sol[c] = aug[i][cols]
    return sol


# ---------------------------------------------------------------------------


class CyclotomicNumber:
    """An element of Q(zeta_n), zeta_n = exp(2 pi i / n)."""

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor: int, coeffs):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        phi = euler_phi(conductor)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) > phi:
            coeffs = _reduce(conductor, coeffs)
        elif len(coeffs) < phi:
            coeffs = coeffs + (Fraction(0),) * (phi - len(coeffs))
        self.conductor = conductor
        self.coeffs = coeffs
        self._hash = None

    @classmethod
    def from_rational(cls, value, conductor: int = 1) -> CyclotomicNumber:
        return cls(conductor, (Fraction(value),))

    # -- conversions ---------------------------------------------------------

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def lift(self, conductor: int) -> CyclotomicNumber:
        if conductor % self.conductor:
            raise ValueError(f"cannot lift conductor {self.conductor} to {conductor}")
        return CyclotomicNumber(conductor, _lift_coeffs(self.coeffs, self.conductor, conductor))

    def minimal(self) -> CyclotomicNumber:
        """Same element, expressed at the smallest conductor containing it."""
        n = self.conductor
        if self.is_rational():
            return CyclotomicNumber(1, self.coeffs[:1])
        for m in sorted(d for d in range(1, n) if n % d == 0):
            phi_m = euler_phi(m)
            basis = [_lift_coeffs(tuple(Fraction(int(i == k)) for i in range(phi_m)), m, n)
                     for k in range(phi_m)]
            matrix = [[basis[k][row] for k in range(phi_m)] for row in range(euler_phi(n))]
            sol = _solve(matrix, list(self.coeffs))
            if sol is not None:
                return CyclotomicNumber(m, sol)
        return self

    # -- ring operations -----------------------------------------------------

    def _coerce(self, other) -> tuple[CyclotomicNumber, CyclotomicNumber] | None:
        if isinstance(other, CyclotomicNumber):
            if other.conductor == self.conductor:
                return self, other
            m = math.lcm(self.conductor, other.conductor)
            return self.lift(m), other.lift(m)
        if isinstance(other, (int, Fraction)):
            return self, CyclotomicNumber(self.conductor, (Fraction(other),))
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CyclotomicNumber(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.conductor, tuple(-x for x in self.coeffs))

    def __pos__(self):
        return self

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CyclotomicNumber(a.conductor, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.conductor, tuple(x * other for x in self.coeffs))
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        n = a.conductor
        if n == 1:
            return CyclotomicNumber(1, (a.coeffs[0] * b.coeffs[0],))
        conv = [Fraction(0)] * (2 * len(a.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        conv[i + j] += x * y
        return CyclotomicNumber(n, _reduce(n, conv))

    __rmul__ = __mul__

    def inverse(self) -> CyclotomicNumber:
        if not any(self.coeffs):
            raise ZeroDivisionError("inverse of zero")
        n = self.conductor
        phi = len(self.coeffs)
        # columns: self * zeta^k
        cols = [(self * root(n, k)).coeffs for k in range(phi)]
        matrix = [[cols[k][row] for k in range(phi)] for row in range(phi)]
        sol = _solve(matrix, [Fraction(int(i == 0)) for i in range(phi)])
        return CyclotomicNumber(n, sol)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, CyclotomicNumber):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicNumber(self.conductor, (Fraction(1),))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> CyclotomicNumber:
        n = self.conductor
        table = _power_table(n)
        out = [Fraction(0)] * len(self.coeffs)
        for k, c in enumerate(self.coeffs):
            if c:
                for j, t in enumerate(table[(-k) % n]):
                    if t:
                        out[j] += c * t
        return CyclotomicNumber(n, out)

    def galois(self, k: int) -> CyclotomicNumber:
        """Apply zeta -> zeta^k (k coprime to the conductor)."""
        n = self.conductor
        if math.gcd(k, n) != 1:
            raise ValueError("Galois exponent must be a unit")
        table = _power_table(n)
        out = [Fraction(0)] * len(self.coeffs)
        for e, c in enumerate(self.coeffs):
            if c:
                for j, t in enumerate(table[(e * k) % n]):
                    if t:
                        out[j] += c * t
        return CyclotomicNumber(n, out)

    def is_integral(self) -> bool:
        # power-basis coordinates are integral iff the element lies in Z[zeta]
        return all(c.denominator == 1 for c in self.coeffs)

    def is_root_of_unity(self) -> bool:
        e = math.lcm(2, self.conductor)
        return self ** e == 1

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self._hash is None:
            m = self.minimal()
            self._hash = hash(m.coeffs[0]) if m.conductor == 1 else hash((m.conductor, m.coeffs))
        return self._hash

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        if self.is_rational():
            return f"CyclotomicNumber({self.conductor}, {self.coeffs[0]})"
        return f"CyclotomicNumber({self.conductor}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else (f"z{self.conductor}" if k == 1 else f"z{self.conductor}^{k}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def embed(self, precision: int = 53):
        return cyclo_embed(self, precision)


def _reduce(n: int, coeffs) -> tuple[Fraction, ...]:
    phi = euler_phi(n)
    if len(coeffs) <= phi:
        return tuple(coeffs) + (Fraction(0),) * (phi - len(coeffs))
    table = _power_table(n)
    out = [Fraction(0)] * phi
    for k, c in enumerate(coeffs):
        if c:
            row = table[k] if k < len(table) else table[k % n]
            for j, t in enumerate(row):
                if t:
                    out[j] += c * t
    return tuple(out)


# ---------------------------------------------------------------------------
# module-level operations


def root(conductor: int, power: int = 1) -> CyclotomicNumber:
    """zeta_conductor ** power."""
    if conductor < 1:
        raise ValueError("conductor must be positive")
    return CyclotomicNumber(conductor, _power_table(conductor)[power % conductor])


cyclo_root = root


def cyclo_mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def cyclo_embed(a: Scalar, precision: int = 53):
    """Complex value of ``a`` under zeta_n -> exp(2 pi i / n).

    Returns a builtin ``complex`` for the default 53 bits and an
    ``mpmath.mpc`` for higher precision.
    """
    if precision < 53:
        raise ValueError("precision must be at least 53 bits")
    if not isinstance(a, CyclotomicNumber):
        return complex(Fraction(a)) if precision == 53 else mpmath.mpc(Fraction(a))
    n = a.conductor
    if precision == 53:
        val = 0j
        for k, c in enumerate(a.coeffs):
            if c:
                val += float(c) * cmath.exp(2j * math.pi * k / n)
        return val
    with mpmath.workprec(precision + 10):
        val = mpmath.mpc(0)
        for k, c in enumerate(a.coeffs):
            if c:
                val += mpmath.mpf(c.numerator) / c.denominator * mpmath.expjpi(mpmath.mpf(2 * k) / n)
    return val


def conductor_of(x: Scalar) -> int:
    return x.conductor if isinstance(x, CyclotomicNumber) else 1


def simplify(x: Scalar) -> Scalar:
    """Collapse rational cyclotomic values to ``Fraction``."""
    if isinstance(x, CyclotomicNumber) and x.is_rational():
        return x.coeffs[0]
    if isinstance(x, int):
        return Fraction(x)
    return x


def conjugate(x: Scalar) -> Scalar:
    return x.conjugate() if isinstance(x, CyclotomicNumber) else x


def inverse(x: Scalar) -> Scalar:
    if isinstance(x, CyclotomicNumber):
        return simplify(x.inverse())
    if x == 0:
        raise ZeroDivisionError("inverse of zero")
    return 1 / Fraction(x)


def is_unit(x: Scalar) -> bool:
    """True when x and 1/x are both algebraic integers in the power basis."""
    if not x:
        return False
    if isinstance(x, CyclotomicNumber):
        return x.is_integral() and x.inverse().is_integral()
    f = Fraction(x)
    return abs(f) == 1


# ---------------------------------------------------------------------------
# JSON serialization: {"conductor": n, "coeffs": ["p/q", ...]}


def to_json(x: Scalar) -> dict:
    if isinstance(x, CyclotomicNumber):
        return {"conductor": x.conductor, "coeffs": [str(c) for c in x.coeffs]}
    return {"conductor": 1, "coeffs": [str(Fraction(x))]}


def from_json(obj: dict) -> Scalar:
    n = int(obj["conductor"])
    coeffs = [Fraction(c) for c in obj["coeffs"]]
    if len(coeffs) != euler_phi(n):
        raise ValueError(f"expected {euler_phi(n)} coefficients for conductor {n}")
    return simplify(CyclotomicNumber(n, coeffs))


# ---------------------------------------------------------------------------
# formal units


class FormalUnitMismatch(ArithmeticError):
    """Two tagged quantities were compared while their formal units differ."""


class Tagged:
    """A value multiplied by formal powers of named transcendental units.

    Tags such as ``"i"``, ``"2pi*i"`` or ``"Gamma(-1/2)"`` never get a
    numeric value in the exact pipeline; they must cancel before a result is
    compared or emitted.  The tag ``"i"`` is reduced modulo 4 and its even
    part folded into the sign of the value.
    """

    __slots__ = ("value", "tags")

    def __init__(self, value, tags: dict[str, int] | None = None):
        tags = {k: v for k, v in (tags or {}).items() if v}
        if "i" in tags:
            e = tags.pop("i") % 4
            if e >= 2:
                value = -value
                e -= 2
            if e:
                tags["i"] = e
        self.value = value
        self.tags = tags

    def __mul__(self, other):
        if isinstance(other, Tagged):
            tags = dict(self.tags)
            for k, v in other.tags.items():
                tags[k] = tags.get(k, 0) + v
            return Tagged(self.value * other.value, tags)
        return Tagged(self.value * other, self.tags)

    __rmul__ = __mul__

    def __neg__(self):
        return Tagged(-self.value, self.tags)

    def untag(self):
        """The bare value; raises unless every tag has cancelled."""
        if self.tags:
            raise FormalUnitMismatch(f"uncancelled formal units {self.tags}")
        return self.value

    def same_units(self, other: Tagged) -> bool:
        return self.tags == other.tags

    def __repr__(self):
        return f"Tagged({self.value!r}, {self.tags})"


def tagged_equal(a: Tagged, b: Tagged) -> bool:
    if not a.same_units(b):
        raise FormalUnitMismatch(f"cannot compare units {a.tags} and {b.tags}")
    return a.value == b.value
