"""Dirichlet characters with exact values.

Characters are built from value tables (validated exhaustively, the moduli
here are tiny) or from Kronecker symbols.  Every character returns 0 at
n = 0, the modulus-one trivial character included; the small divisor sums
rely on this.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .exactnum import CyclotomicNumber, Scalar, conjugate, root, simplify


class NonMultiplicative(ValueError):
    pass


class NonUnitValue(ValueError):
    pass


class NotADiscriminant(ValueError):
    pass


class OddnessViolation(ValueError):
    pass


# discriminants of the Kronecker characters whose theta series are eta quotients
PSI_DISCRIMINANTS = (-8, -4, -3, 2, 12, 24)


def kronecker(D: int, n: int) -> int:
    """Extended Kronecker symbol (D / n)."""
    if n == 0:
        return 1 if D in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -result
    v = (n & -n).bit_length() - 1
    n >>= v
    if v:
        if D % 2 == 0:
            return 0
        if v % 2 and D % 8 in (3, 5):
            result = -result
    # now n odd positive: Jacobi symbol (D mod n / n)
    a = D % n
    while a:
        t = (a & -a).bit_length() - 1
        a >>= t
        if t % 2 and n % 8 in (3, 5):
            result = -result
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a, n = n % a, a
    return result if n == 1 else 0


def is_fundamental_discriminant(D: int) -> bool:
    if D in (0,):
        return False
    if D == 1:
        return True
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _squarefree(n: int) -> bool:
    n = abs(n)
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    modulus: int
    values: tuple  # Fraction or CyclotomicNumber per residue class
    kind: str = "table"
    discriminant: int | None = None
    label: str = field(default="", compare=False)

    def __call__(self, n: int) -> Scalar:
        return char_eval(self, n)

    @cached_property
    def parity(self) -> int:
        """0 for even, 1 for odd characters."""
        v = self.values[(-1) % self.modulus]
        return 0 if v == 1 else 1

    @cached_property
    def order(self) -> int:
        units = [self.values[a] for a in range(self.modulus) if math.gcd(a, self.modulus) == 1]
        k = 1
        while True:
            if all(v ** k == 1 for v in units):
                return k
            k += 1

    @cached_property
    def conductor(self) -> int:
        """Conductor of the cyclotomic field holding the values."""
        c = 1
        for v in self.values:
            if isinstance(v, CyclotomicNumber):
                c = math.lcm(c, v.minimal().conductor)
        return c

    @property
    def is_trivial(self) -> bool:
        return self.modulus == 1

    @property
    def is_even(self) -> bool:
        return self.parity == 0

    @property
    def is_rational(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.values)

    def conjugate(self) -> DirichletCharacter:
        if self.is_rational:
            return self
        return DirichletCharacter(self.modulus, tuple(simplify(conjugate(v)) for v in self.values),
                                  "table", None, f"conj({self.label})")

    def __eq__(self, other):
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return self.modulus == other.modulus and all(
            a == b for a, b in zip(self.values, other.values))

    def __hash__(self):
        return hash((self.modulus, self.values))

    def __repr__(self):
        return f"DirichletCharacter({self.label or self.modulus})"


def char_eval(chi: DirichletCharacter, n: int) -> Scalar:
    if n == 0:
        return Fraction(0)
    return chi.values[n % chi.modulus]


def trivial_character(modulus: int = 1) -> DirichletCharacter:
    """Principal character mod ``modulus``; modulus 1 gives the trivial one."""
    vals = tuple(Fraction(1) if math.gcd(a, modulus) == 1 else Fraction(0) for a in range(modulus))
    if modulus == 1:
        vals = (Fraction(1),)
    return DirichletCharacter(modulus, vals, "trivial", None, f"trivial:{modulus}")


def char_from_kronecker(D: int) -> DirichletCharacter:
    if D == 2:
        modulus = 8
    elif is_fundamental_discriminant(D) or D in PSI_DISCRIMINANTS:
        modulus = abs(D)
    else:
        raise NotADiscriminant(f"{D} is not a fundamental discriminant")
    if modulus == 1:
        return trivial_character(1)
    vals = tuple(Fraction(kronecker(D, a)) for a in range(modulus))
    return DirichletCharacter(modulus, vals, "kronecker", D, f"kronecker:{D}")


def char_from_table(M: int, values) -> DirichletCharacter:
    """Validate a value table indexed by residues 0..M-1."""
    if M < 1:
        raise ValueError("modulus must be positive")
    values = tuple(simplify(v) for v in values)
    if len(values) != M:
        raise ValueError(f"expected {M} values, got {len(values)}")
    units = [a for a in range(M) if math.gcd(a, M) == 1]
    for a in range(M):
        if a not in units and values[a] != 0:
            raise NonUnitValue(f"nonzero value at non-unit residue {a}")
    for a in units:
        v = values[a]
        if isinstance(v, CyclotomicNumber):
            ok = v.is_root_of_unity()
        else:
            ok = v in (1, -1)
        if not ok:
            raise NonUnitValue(f"value at {a} is not a root of unity: {v}")
    for a in units:
        for b in units:
            if values[(a * b) % M] != values[a] * values[b]:
                raise NonMultiplicative(f"chi({a}*{b}) != chi({a})*chi({b}) mod {M}")
    if M == 1:
        return DirichletCharacter(1, values, "trivial", None, "trivial:1")
    return DirichletCharacter(M, values, "table", None, f"table:{M}")


def require_odd(psi: DirichletCharacter) -> None:
    if psi.parity != 1:
        raise OddnessViolation(f"{psi.label or psi} must be odd")


# ---------------------------------------------------------------------------
# spec strings: "kronecker:D", "trivial:M", "table:M:v0,...,v{M-1}"

_ZETA = re.compile(r"^\s*zeta\((\d+)\)(?:\^(-?\d+))?\s*$")


def parse_value(text: str) -> Scalar:
    m = _ZETA.match(text)
    if m:
        n = int(m.group(1))
        k = int(m.group(2) or 1)
        return simplify(root(n, k))
    neg = text.strip().startswith("-")
    inner = text.strip().lstrip("-")
    m = _ZETA.match(inner)
    if m and neg:
        return simplify(-root(int(m.group(1)), int(m.group(2) or 1)))
    return Fraction(text.strip())


def parse_character(spec: str) -> DirichletCharacter:
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "kronecker":
        return char_from_kronecker(int(rest))
    if kind == "trivial":
        return trivial_character(int(rest or 1))
    if kind == "table":
        m, _, vals = rest.partition(":")
        chi = char_from_table(int(m), [parse_value(v) for v in vals.split(",")])
        return DirichletCharacter(chi.modulus, chi.values, chi.kind, None, spec)
    raise ValueError(f"unknown character spec {spec!r}")
