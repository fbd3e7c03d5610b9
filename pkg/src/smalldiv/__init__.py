"""Exact small divisor functions, theta series, Hurwitz class numbers and
machine checks of the identities relating them."""

from .characters import DirichletCharacter, char_from_kronecker, char_from_table, parse_character, trivial_character
from .exactnum import CyclotomicNumber
from .qseries import QSeries, TwoVarSeries
from .report import VerificationReport

__all__ = [
    "CyclotomicNumber",
    "DirichletCharacter",
    "QSeries",
    "TwoVarSeries",
    "VerificationReport",
    "char_from_kronecker",
    "char_from_table",
    "parse_character",
    "trivial_character",
]
__version__ = "0.1.0"
