import pytest

from smalldiv.characters import char_from_kronecker, trivial_character


@pytest.fixture(scope="session")
def chi_m4():
    return char_from_kronecker(-4)


@pytest.fixture(scope="session")
def one():
    return trivial_character(1)
