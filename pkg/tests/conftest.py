import pytest

from quiverstrata.families import build_family, parse_family_spec


@pytest.fixture
def a1221():
    return build_family(parse_family_spec("A(1,2,2,1)"))


@pytest.fixture
def aprime122():
    return build_family(parse_family_spec("Aprime(1,2,2)"))
