import pytest
from hypothesis import settings

from surfcol.tribracket import (
    cyclic_group,
    dehn_tribracket,
    enumerate_tribrackets,
    load_builtin,
    small_groups,
    symmetric_group,
)

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def x3():
    return load_builtin("X3")


@pytest.fixture(scope="session")
def x3_shift():
    return load_builtin("X3_shift")


@pytest.fixture(scope="session")
def x3_display():
    return load_builtin("X3_display")


@pytest.fixture(scope="session")
def x4():
    return load_builtin("X4")


@pytest.fixture(scope="session")
def dehn_cyclic():
    return {n: dehn_tribracket(cyclic_group(n)) for n in range(1, 7)}


@pytest.fixture(scope="session")
def valid3():
    return list(enumerate_tribrackets(3))


@pytest.fixture(scope="session")
def valid4():
    return list(enumerate_tribrackets(4))


@pytest.fixture(scope="session")
def probe_tribrackets(valid3, valid4):
    """A mix of valid tribrackets that see crossings: all of size 3, every
    seventh of size 4, and the Dehn tribracket of S3."""
    return valid3 + valid4[::7] + [dehn_tribracket(symmetric_group(3))]


@pytest.fixture(scope="session")
def groups():
    return small_groups(8)

