import pytest

from moonmaass import builtin_profile


@pytest.fixture(scope="session")
def p1():
    return builtin_profile(1)


@pytest.fixture(scope="session")
def p5():
    return builtin_profile(5)


@pytest.fixture(scope="session")
def p6():
    return builtin_profile(6)
