import pytest
from mpmath import mp

from onebit import PrecisionConfig, build_filter, quantize


@pytest.fixture
def cfg():
    return PrecisionConfig()


@pytest.fixture(scope="session")
def q6_long():
    """q^(6) for a = 0, long enough for every sweep in the suite."""
    return quantize(build_filter(6, 0), None, 5100)


@pytest.fixture
def hiprec():
    with mp.workprec(400):
        yield
