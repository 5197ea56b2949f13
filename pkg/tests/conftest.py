import pytest

from twrnoma.model import SystemConfig


@pytest.fixture
def baseline():
    """Reference parameter set used throughout the numerical checks."""
    return SystemConfig()


@pytest.fixture
def no_leakage():
    return SystemConfig(varpi1=0.0, varpi2=0.0)


def db(snr_db):
    return 10.0 ** (snr_db / 10.0)
