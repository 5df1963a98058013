import pytest

from wpvol.taucalc import TauCalculator


@pytest.fixture(scope="session")
def calc():
    """One shared correlator memo for the whole run; values are pure."""
    return TauCalculator()
