from pathlib import Path

import pytest

from src.models.builders import boolean_lattice, chain, lattice_from_leq, rectangular_band
from src.models.partial_functions import build_pfn_algebra

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch):
    monkeypatch.delenv("SKEWLAB_CONFIG", raising=False)
    monkeypatch.delenv("SKEWLAB_LOG_LEVEL", raising=False)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def pfn1():
    return build_pfn_algebra(1)


@pytest.fixture(scope="session")
def pfn2():
    return build_pfn_algebra(2)


@pytest.fixture(scope="session")
def pfn3():
    return build_pfn_algebra(3)


@pytest.fixture(scope="session")
def rect_left2():
    return rectangular_band(2, "left")


@pytest.fixture(scope="session")
def m3():
    # 0 < 1, 2, 3 < 4, atomes deux à deux incomparables
    leq = [[i == j or i == 0 or j == 4 for j in range(5)] for i in range(5)]
    return lattice_from_leq(leq, "M3")


@pytest.fixture(scope="session")
def n5():
    # 0 < 1 < 2 < 4 et 0 < 3 < 4
    pairs = {(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 4), (2, 4), (3, 4)}
    leq = [[i == j or (i, j) in pairs for j in range(5)] for i in range(5)]
    return lattice_from_leq(leq, "N5")


@pytest.fixture(scope="session")
def small_lattices():
    return [chain(1), chain(3), boolean_lattice(2), boolean_lattice(3)]
