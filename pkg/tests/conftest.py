import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mfpt import fixture


@pytest.fixture(scope="session")
def P1():
    return fixture("P1")


@pytest.fixture(scope="session")
def P2():
    return fixture("P2")


@pytest.fixture(scope="session")
def P3():
    return fixture("P3")


@pytest.fixture(scope="session")
def P4():
    return fixture("P4")
