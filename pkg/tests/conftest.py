import json
from pathlib import Path

import pytest

from szego.curves import Sphere, Torus
from szego.fixtures import fixture_values

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fixture_doc():
    return json.loads((DATA / "fixtures.json").read_text())


@pytest.fixture(scope="session")
def frozen(fixture_doc):
    """Oracle values keyed as ``"<re>,<im>/<name>"`` or by plain name."""
    return fixture_values(fixture_doc)


@pytest.fixture
def torus():
    return Torus(1j)


@pytest.fixture
def sphere():
    return Sphere()
