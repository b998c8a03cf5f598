import pytest

from src.utils.surface_io import load_surface
from src.utils.tools import SURFACES_DIR


def bundled(stem: str):
    return load_surface(SURFACES_DIR / f"{stem}.surface")


@pytest.fixture(scope="session")
def p2():
    return bundled("p2")


@pytest.fixture(scope="session")
def f1():
    return bundled("f1")


@pytest.fixture(scope="session")
def k3_s1():
    return bundled("k3_s1")


@pytest.fixture(scope="session")
def k3_s2():
    return bundled("k3_s2")


@pytest.fixture(autouse=True)
def plain_console(monkeypatch):
    monkeypatch.setenv("NOK_COLOR", "0")


@pytest.fixture(scope="session")
def load_bundled():
    return bundled
