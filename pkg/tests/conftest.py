from pathlib import Path

import pytest

from weberyz.arith import DiscriminantPair

DATA = Path(__file__).parent / "data"

# admissible discriminants with small class number, used across the suite
SMALL_D = (-31, -55, -103, -127, -151, -199, -223, -271)


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("classpoly-cache")


@pytest.fixture(scope="session")
def main_pair():
    return DiscriminantPair(-31, -127)


@pytest.fixture(autouse=True)
def _isolated_cache(monkeypatch, tmp_path_factory):
    # the CLI must never touch the user's real cache during tests
    monkeypatch.setenv("WEBERYZ_CACHE_DIR", str(tmp_path_factory.getbasetemp() / "cli-cache"))
    yield
