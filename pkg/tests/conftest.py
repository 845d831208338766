import pytest

from bellcert import config


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run long verification sweeps")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def small_cap(monkeypatch):
    """Lower the exact-computation cap so resource errors are cheap to trigger"""
    monkeypatch.setattr(config, "MAX_BELL_INDEX", 50)
    return 50
