import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import lattice_rotor as lr  # noqa: E402


@pytest.fixture(scope="session")
def distribution_vk100():
    """The desk-scale distribution run, shared by module and acceptance tests."""
    import time
    t0 = time.monotonic()
    inv = lr.build_invariant_set(100, 32)
    dist = lr.period_distribution(inv)
    wall = time.monotonic() - t0
    return inv, dist, wall


@pytest.fixture(scope="session")
def distribution_vk20():
    inv = lr.build_invariant_set(20, 4, keep_points=True)
    return inv, lr.period_distribution(inv)


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance scoreboard where capture cannot swallow it."""
    mod = sys.modules.get("tests.test_acceptance") or \
        sys.modules.get("test_acceptance")
    if mod and getattr(mod, "VERDICTS", None):
        terminalreporter.section("acceptance criteria")
        for line in mod.VERDICTS:
            terminalreporter.write_line(line)
