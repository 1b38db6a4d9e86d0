import numpy as np
import pytest
from hypothesis import settings

from markovfi import instances
from markovfi.chain import random_generator, random_measure

settings.register_profile("markovfi", deadline=None, max_examples=40)
settings.load_profile("markovfi")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def cyc():
    return instances.cyclic3()


def random_chain(seed, n, density=0.6, low=0.05):
    rng = np.random.default_rng(seed)
    return random_generator(rng, n, density), random_measure(rng, n, low)


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
