import math
import os
import sys

import hypothesis
import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from dsmimaging import Scene, make_circle_array, make_direction_set, make_grid  # noqa: E402

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

LAMBDA = 0.4
EX1 = [((0.3, -0.3), 0.03, 5), ((-0.4, -0.2), 0.03, 5), ((-0.3, 0.4), 0.03, 5)]
EX2 = [((0.3, -0.3), 0.035, 5), ((-0.4, -0.2), 0.03, 5), ((-0.3, 0.4), 0.025, 5)]
EX4 = [((-0.3, -0.3), 0.4, 5)]


@pytest.fixture(scope="session")
def example1():
    return Scene.with_disks(LAMBDA, EX1)


@pytest.fixture(scope="session")
def example2():
    return Scene.with_disks(LAMBDA, EX2)


@pytest.fixture(scope="session")
def sensors36():
    return make_circle_array(7.5 * LAMBDA, 36)


@pytest.fixture(scope="session")
def grid3l():
    return make_grid((0.0, 0.0), 3 * LAMBDA, 0.0245)


@pytest.fixture(scope="session")
def coarse_grid():
    return make_grid((0.0, 0.0), 1.2, 0.06)


@pytest.fixture(scope="session")
def single_d():
    return make_direction_set(1, math.pi)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20180101)


ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; call with (ok, detail). Printed immediately and in the summary."""

    def report(number, ok, detail):
        status = "PASS" if ok else "FAIL"
        line = f"CRITERION {str(number):>3}: {status}  {detail}"
        ACCEPTANCE.append(line)
        capman = request.config.pluginmanager.getplugin("capturemanager")
        with capman.global_and_fixture_disabled():
            print("\n" + line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        def order(line):
            tag = line.split()[1].rstrip(":")
            return int(tag.rstrip("abc")), tag

        for line in sorted(ACCEPTANCE, key=order):
            terminalreporter.write_line(line)
