import random

import pytest

from pfaffsurf.generators import FIXTURE_NAMES, fixture


@pytest.fixture(params=FIXTURE_NAMES)
def any_fixture(request):
    return fixture(request.param)


@pytest.fixture
def rng():
    return random.Random(20240607)


def pytest_terminal_summary(terminalreporter, config):
    from test_acceptance import ACCEPTANCE_KEY

    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("[")[1].split("]")[0])):
            terminalreporter.write_line(line)
