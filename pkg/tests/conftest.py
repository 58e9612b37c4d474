import functools

import pytest

from bertrand_atoms.sturm import RadialProblem, solve_fisheye_couplings

_ACCEPTANCE = pytest.StashKey()


@functools.lru_cache(maxsize=None)
def fisheye_spectrum(gamma, l, count):
    return solve_fisheye_couplings(RadialProblem(gamma=gamma, l=l), count)


@pytest.fixture(scope="session")
def fisheye():
    return fisheye_spectrum


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = {}


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion."""
    lines = request.config.stash[_ACCEPTANCE]

    def record(number, passed, detail):
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        lines[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[_ACCEPTANCE]
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
