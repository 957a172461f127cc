import math

import pytest

from wavelab.lattice import LineParams, dispersion_params


@pytest.fixture
def line():
    """Factory for a unit chain at a given ``beta``."""

    def make(beta, **kw):
        params = LineParams.from_beta(beta, **kw)
        return params, dispersion_params(params)

    return make


ALPHAS = (0.0, math.pi / 6, math.pi / 3, math.pi / 2)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
