import math

import pytest

from capfloat.curve import FourierCurve, make_omega_n_tau

SQRT5 = math.sqrt(5.0)
X4 = math.atan(SQRT5)


@pytest.fixture(scope="session")
def omega4():
    return make_omega_n_tau(4, 0.5)


@pytest.fixture(scope="session")
def cw_curve():
    # rho = 1 + 0.3 cos 3a + 0.1 sin 5a, odd harmonics only
    return FourierCurve(1.0, ((3, 0.3, 0.0), (5, 0.0, 0.1)))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import VERDICTS

    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[key])
