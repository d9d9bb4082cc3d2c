from __future__ import annotations

import pytest

from sigfree import P0, PairSnapshot

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def p0():
    return P0


@pytest.fixture
def gap20():
    # follower 20 m behind, everyone at 10 m/s
    return PairSnapshot(x_hat_f=30.0, x_hat_l=50.0, v_hat_f=10.0, v_hat_l=10.0,
                        u_prev_f=10.0, u_prev_l=10.0, u_now_l=10.0)


@pytest.fixture
def gap0(gap20):
    return PairSnapshot(**{**gap20.__dict__, "x_hat_l": 30.0})


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
