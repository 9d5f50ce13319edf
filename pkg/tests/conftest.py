import json
import math
from pathlib import Path

import pytest

from rfiqkd import ChannelParams, ideal_table

DATA = Path(__file__).parent / "data"


def load_json(name):
    return json.loads((DATA / name).read_text())


def table(e_b, theta):
    return ideal_table(ChannelParams(e_b, theta))


@pytest.fixture
def noiseless_quarter():
    return table(0.0, math.pi / 4)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
