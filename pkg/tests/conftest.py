import numpy as np
import pytest

from qmodel.qarith import ClassicalPoint, make_qpoint

NCAP = 10


def _points(ncap=NCAP):
    return {
        "1.3": make_qpoint("real", 1.3, ncap),
        "0.7": make_qpoint("real", 0.7, ncap),
        "circle": make_qpoint("circle", np.pi / 40, ncap),
        "classical": ClassicalPoint(ncap),
    }


POINTS = _points()
DEFORMED = ["1.3", "0.7", "circle"]


@pytest.fixture(params=list(POINTS), ids=list(POINTS))
def qp(request):
    return POINTS[request.param]


@pytest.fixture(params=DEFORMED, ids=DEFORMED)
def qp_deformed(request):
    return POINTS[request.param]


def failures(reports):
    return [r.line() for r in reports if not r.passed]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
