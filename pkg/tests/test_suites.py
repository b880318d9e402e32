import pytest

from qmodel.suites import SUITES, UnknownSuite, default_points, get_suite, run_suite

from conftest import POINTS, failures

CATALOG = ["qarith-identities", "weyl-borel", "weyl-uhat", "appendix-c", "l-algebra", "theorem1",
           "classical-limit", "cgc-correspondence", "unitarity", "tensor-ops", "diag-b",
           "q-oscillator", "dybe"]


def test_catalog():
    assert list(SUITES) == CATALOG
    with pytest.raises(UnknownSuite):
        get_suite("nope")


def test_default_grid():
    pts = default_points(10)
    assert [p.label() for p in pts][-1] == "1" and len(pts) == 4
    assert len(default_points(10, classical=False)) == 3


@pytest.mark.parametrize("name", [n for n in CATALOG if SUITES[n].point_free])
def test_point_free_suites(name):
    reports = run_suite(name, POINTS["1.3"])
    assert reports and not failures(reports)
    assert any(r.expect_fail for r in reports) or name in ("weyl-borel", "classical-limit")


def test_check_names_unique_within_suites():
    for name in ("weyl-borel", "weyl-uhat", "appendix-c"):
        names = [r.name for r in run_suite(name, POINTS["1.3"])]
        assert len(names) == len(set(names)), name


def test_deterministic():
    a = [(r.name, r.residual) for r in run_suite("theorem1", POINTS["circle"], 8)]
    b = [(r.name, r.residual) for r in run_suite("theorem1", POINTS["circle"], 8)]
    assert a == b


@pytest.mark.parametrize("name", ["qarith-identities", "dybe", "l-algebra"])
def test_numeric_suites(name, qp):
    assert not failures(run_suite(name, qp, 8))
