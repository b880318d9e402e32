import json
import math

import pytest
from hypothesis import given, strategies as st

from qmodel.report import CheckReport, emit_report, parse_report


def test_empty_report():
    doc = json.loads(emit_report([]))
    assert doc["checks"] == [] and doc["pass"] is True


def test_failing_check_sets_top_level():
    bad = CheckReport.numeric("s", "x", "a", 1.0, 1e-3)
    doc = json.loads(emit_report([CheckReport.numeric("s", "y", "a", 0.0, 1e-3), bad]))
    assert doc["pass"] is False
    assert [c["name"] for c in doc["checks"]] == ["y", "x"]
    assert set(doc) == {"suite", "params", "checks", "pass"}


def test_pass_rules():
    assert CheckReport.exact("s", "n", "a", 0).residual == "exact-zero"
    assert not CheckReport.exact("s", "n", "a", 3).passed
    assert CheckReport.exact("s", "n", "a", 3, expect_fail=True).passed
    assert not CheckReport.numeric("s", "n", "a", math.nan, 1.0).passed
    ctl = CheckReport.numeric("s", "n", "a", 0.01, 1e-10, expect_fail=True, threshold=1e-3)
    assert ctl.passed


def test_text_format():
    text = emit_report([CheckReport.numeric("s", "n", "a", 1e-15, 1e-12)], "text")
    lines = text.strip().splitlines()
    assert lines[0].startswith("PASS s/n") and lines[-1].startswith("OVERALL PASS")
    with pytest.raises(ValueError):
        emit_report([], "yaml")


reports = st.builds(
    CheckReport.numeric, st.sampled_from(["a", "b"]), st.text(max_size=8), st.text(max_size=8),
    st.floats(0, 1e3), st.floats(1e-15, 1.0),
    st.dictionaries(st.sampled_from(["q", "ncap"]), st.integers(0, 20), max_size=2))


@given(st.lists(reports, max_size=6))
def test_json_round_trip(rs):
    assert parse_report(emit_report(rs)) == rs
