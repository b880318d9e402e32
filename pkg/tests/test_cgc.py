import json
import math
from fractions import Fraction as F

import numpy as np
import pytest
from sympy import Rational
from sympy.physics.quantum.cg import CG

from qmodel.cgc import (CgcQuery, cgc_checks, cgc_classical, cgc_q, cgc_table,
                        correspondence_deviation, cross_check_table, orthogonality_deviation,
                        selection_rule_violations, u_matrix_records)
from qmodel.fock import Family
from qmodel.qarith import ClassicalPoint, make_qpoint, q_number

from conftest import POINTS, failures

CL = ClassicalPoint()
Q13 = POINTS["1.3"]
HALF = F(1, 2)


def _queries(jmax):
    for tj in range(0, int(2 * jmax) + 1):
        j = F(tj, 2)
        for tm in range(-tj, tj + 1, 2):
            for mp in (HALF, -HALF):
                for jo in (j - HALF, j + HALF):
                    if jo >= 0:
                        qy = CgcQuery(j, F(tm, 2), mp, jo)
                        if qy.in_range():
                            yield qy


def _r(x):
    return Rational(x.numerator, x.denominator)


def test_classical_against_sympy():
    for qy in _queries(4):
        ref = float(CG(_r(qy.j), _r(qy.m), Rational(1, 2), _r(qy.m_prime), _r(qy.j_out),
                       _r(qy.m_out)).doit())
        assert cgc_classical(qy) == pytest.approx(ref, abs=1e-13), qy


def test_spot_values():
    qy = CgcQuery.make("1/2", "1/2", "-1/2", 0)
    assert cgc_classical(qy) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert cgc_q(qy, Q13) == pytest.approx(Q13.power(0.5) / math.sqrt(q_number(2, Q13)))
    assert cgc_q(qy, Q13) == pytest.approx(0.7926239891046001, rel=1e-13)


def test_deformed_reduces_to_classical_near_one():
    qp = make_qpoint("real", 1 + 1e-7)
    worst = max(abs(cgc_q(qy, qp) - cgc_classical(qy)) for qy in _queries(3))
    assert worst < 1e-5


def test_query_validation():
    with pytest.raises(ValueError):
        CgcQuery.make(1, 2, HALF, HALF)
    with pytest.raises(ValueError):
        CgcQuery.make(1, 0, 1, HALF)
    with pytest.raises(ValueError):
        CgcQuery.make(1, 0, HALF, 2)
    assert not CgcQuery.make(HALF, HALF, HALF, 0).in_range()


@pytest.mark.parametrize("key", ["1.3", "0.7", "circle", "classical"])
def test_correspondence_exact(key):
    dev, n = correspondence_deviation(POINTS[key], 5)
    assert dev <= (1e-12 if key == "classical" else 1e-10)
    assert n == 4 * 66  # four entries for each of the 66 states with j <= 5


def test_family_prefactors():
    for fam in (Family(0, 0, 0), Family(1, F(1, 2), 1), Family(F(1, 4), -1, 3)):
        dev, _ = correspondence_deviation(Q13, 3, fam)
        assert dev < 1e-10, fam


@pytest.mark.parametrize("j", [0, 1, F(3, 2), 2])
def test_orthogonality(j):
    assert orthogonality_deviation(j, Q13) < 1e-12
    assert orthogonality_deviation(j, CL) < 1e-12


def test_selection_rules():
    assert selection_rule_violations(4, Q13) == 0


def test_cgc_checks_all_points(qp):
    assert not failures(cgc_checks(qp, jmax=3))


def test_table_half():
    t = cgc_table("1/2", CL)
    vals = [complex(v).real for _, v in t.rows]
    assert len(t.rows) == 6
    assert sum(abs(v) > 0 for v in vals) == 6
    assert any(abs(v - 2 ** -0.5) < 1e-15 for v in vals)


def test_table_vacuum():
    t = cgc_table("0", Q13)
    assert {str(qy.j_out) for qy, _ in t.rows} == {"1/2"}
    assert [complex(v).real for _, v in t.rows] == pytest.approx([1.0, 1.0])


def test_table_formats_and_cross_check():
    t = cgc_table("3/2", POINTS["circle"])
    assert cross_check_table(t, POINTS["circle"]) < 1e-12
    csv_text = t.to_csv()
    assert csv_text.splitlines()[0] == "j,m,m',j'',m'',re,im"
    assert "cross-check max deviation" in csv_text
    doc = json.loads(t.to_json())
    assert len(doc["rows"]) == len(t.rows) and "cross_check_max_deviation" in doc


def test_u_matrix_records_match_table():
    rows = u_matrix_records(CL, 1)
    by_key = {tuple(r[1:5]): r[5] for r in rows}
    assert by_key[("1/2", "1/2", "0", "0")] == pytest.approx(2 ** -0.5)
    assert all(r[6] == 0 for r in rows)
