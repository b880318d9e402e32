import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qmodel.qarith import (ClassicalPoint, HalfInt, LaurentU, QPointError, check_q_identity,
                           eighths, laurent_arith, laurent_eval, make_qpoint, parse_qpoint,
                           q_factorial, q_number)

Q13 = make_qpoint("real", 1.3)
Q2 = make_qpoint("real", 2.0)
QC = make_qpoint("circle", math.pi / 40)
CL = ClassicalPoint()

eighth = st.integers(-40, 40).map(lambda k: Fraction(k, 8))


def test_qpoint_roots():
    assert Q13.q == pytest.approx(1.3)
    assert Q13.u ** 8 == pytest.approx(1.3)
    assert Q13.power(0.5) == pytest.approx(Q13.u ** 4)
    assert QC.q == pytest.approx(cmath.exp(1j * math.pi / 40))


def test_q_equal_one_is_rejected():
    with pytest.raises(QPointError, match="ClassicalPoint"):
        make_qpoint("real", 1.0)


@pytest.mark.parametrize("theta", [0.0, -0.1, math.pi / 24])
def test_circle_range(theta):
    with pytest.raises(QPointError):
        make_qpoint("circle", theta, ncap=10)


def test_circle_range_tracks_ncap():
    make_qpoint("circle", math.pi / 40, ncap=12)
    with pytest.raises(QPointError):
        make_qpoint("circle", math.pi / 40, ncap=20)


def test_parse_points():
    assert parse_qpoint("1").classical
    assert parse_qpoint("0.7").q == pytest.approx(0.7)
    assert parse_qpoint("circle:pi/40").parameter == pytest.approx(math.pi / 40)
    assert parse_qpoint("circle:0.05").parameter == pytest.approx(0.05)
    with pytest.raises(QPointError):
        parse_qpoint("abc")
    with pytest.raises(QPointError):
        parse_qpoint("-2")


def test_q_number_values():
    assert q_number(0, Q13) == 0
    assert q_number(1, Q13) == pytest.approx(1)
    assert q_number(2, Q2) == pytest.approx(2.5)
    assert q_number(Fraction(3, 2), CL) == 1.5


def test_q_number_rejects_fine_denominators():
    with pytest.raises(ValueError):
        q_number(Fraction(1, 16), Q13)
    with pytest.raises(ValueError):
        eighths(Fraction(1, 3))


def test_q_factorial():
    assert q_factorial(0, Q13) == 1
    assert q_factorial(2, Q13) == pytest.approx(1.3 + 1 / 1.3)
    assert q_factorial(3, CL) == 6


@pytest.mark.parametrize("a,b", [(1, 1), (2, 3), (0, 5)])
@pytest.mark.parametrize("qp", [Q13, QC, CL], ids=["1.3", "circle", "classical"])
def test_addition_identity_examples(a, b, qp):
    r = check_q_identity(a, b, qp)
    assert r.passed and r.residual <= 1e-12


@settings(max_examples=200, deadline=None)
@given(a=eighth, b=eighth)
def test_addition_identity_random(a, b):
    for qp in (Q13, QC):
        assert check_q_identity(a, b, qp).passed


@settings(max_examples=100, deadline=None)
@given(x=eighth)
def test_antisymmetry_and_conjugation(x):
    for qp in (Q13, QC):
        assert q_number(-x, qp) == pytest.approx(-q_number(x, qp), abs=1e-13)
        conj = qp.conjugate()
        assert complex(q_number(x, conj)) == pytest.approx(complex(q_number(x, qp)).conjugate(),
                                                           abs=1e-12)
    assert complex(q_number(x, QC)).imag == pytest.approx(0, abs=1e-13)


def test_halfint():
    assert HalfInt.parse("3/2").twice == 3
    assert HalfInt.parse(2).value == 2
    assert str(HalfInt.parse("1/2")) == "1/2"
    with pytest.raises(ValueError):
        HalfInt.parse("7/3")


# --------------------------------------------------------------------------
# exact Laurent ring
# --------------------------------------------------------------------------

def test_laurent_examples():
    u = LaurentU.u_power(1)
    ui = LaurentU.u_power(-1)
    assert laurent_arith(u + ui, u - ui, "mul") == LaurentU.u_power(2) - LaurentU.u_power(-2)
    assert laurent_arith(u, None, "neg") == -u
    assert laurent_eval(LaurentU.u_power(8), Q13) == pytest.approx(1.3)
    assert LaurentU.q_power(Fraction(1, 2)) == LaurentU.u_power(4)


def test_omega_division_normalizes():
    w = LaurentU.omega()
    x = (LaurentU.q_power(2) - LaurentU.q_power(-2)) * LaurentU({0: 1}, omega_den=1)
    assert x == LaurentU.q_power(1) + LaurentU.q_power(-1)
    assert w * LaurentU({0: 1}, omega_den=1) == LaurentU.const(1)
    with pytest.raises(ZeroDivisionError):
        w.inverse()
    assert laurent_eval(LaurentU.q_number(3), Q13) == pytest.approx(q_number(3, Q13))


laurents = st.dictionaries(st.integers(-20, 20),
                           st.fractions(min_value=-5, max_value=5, max_denominator=6),
                           max_size=5).map(LaurentU)


@settings(max_examples=150, deadline=None)
@given(x=laurents, y=laurents, z=laurents)
def test_laurent_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert (x - x).is_zero()


@settings(max_examples=150, deadline=None)
@given(x=laurents, y=laurents)
def test_evaluation_homomorphism(x, y):
    for qp in (Q13, QC, CL):
        ex, ey = laurent_eval(x, qp), laurent_eval(y, qp)
        scale = max(1.0, abs(ex) * abs(ey))
        assert abs(laurent_eval(x * y, qp) - ex * ey) <= 1e-12 * scale
        assert abs(laurent_eval(x + y, qp) - (ex + ey)) <= 1e-12 * max(1.0, abs(ex) + abs(ey))


@settings(max_examples=60, deadline=None)
@given(x=laurents, den=st.integers(0, 2))
def test_conjugation_matches_complex_conjugate(x, den):
    x = LaurentU(x.terms, den)
    assert laurent_eval(x.conjugate("real"), Q13) == pytest.approx(laurent_eval(x, Q13))
    val = complex(laurent_eval(x, QC))
    assert complex(laurent_eval(x.conjugate("circle"), QC)) == pytest.approx(val.conjugate(),
                                                                            abs=1e-9)
