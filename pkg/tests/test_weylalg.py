from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from qmodel.qarith import LaurentU
from qmodel.weylalg import (FreeFieldParams, InadmissibleExponent, WeylElement, build_free_field,
                            build_L_freefield, build_L_reference, build_Uhat_monomial,
                            uhat_closed_form, uhat_det, uhat_from_free_field,
                            verify_borel_relations, verify_L_central_elements,
                            verify_L_equality, verify_Uhat_relations, wm_adjoint, wm_mul)

from conftest import failures

W = WeylElement
q = LaurentU.q_power
OMEGA_INV = LaurentU({0: 1}, omega_den=1)


def test_weyl_pair_relation():
    assert W.N(1) * W.z(1) == W.monomial(q(1), a1=1, s1=1)
    assert wm_mul(W.N(2), W.z(1)) == W.monomial(1, a1=1, s2=1)


def test_half_powers_cancel():
    assert W.z(1, F(-1, 2)) * W.z(1, F(1, 2)) == W.const(1)


def test_inadmissible_exponent():
    with pytest.raises(InadmissibleExponent):
        W.monomial(1, a1=F(1, 4))
    with pytest.raises(InadmissibleExponent):
        W.monomial(1, s1=F(1, 8))


def test_free_field_defaults():
    ff = build_free_field()
    assert ff.b == W.monomial(q(1), s1=1, s2=1)
    assert ff.a.inverse() * ff.c * ff.d0 == W.monomial(-1, s1=-1, s2=1)
    assert ff.a * ff.c == W.monomial(q(F(-1, 2)), a1=-1, a2=1, s1=F(-1, 2), s2=F(-1, 2))
    assert ff.eixi == W.monomial(1, a1=1, s1=F(3, 2), s2=1)
    # d splits into the homogeneous part and the ordered remainder
    d1 = ff.c.inverse() * ff.b.inverse() * ff.a
    assert ff.d == ff.d0 + d1.scale(q(F(1, 2)))


def test_shift_carries_epsilon():
    ff = build_free_field(FreeFieldParams(eps=F(1, 4)))
    assert ff.eixi == W.monomial(q(F(1, 2)), a1=1, s1=F(3, 2), s2=1)


def test_adjoint_examples():
    adj = wm_adjoint(W.z(1))
    assert adj == (W.z(1, -1) * (W.N(1) - W.N(1, -1))).scale(OMEGA_INV)
    assert wm_adjoint(W.N(2)) == W.N(2)
    assert wm_adjoint(adj) == W.z(1)


def test_L_entries_and_equality():
    ff = build_free_field()
    Lff, Lref = build_L_freefield(ff), build_L_reference()
    assert Lff[1, 1] == W.monomial(q(2), s1=-1, s2=1)
    assert Lref[1, 1] == W.monomial(q(2), s1=-1, s2=1)
    # equal after flipping the sign of the off-diagonal entries
    assert Lff == Lref.gauge_sigma_z()
    assert Lff != Lref


def test_uhat_entries():
    U = build_Uhat_monomial()
    assert U[0, 1] == W.monomial(1, a2=1, s1=F(-1, 2))
    assert U[1, 1] == W.monomial(1, a1=1, s2=F(1, 2))
    assert U[0, 0] * U[0, 1] == U[0, 1] * U[0, 0]
    assert U == uhat_closed_form()


def test_determinant_scalar():
    ff = build_free_field()
    assert uhat_det(build_Uhat_monomial(), ff.b) == W.q_power(F(1, 2))


def test_verify_functions_all_exact_zero():
    ff = build_free_field()
    reports = (verify_borel_relations(ff) + verify_L_equality(ff)
               + verify_L_central_elements(build_L_freefield(ff), ff.b)
               + verify_Uhat_relations(build_Uhat_monomial(), ff.b))
    assert not failures(reports)
    assert all(r.residual == "exact-zero" for r in reports if not r.expect_fail)


@pytest.mark.parametrize("gamma", [F(-1), F(0), F(1, 2), F(2)])
def test_uhat_family_relations(gamma):
    p = FreeFieldParams(gamma=gamma)
    U = build_Uhat_monomial(F(1, 2), 0, gamma, params=p)
    assert not failures(verify_Uhat_relations(U, build_free_field(p).b))


def test_negative_control_wrong_column_factor():
    ff = build_free_field()
    bad = uhat_from_free_field(ff, v=ff.b)
    assert any(not r.passed for r in verify_Uhat_relations(bad, ff.b))
    assert all(r.passed for r in verify_Uhat_relations(bad, ff.b, expect_fail=True))


# --------------------------------------------------------------------------
# random elements
# --------------------------------------------------------------------------

halves = st.integers(-2, 2).map(lambda k: F(k, 2))
quarters = st.integers(-3, 3).map(lambda k: F(k, 4))
coeffs = st.sampled_from([LaurentU.const(1), LaurentU.const(F(-2, 3)), q(F(1, 8)),
                          q(F(-1, 2)) + LaurentU.const(3)])
monomials = st.builds(W.monomial, coeffs, halves, halves, quarters, quarters)
elements = st.lists(monomials, min_size=1, max_size=3).map(
    lambda ms: sum(ms[1:], ms[0]))
# products of z, q-derivatives and N-powers stay in the admissible sub-lattice
blocks = st.sampled_from([W.z(1), W.z(2), W.qd(1), W.qd(2), W.N(1, F(1, 2)), W.N(2, F(-1, 4))])
int_mono = st.tuples(coeffs, st.lists(blocks, min_size=1, max_size=3)).map(
    lambda t: sum(t[1][1:], t[1][0]).scale(t[0]) if len(t[1]) % 2 else
    (t[1][0] * t[1][-1]).scale(t[0]))


@settings(max_examples=80, deadline=None)
@given(x=elements, y=elements, z=elements)
def test_associative_and_distributive(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@settings(max_examples=60, deadline=None)
@given(x=int_mono, y=int_mono)
def test_adjoint_is_antihomomorphism(x, y):
    for mode in ("real", "circle"):
        assert (x * y).adjoint(mode) == y.adjoint(mode) * x.adjoint(mode)
        assert x.adjoint(mode).adjoint(mode) == x
