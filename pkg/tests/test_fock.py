import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qmodel.fock import (Exact63, Family, FockSpace, OscillatorParams, WindowError, build_D,
                         build_L, build_L_gauged, build_U, build_Uhat, det_u, elementary_ops,
                         matrix_elements_U, oscillator_uhat, parse_variant, rel_residual,
                         uhat_inverse, wm_eval)
from qmodel.fock import checks as C
from qmodel.fock.models import shift_signature, SHIFT_SIGNATURES
from qmodel.fock.space import op_residual
from qmodel.qarith import ClassicalPoint, make_qpoint, q_number
from qmodel.weylalg import WeylElement as W, uhat_closed_form

from conftest import POINTS, failures

Q13 = POINTS["1.3"]


def test_space_layout():
    S = FockSpace(Q13, 4)
    assert S.dim == 25
    assert S.basis[S.index(2, 3)] == (2, 3)
    assert S.index_jm(F(3, 2), F(1, 2)) == S.index(2, 1)
    assert S.jm(S.index(0, 3)) == (F(3, 2), F(-3, 2))
    assert len(S.window(1)) == 16
    assert S.index(0, 0) not in S.window(1, exclude_vacuum=True)
    with pytest.raises(WindowError):
        S.index(5, 0)
    with pytest.raises(WindowError):
        S.window(5)
    with pytest.raises(WindowError):
        FockSpace(Q13, 1)


def test_raise_lower_are_adjoint_at_real_q():
    S = FockSpace(Q13, 6)
    ops = elementary_ops(S)
    assert rel_residual(ops["z1"].T, ops["qd1"]) == 0.0
    # qd z - q z qd = N^-1 on the window (a q-oscillator pair)
    w = S.window(1)
    lhs = ops["qd1"] @ ops["z1"] - 1.3 * ops["z1"] @ ops["qd1"]
    assert rel_residual(lhs, S.diag(S.qpow(-S.n1)), w) < 1e-13


def test_variants():
    assert isinstance(parse_variant("exact63"), Exact63)
    assert parse_variant("family:1/2,0,2") == Family(F(1, 2), 0, 2)
    assert parse_variant("family") == Family()
    with pytest.raises(ValueError):
        parse_variant("family:1,2")
    with pytest.raises(ValueError):
        parse_variant("wrong")


@pytest.mark.parametrize("key", ["1.3", "circle", "classical"])
def test_exact_equals_default_family(key):
    qp = POINTS[key]
    S = FockSpace(qp, 8)
    assert op_residual(build_Uhat(S, Exact63()), build_Uhat(S, Family()), S.window(1)) < 1e-13


@pytest.mark.parametrize("key", ["1.3", "0.7", "circle", "classical"])
def test_udu_inverse_is_L(key):
    qp = POINTS[key]
    S = FockSpace(qp, 8)
    Uh = build_Uhat(S)
    det = qp.power(0.5)
    w = S.window(1)
    assert abs(det_u(S, Uh).diagonal()[w] - det).max() < 1e-12
    L = Uh @ build_D(S) @ uhat_inverse(S, Uh, det)
    assert op_residual(L, build_L_gauged(S), S.window(2)) < 1e-10
    # off-diagonal signs are opposite to the standard L
    if not qp.classical:
        assert op_residual(L, build_L(S), S.window(2)) > 1e-3


def test_matrix_elements_frozen():
    for qp in (ClassicalPoint(), Q13):
        S = FockSpace(qp, 4)
        U = build_U(S)
        # {1/2 1/2 0; 1/2 -1/2 0} sits in U_1 at |1/2, 1/2>
        expected = qp.power(0.5) / math.sqrt(q_number(2, qp)) if not qp.classical else 2 ** -0.5
        assert matrix_elements_U(U, S, F(1, 2), F(1, 2), 1) == pytest.approx(expected, abs=1e-14)
        assert matrix_elements_U(U, S, 0, 0, 1) == 0.0  # leaves the model space
    assert expected == pytest.approx(0.7926239891046001, rel=1e-13)  # sqrt(1.3)/sqrt(1.3+1/1.3)
    with pytest.raises(WindowError):
        matrix_elements_U(U, S, 4, 4, 4)


def test_shift_signatures():
    S = FockSpace(Q13, 5)
    U = build_U(S)
    for i, sig in SHIFT_SIGNATURES.items():
        assert shift_signature(U[(i - 1) // 2, (i - 1) % 2], S) == sig


def test_oscillator_constants_validated():
    S = FockSpace(Q13, 4)
    with pytest.raises(ValueError):
        oscillator_uhat(S, OscillatorParams(alpha0=2.0))


# exact evaluation bridge: eval(x y) = eval(x) eval(y) away from the cutoff
blocks = st.sampled_from([W.z(1), W.z(2), W.qd(1), W.qd(2), W.N(1, F(1, 2)), W.N(2, -1),
                          W.const(3)])
words = st.lists(blocks, min_size=1, max_size=3).map(lambda xs: math.prod(xs[1:], start=xs[0]))


@settings(max_examples=60, deadline=None)
@given(x=words, y=words)
def test_evaluation_homomorphism(x, y):
    for key in ("1.3", "circle"):
        S = FockSpace(POINTS[key], 7)
        lhs = wm_eval(x * y, S)
        rhs = wm_eval(x, S) @ wm_eval(y, S)
        assert rel_residual(lhs, rhs, S.window(3)) <= 1e-12


def test_closed_form_evaluates_to_exact_matrix():
    S = FockSpace(Q13, 6)
    W2 = uhat_closed_form()
    Uh = build_Uhat(S)
    for i in range(2):
        for j in range(2):
            assert rel_residual(wm_eval(W2[i, j], S), Uh[i, j], S.window(1)) < 1e-13


# --------------------------------------------------------------------------
# the identity collections, per point
# --------------------------------------------------------------------------

@pytest.mark.parametrize("fn", [C.l_algebra_checks, C.theorem1_checks, C.unitarity_checks,
                                C.tensor_ops_checks, C.diag_b_checks, C.qoscillator_checks],
                         ids=lambda f: f.__name__)
def test_fock_check_collections(fn, qp):
    reports = fn(qp, 8)
    assert not failures(reports)


def test_classical_limit_collection():
    reports = C.classical_limit_checks(None, 8)
    assert not failures(reports)
    ratios = [r for r in reports if "halving" in r.name]
    assert ratios and all(r.residual < 0.2 for r in ratios)


def test_diag_b_controls_are_detected():
    reports = C.diag_b_checks(Q13, 8)
    controls = [r for r in reports if r.expect_fail]
    assert len(controls) == 2 and all(r.residual > 1e-3 for r in controls)


def test_truncation_independence_helper():
    r = C.truncation_independence(C.theorem1_checks, Q13, 8)
    assert r.passed, r.line()
