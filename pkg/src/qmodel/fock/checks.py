"""Residual suites on the truncated model space.

Every function takes a q-point, a truncation ``ncap`` and the default
tolerance and returns a list of :class:`~qmodel.report.CheckReport`.  All
residuals are relative Frobenius norms restricted to a window of basis
states on which truncation cannot leak into the identity being checked.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List, Sequence

import numpy as np
import scipy.sparse as sp

from ..dyn_ybe import PERM, build_R_const, embed_dyn, r_dyn_values
from ..qarith import AnyPoint, ClassicalPoint, make_qpoint
from ..report import CheckReport
from ..weylalg import (FreeFieldParams, WeylElement, build_free_field, wm_adjoint)
from .models import (Exact63, OscillatorParams, build_D, build_L, build_L_gauged, build_U,
                     build_Uhat, build_uqsl2, casimir, det_u, det_u_alt, elementary_ops,
                     oscillator_uhat, p_values, shift_signature, sqrt_qnum_p, uhat_inverse,
                     SHIFT_SIGNATURES)
from .space import (ExtendedLattice, FockSpace, OpMatrix2, aux_const, aux_window,
                    rel_residual, slot, wm_eval, wm_eval_extended)

SIGMA_DIAG = lambda qp: np.diag([qp.power(-1.0), qp.power(1.0), qp.power(1.0), qp.power(-1.0)])


def _params(qp: AnyPoint, ncap: int, **extra) -> Dict:
    d = {"q": qp.label(), "ncap": ncap}
    d.update(extra)
    return d


def _tight(tol: float) -> float:
    return tol * 1e-2


def _blk(A, B, cols, naux: int) -> float:
    return rel_residual(A, B, aux_window(cols, naux))


def _abs_on(A, cols) -> float:
    A = sp.csr_matrix(A)[:, cols]
    return float(np.max(np.abs(A.toarray()))) if A.shape[1] else 0.0


# --------------------------------------------------------------------------
# U_q(sl(2)) and the L-matrix
# --------------------------------------------------------------------------


def l_algebra_checks(qp: AnyPoint, ncap: int = 10, tol: float = 1e-10,
                     suite: str = "l-algebra") -> List[CheckReport]:
    S = FockSpace(qp, ncap)
    g = build_uqsl2(S)
    prm = _params(qp, ncap)
    out: List[CheckReport] = []
    w1, w2 = S.window(1), S.window(2)
    lp, lm = g["lp"], g["lm"]
    if qp.classical:
        two_l3 = 2 * g["l3"]
    else:
        two_l3 = (g["q2l3"] - g["q2l3_inv"]) / qp.omega
    out.append(CheckReport.numeric(suite, "[l+, l-] = [2 l3]", "U_q(sl2) relations",
                                   rel_residual(lp @ lm - lm @ lp, two_l3, w1), tol, prm))
    out.append(CheckReport.numeric(suite, "q^l3 l+ q^-l3 = q l+", "U_q(sl2) relations",
                                   rel_residual(g["ql3"] @ lp @ g["ql3_inv"], qp.power(1) * lp, w1),
                                   tol, prm))
    out.append(CheckReport.numeric(suite, "q^l3 l- q^-l3 = q^-1 l-", "U_q(sl2) relations",
                                   rel_residual(g["ql3"] @ lm @ g["ql3_inv"], qp.power(-1) * lm, w1),
                                   tol, prm))
    C = casimir(S, g)
    j = (S.n1 + S.n2) / 2.0
    expect = S.qpow(2 * j + 1) + S.qpow(-(2 * j + 1))
    out.append(CheckReport.numeric(suite, "Casimir eigenvalue per spin block", "Casimir",
                                   rel_residual(C, S.diag(expect), w1), _tight(tol), prm))
    L = build_L(S, g)
    L1, L2 = slot(L, 1), slot(L, 2)
    Rp, Rm = build_R_const(qp, +1), build_R_const(qp, -1)
    I = lambda R: aux_const(S.dim, R)
    lhs = L1 @ I(np.linalg.inv(Rm)) @ L2 @ I(Rm)
    rhs = I(np.linalg.inv(Rp)) @ L2 @ I(Rp) @ L1
    out.append(CheckReport.numeric(suite, "RLL exchange relation", "L-algebra relations",
                                   _blk(lhs, rhs, w2, 4), tol, prm))
    q = qp.power(1)
    K1 = q * L[0, 0] + L[1, 1] / q
    K2 = L[0, 0] @ L[1, 1] / q - q * (L[0, 1] @ L[1, 0])
    out.append(CheckReport.numeric(suite, "K2 = q^3", "central elements of L",
                                   rel_residual(K2, qp.power(3) * S.identity(), w1),
                                   _tight(tol), prm))
    out.append(CheckReport.numeric(suite, "K1 = q^2 C", "central elements of L",
                                   rel_residual(K1, qp.power(2) * C, w1), _tight(tol), prm))
    worst = max(rel_residual(K1 @ L[a, b], L[a, b] @ K1, w2) for a in range(2) for b in range(2))
    out.append(CheckReport.numeric(suite, "K1 commutes with L", "central elements of L",
                                   worst, tol, prm))
    worst = max(rel_residual(K2 @ L[a, b], L[a, b] @ K2, w2) for a in range(2) for b in range(2))
    out.append(CheckReport.numeric(suite, "K2 commutes with L", "central elements of L",
                                   worst, tol, prm))
    m = (S.n1 - S.n2) / 2.0
    out.append(CheckReport.numeric(suite, "L22 = q^2 q^-2m", "standard L-matrix",
                                   rel_residual(L[1, 1], S.diag(qp.power(2) * S.qpow(-2 * m)), w1),
                                   _tight(tol), prm))
    if qp.classical:
        ops = elementary_ops(S)
        out.append(CheckReport.numeric(suite, "classical l+ = z1 d2", "undeformed generators",
                                       rel_residual(lp, ops["z1"] @ ops["qd2"], w1), tol, prm))
    return out


# --------------------------------------------------------------------------
# exchange relations of the generating matrix
# --------------------------------------------------------------------------


def theorem1_checks(qp: AnyPoint, ncap: int = 10, tol: float = 1e-10,
                    suite: str = "theorem1") -> List[CheckReport]:
    S = FockSpace(qp, ncap)
    prm = _params(qp, ncap, variant="exact63")
    out: List[CheckReport] = []
    w1, w2 = S.window(1), S.window(2)
    Uh = build_Uhat(S, Exact63())
    U = build_U(S, Exact63())
    D = build_D(S)
    det = qp.power(0.5)
    Uh_inv = uhat_inverse(S, Uh, det)
    U_inv = Uh_inv.left(sqrt_qnum_p(S, 0.5))
    L_gauged = build_L_gauged(S)
    L_std = build_L(S)
    I = lambda R: aux_const(S.dim, R)
    sigma = I(SIGMA_DIAG(qp))
    U1, U2 = slot(U, 1), slot(U, 2)
    D1, D2 = slot(D, 1), slot(D, 2)

    out.append(CheckReport.numeric(suite, "D1 U2 = U2 D1 sigma", "U-D exchange",
                                   _blk(D1 @ U2, U2 @ D1 @ sigma, w1, 4), tol, prm))
    out.append(CheckReport.numeric(suite, "D2 U1 = U1 D2 sigma", "U-D exchange",
                                   _blk(D2 @ U1, U1 @ D2 @ sigma, w1, 4), tol, prm))
    pv = p_values(S)
    Rp_dyn = embed_dyn(r_dyn_values(pv, qp, +1), (0, 1), 2)
    Rm_dyn = embed_dyn(r_dyn_values(pv, qp, -1), (0, 1), 2)
    for sign, Rc, Rd in ((+1, build_R_const(qp, +1), Rp_dyn), (-1, build_R_const(qp, -1), Rm_dyn)):
        tag = "+" if sign > 0 else "-"
        out.append(CheckReport.numeric(suite, f"R{tag} U1 U2 = U2 U1 R{tag}(p)", "U-U exchange",
                                       _blk(I(Rc) @ U1 @ U2, U2 @ U1 @ Rd, w2, 4), tol, prm))
    D1_inv = slot(OpMatrix2([[D[1, 1], D[0, 1]], [D[1, 0], D[0, 0]]]), 1)
    out.append(CheckReport.numeric(suite, "R-(p) = D1^-1 R+(p) sigma D1", "dynamical R identity",
                                   _blk(Rm_dyn, D1_inv @ Rp_dyn @ sigma @ D1, S.window(0), 4),
                                   tol, prm))
    UDU = U @ D @ U_inv
    UhDUh = Uh @ D @ Uh_inv
    out.append(CheckReport.numeric(suite, "U D U^-1 = U-hat D U-hat^-1", "hat variables",
                                   _blk(UDU.block(), UhDUh.block(), w2, 2), tol, prm))
    out.append(CheckReport.numeric(suite, "U D U^-1 = L", "L from the generating matrix",
                                   _blk(UDU.block(), L_gauged.block(), w2, 2), tol, prm))
    # the produced L differs from the standard matrix exactly by the sign of
    # its off-diagonal entries
    flipped = UDU.gauge_sigma_z()
    out.append(CheckReport.numeric(suite, "U D U^-1 = diag(1,-1) L_std diag(1,-1)",
                                   "sign convention of the standard L-matrix",
                                   _blk(flipped.block(), L_std.block(), w2, 2), tol, prm))
    Lth1 = slot(L_gauged, 1)
    out.append(CheckReport.numeric(suite, "[L1, D2] = 0", "commutativity of L and D",
                                   _blk(Lth1 @ D2, D2 @ Lth1, w1, 4), tol, prm))
    P = S.diag(pv)
    worst = max(rel_residual(P @ L_gauged[a, b], L_gauged[a, b] @ P, w1)
                for a in range(2) for b in range(2))
    out.append(CheckReport.numeric(suite, "[p, L_ij] = 0", "commutativity of L and p",
                                   worst, _tight(tol), prm))
    d = det_u(S, Uh)
    out.append(CheckReport.numeric(suite, "Det U = q^(1/2)", "determinant of the exact U",
                                   rel_residual(d, det * S.identity(), w1), _tight(tol), prm))
    out.append(CheckReport.numeric(suite, "Det U alternative ordering", "determinant of U",
                                   rel_residual(det_u_alt(S, Uh), det * S.identity(), w1),
                                   _tight(tol), prm))
    Id = OpMatrix2([[S.identity(), 0 * S.identity()], [0 * S.identity(), S.identity()]])
    out.append(CheckReport.numeric(suite, "U-hat U-hat^-1 = 1", "closed-form inverse",
                                   _blk((Uh @ Uh_inv).block(), Id.block(), w1, 2), tol, prm))
    # U1 and U3 annihilate the vacuum, so the left inverse misses |0,0>
    out.append(CheckReport.numeric(suite, "U-hat^-1 U-hat = 1 (j > 0)", "closed-form inverse",
                                   _blk((Uh_inv @ Uh).block(), Id.block(),
                                        S.window(1, exclude_vacuum=True), 2), tol, prm))
    bad = 0
    for i, sig in SHIFT_SIGNATURES.items():
        if shift_signature(U[(i - 1) // 2, (i - 1) % 2], S) != sig:
            bad += 1
    out.append(CheckReport.exact(suite, "shift signatures of U_i", "action on the model space",
                                 bad, prm))
    return out


# --------------------------------------------------------------------------
# classical limit
# --------------------------------------------------------------------------


def _classical_L0(S: FockSpace) -> OpMatrix2:
    g = build_uqsl2(S)
    I = S.identity()
    return OpMatrix2([[2 * (I + g["l3"]), 2 * g["lm"]], [2 * g["lp"], 2 * (I - g["l3"])]])


def classical_limit_checks(qp: AnyPoint = None, ncap: int = 10, tol: float = 1e-10,
                           suite: str = "classical-limit",
                           gammas: Sequence[float] = (1e-2, 5e-3, 2.5e-3),
                           jmax: int = 2) -> List[CheckReport]:
    """Halving test for ``(L(q) - 1)/gamma -> L0`` and the Borel decomposition
    of ``L0``.  ``qp`` is ignored; the suite always runs at ``q = e^gamma``
    and at the classical point.  The halving test is measured on the fixed
    window ``n1 + n2 <= 2 jmax``."""
    cp = ClassicalPoint()
    prm = {"ncap": ncap, "gammas": list(gammas)}
    out: List[CheckReport] = []
    S0 = FockSpace(cp, ncap)
    L0 = _classical_L0(S0)
    cols = np.nonzero((S0.n1 + S0.n2) <= 2 * jmax)[0]
    errs = []
    for gm in gammas:
        Sq = FockSpace(make_qpoint("real", float(np.exp(gm)), ncap), ncap)
        L = build_L(Sq)
        I = Sq.identity()
        Z = 0 * I
        diffs = OpMatrix2([[(L[0, 0] - I) / gm - L0[0, 0], L[0, 1] / gm - L0[0, 1]],
                           [L[1, 0] / gm - L0[1, 0], (L[1, 1] - I) / gm - L0[1, 1]]])
        blk = diffs.block()[:, aux_window(cols, 2)]
        errs.append(float(np.linalg.norm(blk.toarray())))
    for k in range(len(errs) - 1):
        ratio = errs[k] / errs[k + 1]
        out.append(CheckReport.numeric(suite, f"halving ratio gamma={gammas[k]:g}",
                                       "first-order classical limit of L", abs(ratio - 2.0), 0.2,
                                       dict(prm, ratio=ratio, errors=errs[k:k + 2])))
    # L0 equals the explicit differential-operator form
    ops = elementary_ops(S0)
    z1, z2, d1, d2 = ops["z1"], ops["z2"], ops["qd1"], ops["qd2"]
    n1, n2 = z1 @ d1, z2 @ d2
    I = S0.identity()
    explicit = OpMatrix2([[2 * I + n1 - n2, 2 * (z2 @ d1)], [2 * (z1 @ d2), 2 * I - n1 + n2]])
    w1 = S0.window(1)
    out.append(CheckReport.numeric(suite, "L0 = 2[[1+l3, l-], [l+, 1-l3]]", "limit L-operator",
                                   _blk(explicit.block(), L0.block(), w1, 2), _tight(tol), prm))
    # L0 = U0 diag(p, -p) U0^-1
    U0 = build_U(S0, Exact63())
    U0h = build_Uhat(S0, Exact63())
    U0_inv = uhat_inverse(S0, U0h, 1.0).left(sqrt_qnum_p(S0, 0.5))
    Pd = S0.diag(p_values(S0))
    Dp = OpMatrix2([[Pd, 0 * I], [0 * I, -Pd]])
    got = U0 @ Dp @ U0_inv
    out.append(CheckReport.numeric(suite, "U0 diag(p,-p) U0^-1 = L0 (diag(1,-1) gauge)",
                                   "limit of the L-matrix from U",
                                   _blk(got.gauge_sigma_z().block(), L0.block(), S0.window(2), 2),
                                   _tight(tol), prm))
    out.append(borel_decomposition_check(ncap, tol, suite))
    return out


def _ext_classical_ops(lat: ExtendedLattice):
    one = lambda a, b: np.ones_like(a)
    z1h = lambda k: lat.shift(Fraction(k, 2), 0, one)
    return {
        "z1^1/2": z1h(1), "z1^-1/2": z1h(-1),
        "z2": lat.shift(0, 1, one),
        "d1": lat.shift(-1, 0, lambda a, b: a),
        "d2": lat.shift(0, -1, lambda a, b: b),
        "n1": lat.diag(lat.t1 / 2.0), "n2": lat.diag(lat.t2 / 2.0),
    }


def borel_decomposition_check(ncap: int = 10, tol: float = 1e-10,
                              suite: str = "classical-limit") -> CheckReport:
    """``L0 = A0 B0 A0^-1`` with half-integer powers of ``z1`` on the extended lattice."""
    lat = ExtendedLattice(ClassicalPoint(), ncap)
    o = _ext_classical_ops(lat)
    I = lat.identity()
    Z = 0 * I
    P = lat.diag(lat.p_values)
    A0 = OpMatrix2([[o["z1^-1/2"], -(o["z1^-1/2"] @ o["z2"])], [Z, o["z1^1/2"]]])
    A0_inv = OpMatrix2([[o["z1^1/2"], o["z1^-1/2"] @ o["z2"]], [Z, o["z1^-1/2"]]])
    B0 = OpMatrix2([[P + 0.5 * I, Z], [2 * o["d2"], -(P - 0.5 * I)]])
    z1 = lat.shift(1, 0, lambda a, b: np.ones_like(a))
    l3 = 0.5 * (o["n1"] - o["n2"])
    L0 = OpMatrix2([[2 * (I + l3), 2 * (o["z2"] @ o["d1"])], [2 * (z1 @ o["d2"]), 2 * (I - l3)]])
    cols = lat.polynomial_window(1)
    res = _blk((A0 @ B0 @ A0_inv).block(), L0.block(), cols, 2)
    return CheckReport.numeric(suite, "L0 = A0 B0 A0^-1", "Borel decomposition of L0",
                               res, _tight(tol), {"ncap": ncap, "lslack": lat.lslack})


# --------------------------------------------------------------------------
# unitarity
# --------------------------------------------------------------------------


def unitarity_checks(qp: AnyPoint, ncap: int = 10, tol: float = 1e-10,
                     suite: str = "unitarity") -> List[CheckReport]:
    """``(U^T)^* U^T = 1`` for real q (and at the classical point).

    The reverse product ``U^T (U^T)^*`` fails on the vacuum, where ``U1`` and
    ``U3`` annihilate, so it is reported on the window without ``j = 0``.
    """
    S = FockSpace(qp, ncap)
    prm = _params(qp, ncap)
    out: List[CheckReport] = []
    w1 = S.window(1)
    ops = elementary_ops(S)
    adj_z1 = wm_eval(wm_adjoint(WeylElement.z(1), "real" if qp.classical else qp.mode), S) \
        if not qp.classical else ops["qd1"]
    out.append(CheckReport.numeric(suite, "adjoint(z1) = z1^-1 [z1 d1]", "conjugation rule",
                                   rel_residual(adj_z1, ops["qd1"], w1), tol, prm))
    out.append(CheckReport.numeric(suite, "adjoint(z1) = basis adjoint of z1", "conjugation rule",
                                   rel_residual(adj_z1, ops["z1"].conj().T, w1), tol, prm))
    if not qp.classical and qp.mode == "circle":
        return out
    U = build_U(S, Exact63())
    Ut = U.transpose()
    Ut_star = Ut.adjoint()
    I = S.identity()
    Id = OpMatrix2([[I, 0 * I], [0 * I, I]])
    out.append(CheckReport.numeric(suite, "(U^T)^* U^T = 1", "unitarity of the transposed U",
                                   _blk((Ut_star @ Ut).block(), Id.block(), w1, 2), tol, prm))
    w1v = S.window(1, exclude_vacuum=True)
    out.append(CheckReport.numeric(suite, "U^T (U^T)^* = 1 (j > 0)", "unitarity of the transposed U",
                                   _blk((Ut @ Ut_star).block(), Id.block(), w1v, 2), tol, prm))
    return out


# --------------------------------------------------------------------------
# tensor operators
# --------------------------------------------------------------------------

LAMBDA = np.array([[0.5, 0, 0, 0], [0, -0.5, 1, 0], [0, 1, -0.5, 0], [0, 0, 0, 0.5]])


def tensor_ops_checks(qp: AnyPoint, ncap: int = 10, tol: float = 1e-10,
                      suite: str = "tensor-ops") -> List[CheckReport]:
    S = FockSpace(qp, ncap)
    prm = _params(qp, ncap)
    g = build_uqsl2(S)
    U = build_U(S, Exact63())
    Us = {1: U[0, 0], 2: U[0, 1], 3: U[1, 0], 4: U[1, 1]}
    w1, w2 = S.window(1), S.window(2)
    out: List[CheckReport] = []
    lp, lm, l3, ql3 = g["lp"], g["lm"], g["l3"], g["ql3"]
    weights = {1: -0.5, 2: -0.5, 3: 0.5, 4: 0.5}
    partner = {1: 3, 2: 4}
    if qp.classical:
        comm = lambda A, B: A @ B - B @ A
        table = [("l+", lp, 1, Us[3]), ("l+", lp, 2, Us[4]), ("l+", lp, 3, None),
                 ("l+", lp, 4, None), ("l-", lm, 1, None), ("l-", lm, 2, None),
                 ("l-", lm, 3, Us[1]), ("l-", lm, 4, Us[2])]
        for nm, X, i, rhs in table:
            lhs = comm(X, Us[i])
            if rhs is None:
                res = _abs_on(lhs, w1)
            else:
                res = rel_residual(lhs, rhs, w1)
            out.append(CheckReport.numeric(suite, f"[{nm}, U{i}]", "classical tensor operators",
                                           res, _tight(tol), prm))
        for i in range(1, 5):
            out.append(CheckReport.numeric(suite, f"[l3, U{i}] = {weights[i]:+g} U{i}",
                                           "classical tensor operators",
                                           rel_residual(comm(l3, Us[i]), weights[i] * Us[i], w1),
                                           _tight(tol), prm))
        out.append(we3_check(S, U, tol, suite))
    q = qp.power(1)
    for i in range(1, 5):
        out.append(CheckReport.numeric(suite, f"[l3, U{i}] = m U{i}", "q-tensor operators",
                                       rel_residual(l3 @ Us[i] - Us[i] @ l3, weights[i] * Us[i], w1),
                                       tol, prm))
    for lo, hi in partner.items():
        # raising: l+ T_{-1/2} q^l3 - q^(l3-1) T_{-1/2} l+ = T_{1/2}
        X = Us[lo]
        lhs = lp @ X @ ql3 - (ql3 / q) @ X @ lp
        out.append(CheckReport.numeric(suite, f"raise U{lo} -> U{hi}", "q-tensor operators",
                                       rel_residual(lhs, Us[hi], w1), tol, prm))
        Y = Us[hi]
        lhs = lm @ Y @ ql3 - (q * ql3) @ Y @ lm
        out.append(CheckReport.numeric(suite, f"lower U{hi} -> U{lo}", "q-tensor operators",
                                       rel_residual(lhs, Us[lo], w1), tol, prm))
        kill_p = lp @ Y @ ql3 - (ql3 / q) @ Y @ lp
        kill_m = lm @ X @ ql3 - (q * ql3) @ X @ lm
        out.append(CheckReport.numeric(suite, f"raise U{hi} -> 0", "q-tensor operators",
                                       _abs_on(kill_p, w1), _tight(tol), prm))
        out.append(CheckReport.numeric(suite, f"lower U{lo} -> 0", "q-tensor operators",
                                       _abs_on(kill_m, w1), _tight(tol), prm))
    L2 = slot(build_L_gauged(S), 2)
    U1 = slot(U, 1)
    I = lambda R: aux_const(S.dim, R)
    out.append(CheckReport.numeric(suite, "R- U1 L2 = L2 R+ U1", "R-matrix form of tensor operators",
                                   _blk(I(build_R_const(qp, -1)) @ U1 @ L2,
                                        L2 @ I(build_R_const(qp, +1)) @ U1, w2, 4), tol, prm))
    return out


def we3_check(S: FockSpace, U0: OpMatrix2, tol: float, suite: str) -> CheckReport:
    """Classical ``[U0_1, L0_2 / 2] = Lambda U0_1``.

    ``L0`` is the limit operator in the gauge produced by ``U0``.  With the
    normalization ``L = 1 + gamma L0`` the commutator is twice ``Lambda U0_1``,
    so ``Lambda`` pairs with ``L0 / 2 = [[1+l3, -l-], [-l+, 1-l3]]``.
    """
    L0 = _classical_L0(S).gauge_sigma_z().scale(0.5)
    U1 = slot(U0, 1)
    L2 = slot(L0, 2)
    lam = aux_const(S.dim, LAMBDA)
    res = _blk(U1 @ L2 - L2 @ U1, lam @ U1, S.window(2), 4)
    return CheckReport.numeric(suite, "[U0_1, L0_2/2] = Lambda U0_1", "classical tensor-operator matrix form",
                               res, _tight(tol), _params(S.qp, S.ncap))


# --------------------------------------------------------------------------
# diagonalization of B
# --------------------------------------------------------------------------


def diag_b_checks(qp: AnyPoint, ncap: int = 10, tol: float = 1e-10,
                  suite: str = "diag-b", threshold: float = 1e-3) -> List[CheckReport]:
    """Lower-triangular diagonalization of the Borel matrix and the choice of
    the shift power ``delta`` in the diagonalizing family.

    Not applicable at the classical point (returns no checks).
    """
    if qp.classical:
        # b = 1 makes f(b) singular everywhere and sigma trivial
        return []
    lat = ExtendedLattice(qp, ncap)
    ff = build_free_field(FreeFieldParams())
    E = lambda x: wm_eval_extended(x, lat)
    a, b, c, d = E(ff.a), E(ff.b), E(ff.c), E(ff.d)
    a_inv, b_inv = E(ff.a.inverse()), E(ff.b.inverse())
    h, h_inv = E(ff.half_shift), E(ff.half_shift.inverse())
    bval = lat.qp.power(lat.p_values)
    with np.errstate(divide="ignore", invalid="ignore"):
        fvals = 1.0 / (bval - lat.qp.power(1.0) / bval)
    singular = ~np.isfinite(fvals) | (np.abs(bval * bval - lat.qp.power(1.0)) < 1e-14)
    fvals = np.where(singular, np.nan, fvals)
    f = lat.diag(np.nan_to_num(fvals))
    prm = _params(qp, ncap, lslack=lat.lslack)
    out: List[CheckReport] = []
    I = lat.identity()
    Z = 0 * I
    sq = lat.qp.power(0.5)
    Bt = OpMatrix2([[sq * b, Z], [sq * d, sq * b_inv]])
    Bt0 = OpMatrix2([[sq * b, Z], [Z, sq * b_inv]])
    v3 = d @ f
    V = OpMatrix2([[I, Z], [v3, I]])
    V_inv = OpMatrix2([[I, Z], [-v3, I]])
    cols = lat.polynomial_window(2)
    out.append(CheckReport.numeric(suite, "B-tilde V = V B-tilde0", "diagonalizing matrix V",
                                   _blk((Bt @ V).block(), (V @ Bt0).block(), cols, 2), tol, prm))
    out.append(CheckReport.numeric(suite, "B-tilde = V B-tilde0 V^-1", "diagonalizing matrix V",
                                   _blk((V @ Bt0 @ V_inv).block(), Bt.block(), cols, 2), tol, prm))
    # U-hat_delta = A V Q^delta with v1 = b - q b^-1 so that v1 f = 1
    v1 = b - lat.qp.power(1.0) * b_inv
    B0 = OpMatrix2([[b, Z], [Z, b_inv]])
    B01 = slot(B0, 1)
    sigma = aux_const(lat.dim, SIGMA_DIAG(lat.qp))
    powers = {Fraction(-1, 2): (h_inv, h), Fraction(0): (I, I), Fraction(1, 2): (h, h_inv)}
    for delta, (hp, hm) in powers.items():
        Ud = OpMatrix2([[(a @ v1 + c @ d) @ hp, c @ hm], [a_inv @ d @ hp, a_inv @ hm]])
        U2 = slot(Ud, 2)
        res = _blk(B01 @ U2, U2 @ B01 @ sigma, cols, 4)
        ok = delta == Fraction(-1, 2)
        out.append(CheckReport.numeric(suite, f"B0_1 U2 = U2 B0_1 sigma, delta={delta}",
                                       "choice of delta", res, tol, dict(prm, delta=str(delta)),
                                       expect_fail=not ok, threshold=threshold))
    return out


# --------------------------------------------------------------------------
# q-oscillators
# --------------------------------------------------------------------------


def _osc_grid(qp: AnyPoint):
    h = Fraction(1, 2)
    q = qp.power(1)
    pinned = []
    for al in (Fraction(0), Fraction(1, 4), Fraction(-1, 4), h):
        for b0 in (1.0, qp.power(0.25)):
            pinned.append(OscillatorParams(alpha=al, beta=-h - al, alpha0=q * qp.power(-0.5),
                                           beta0=b0, gamma0=qp.power(-0.5), delta0=b0))
    return pinned


def qoscillator_checks(qp: AnyPoint, ncap: int = 10, tol: float = 1e-10,
                       suite: str = "q-oscillator") -> List[CheckReport]:
    S = FockSpace(qp, ncap)
    prm = _params(qp, ncap)
    ops = elementary_ops(S)
    out: List[CheckReport] = []
    w1, w2 = S.window(1), S.window(2)
    q = qp.power(1)
    for i in (1, 2):
        a, ap, N = ops[f"qd{i}"], ops[f"z{i}"], ops[f"N{i}"]
        N_inv = S.diag(1.0 / N.diagonal())
        out.append(CheckReport.numeric(suite, f"a a+ - q a+ a = N^-1 (pair {i})", "deformed Heisenberg algebra",
                                       rel_residual(a @ ap - q * (ap @ a), N_inv, w1), tol, prm))
        out.append(CheckReport.numeric(suite, f"N a = q^-1 a N (pair {i})", "deformed Heisenberg algebra",
                                       rel_residual(N @ a, (a @ N) / q, w1), tol, prm))
        out.append(CheckReport.numeric(suite, f"N a+ = q a+ N (pair {i})", "deformed Heisenberg algebra",
                                       rel_residual(N @ ap, q * (ap @ N), w1), tol, prm))
    C = casimir(S)
    N12 = ops["N1"] @ ops["N2"]
    out.append(CheckReport.numeric(suite, "C = q N1 N2 + q^-1 N1^-1 N2^-1", "Casimir in oscillators",
                                   rel_residual(C, q * N12 + S.diag(1.0 / N12.diagonal()) / q, w1),
                                   _tight(tol), prm))
    D = build_D(S)
    L_gauged = build_L_gauged(S)
    qP = S.diag(S.qpow(p_values(S)))
    qPi = S.diag(S.qpow(-p_values(S)))
    solution = OscillatorParams(alpha=Fraction(1, 4), beta=Fraction(0), alpha0=q, beta0=1.0,
                                gamma0=1.0, delta0=1.0)
    for k, prmset in enumerate(_osc_grid(qp) + [solution]):
        Uh = oscillator_uhat(S, prmset)
        tagp = dict(prm, alpha=str(prmset.alpha), beta=str(prmset.beta))
        U1, U2, U3, U4 = Uh[0, 0], Uh[0, 1], Uh[1, 0], Uh[1, 1]
        weyl = max(rel_residual(U1 @ U3, (U3 @ U1) / q, w2),
                   rel_residual(U2 @ U4, (U4 @ U2) / q, w2),
                   rel_residual(U1 @ U2, U2 @ U1, w2),
                   rel_residual(U3 @ U4, U4 @ U3, w2))
        out.append(CheckReport.numeric(suite, f"Weyl relations, family #{k}", "oscillator family",
                                       weyl, tol, tagp))
        dmat = det_u(S, Uh)
        det = complex(dmat[w1[0], w1[0]])
        if S.dtype is float:
            det = det.real
        out.append(CheckReport.numeric(suite, f"Det scalar, family #{k}", "oscillator family",
                                       rel_residual(dmat, det * S.identity(), w1), tol, tagp))
        homog = max(rel_residual(U1 @ U4 - (U4 @ U1) / q, (det / q) * qP, w1),
                    rel_residual(U3 @ U2 - q * (U2 @ U3), -det * qPi, w1))
        out.append(CheckReport.numeric(suite, f"homogeneous relations, family #{k}",
                                       "oscillator family", homog, tol, tagp))
        if prmset is solution:
            continue
        res = _blk((Uh @ D @ uhat_inverse(S, Uh, det)).block(), L_gauged.block(), w2, 2)
        out.append(CheckReport.numeric(suite, f"U-hat D U-hat^-1 = L, pinned #{k}",
                                       "restrictions from the L condition", res, tol, tagp))
    if qp.classical:
        return out
    # outside the pin the L condition fails
    Uh = oscillator_uhat(S, solution)
    det = complex(det_u(S, Uh)[w1[0], w1[0]])
    res = _blk((Uh @ D @ uhat_inverse(S, Uh, det)).block(), L_gauged.block(), w2, 2)
    out.append(CheckReport.numeric(suite, "U-hat D U-hat^-1 != L off the pin",
                                   "restrictions from the L condition", res, tol,
                                   dict(prm, alpha="1/4", beta="0"), expect_fail=True,
                                   threshold=1e-3))
    return out


def truncation_independence(run: Callable[[AnyPoint, int, float], List[CheckReport]],
                            qp: AnyPoint, ncap: int = 10, bump: int = 2, tol: float = 1e-10,
                            limit: float = 1e-12, suite: str = "truncation") -> CheckReport:
    """Largest change of any passing identity residual between ``ncap`` and
    ``ncap + bump``.  Negative controls are skipped: their residuals measure a
    failure, not an identity."""
    lo = run(qp, ncap, tol)
    hi = run(qp, ncap + bump, tol)
    worst = 0.0
    for r1, r2 in zip(lo, hi):
        if r1.name != r2.name or r1.expect_fail:
            continue
        if isinstance(r1.residual, str) or isinstance(r2.residual, str):
            if r1.residual != r2.residual:
                worst = max(worst, 1.0)
            continue
        worst = max(worst, abs(r1.residual - r2.residual))
    return CheckReport.numeric(suite, f"ncap {ncap} -> {ncap + bump}", "truncation independence",
                               worst, limit, {"q": qp.label(), "ncap": ncap})
