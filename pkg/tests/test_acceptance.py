"""Acceptance gate: one test per criterion, each recording a single
PASS/FAIL line.  The lines are printed in the pytest terminal summary and
by running this file directly (``python3 tests/test_acceptance.py``)."""

import math
import time

import numpy as np
import pytest

from qmodel import cgc, dyn_ybe
from qmodel.fock import FockSpace, build_Uhat, det_u
from qmodel.fock import checks as C
from qmodel.qarith import ClassicalPoint, make_qpoint, q_number
from qmodel.suites import SUITES, run_suite

NCAP = 10
LINES = {}

Q13 = make_qpoint("real", 1.3, NCAP)
Q07 = make_qpoint("real", 0.7, NCAP)
QC = make_qpoint("circle", math.pi / 40, NCAP)
CL = ClassicalPoint(NCAP)
DEFORMED = [Q13, Q07, QC]
ALL = DEFORMED + [CL]


def record(n, ok, detail):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    LINES[n] = line
    print(line)
    assert ok, line


def _by_name(reports):
    return {r.name: r for r in reports}


def _worst(reports):
    vals = [r.residual for r in reports if not isinstance(r.residual, str)]
    return max(vals) if vals else 0.0


def test_criterion_01_exact_suites():
    t0 = time.perf_counter()
    reports = []
    for name in ("weyl-borel", "weyl-uhat", "appendix-c"):
        reports += run_suite(name, Q13)
    elapsed = time.perf_counter() - t0
    identities = [r for r in reports if not r.expect_fail]
    controls = [r for r in reports if r.expect_fail]
    exact = all(r.residual == "exact-zero" for r in identities)
    controls_fail = bool(controls) and all(r.passed and r.residual != "exact-zero"
                                           for r in controls)
    has_c1_controls = any(r.suite == "appendix-c" for r in controls)
    ok = exact and controls_fail and has_c1_controls and elapsed < 10
    record(1, ok, f"{len(identities)} identities exact-zero={exact}, {len(controls)} negative "
                  f"controls violated={controls_fail}, {elapsed:.2f}s")


def test_criterion_02_generating_matrix():
    names = ["D1 U2 = U2 D1 sigma", "D2 U1 = U1 D2 sigma", "R+ U1 U2 = U2 U1 R+(p)",
             "R- U1 U2 = U2 U1 R-(p)", "R-(p) = D1^-1 R+(p) sigma D1", "U D U^-1 = L"]
    worst, slowest, ok = 0.0, 0.0, True
    for qp in DEFORMED:
        t0 = time.perf_counter()
        reports = _by_name(C.theorem1_checks(qp, NCAP))
        slowest = max(slowest, time.perf_counter() - t0)
        for n in names:
            r = reports[n]
            ok &= r.passed and r.residual <= 1e-10
            worst = max(worst, r.residual)
    ok &= slowest < 60
    record(2, ok, f"max relative residual {worst:.2e} (<= 1e-10), slowest point {slowest:.2f}s")


def test_criterion_03_cgc():
    devs = [cgc.correspondence_deviation(qp, 5)[0] for qp in DEFORMED]
    dev_cl = cgc.correspondence_deviation(CL, 5)[0]
    qy = cgc.CgcQuery.make("1/2", "1/2", "-1/2", 0)
    spot_cl = abs(cgc.cgc_q(qy, CL) - 1 / math.sqrt(2))
    spot_q = max(abs(cgc.cgc_q(qy, qp) - qp.power(0.5) / np.sqrt(q_number(2, qp)))
                 for qp in DEFORMED)
    ok = max(devs) <= 1e-10 and dev_cl <= 1e-12 and spot_cl <= 1e-12 and spot_q <= 1e-12
    record(3, ok, f"deformed max dev {max(devs):.2e}, classical {dev_cl:.2e}, "
                  f"spot values {spot_cl:.1e}/{spot_q:.1e}")


def test_criterion_04_det():
    worst = 0.0
    for qp in ALL:
        S = FockSpace(qp, NCAP)
        D = det_u(S, build_Uhat(S))
        w = S.window(1)
        block = D[w][:, w].toarray()
        worst = max(worst, float(np.max(np.abs(block - qp.power(0.5) * np.eye(len(w))))))
    record(4, worst <= 1e-12, f"max |Det U - q^(1/2) I| on window {worst:.2e} (<= 1e-12)")


def test_criterion_05_rll():
    rll = k2 = cas = 0.0
    ok = True
    for qp in ALL:
        rs = _by_name(C.l_algebra_checks(qp, NCAP))
        rll = max(rll, rs["RLL exchange relation"].residual)
        k2 = max(k2, rs["K2 = q^3"].residual)
        cas = max(cas, rs["Casimir eigenvalue per spin block"].residual)
    ok = rll <= 1e-10 and k2 <= 1e-12 and cas <= 1e-12
    record(5, ok, f"RLL {rll:.2e}, K2 {k2:.2e}, Casimir {cas:.2e}")


def test_criterion_06_dybe():
    worst = max(dyn_ybe.dybe_residual(dyn_ybe.PLattice(qp, 2, 27), (4, 24)) for qp in ALL)
    limit = dyn_ybe.large_p_deviation(Q13, 40, against=dyn_ybe.build_R_const(Q13, +1))
    pts = np.arange(2.0, 28.0)
    rot = float(np.max(np.abs(dyn_ybe.r_dyn_values(pts, CL) - dyn_ybe.classical_r(pts))))
    ok = worst <= 1e-10 and limit <= 1e-8 and rot <= 1e-12
    record(6, ok, f"dYBE {worst:.2e}, |R(40) - R+| {limit:.2e}, classical form {rot:.1e}")


def test_criterion_07_classical_limit():
    rs = C.classical_limit_checks(None, NCAP)
    ratios = [r for r in rs if r.name.startswith("halving ratio")]
    borel = _by_name(rs)["L0 = A0 B0 A0^-1"]
    ok = len(ratios) == 2 and all(r.residual <= 0.2 for r in ratios) and borel.residual <= 1e-12
    record(7, ok, f"|ratio - 2| = {', '.join(f'{r.residual:.3f}' for r in ratios)}, "
                  f"Borel decomposition {borel.residual:.1e}")


def test_criterion_08_unitarity():
    worst = 0.0
    for qp in (Q13, Q07, CL):
        worst = max(worst, _by_name(C.unitarity_checks(qp, NCAP))["(U^T)^* U^T = 1"].residual)
    record(8, worst <= 1e-10, f"max |(U^T)^* U^T - 1| {worst:.2e} at q = 1.3, 0.7, 1")


def test_criterion_09_tensor_operators():
    cl = C.tensor_ops_checks(CL, NCAP)
    we20 = _worst([r for r in cl if r.name.startswith("[l")][:12])
    we3 = _by_name(cl)["[U0_1, L0_2/2] = Lambda U0_1"].residual
    we1 = we10 = 0.0
    for qp in ALL:
        rs = C.tensor_ops_checks(qp, NCAP)
        we1 = max(we1, _worst([r for r in rs if r.name.startswith(("raise", "lower"))]))
        we10 = max(we10, _by_name(rs)["R- U1 L2 = L2 R+ U1"].residual)
    ok = we20 <= 1e-12 and we3 <= 1e-12 and we1 <= 1e-10 and we10 <= 1e-10
    record(9, ok, f"classical commutators {we20:.1e}, deformed {we1:.1e}, matrix form "
                  f"{we10:.1e}, classical matrix relation {we3:.1e}")


def test_criterion_10_truncation():
    worst, count = 0.0, 0
    for name, spec in SUITES.items():
        if spec.point_free:
            continue
        pts = ALL if spec.classical else DEFORMED
        for qp in pts:
            r = C.truncation_independence(spec.run, qp, NCAP, 2, limit=1e-12)
            worst = max(worst, r.residual)
            count += 1
    record(10, worst <= 1e-12, f"max residual change ncap 10 -> 12 over {count} suite/point "
                               f"pairs: {worst:.2e}")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion"):
            try:
                fn()
            except AssertionError:
                pass
