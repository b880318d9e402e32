"""Registry of named verification suites.

Every suite is a callable ``run(qp, ncap, tol) -> list[CheckReport]``.  Suites
whose identities live in the exact monomial algebra ignore ``qp`` and
``ncap``; they are flagged ``point_free`` so the command line runs them once
instead of once per grid point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

import numpy as np

from . import cgc, dyn_ybe
from .fock import checks as fock_checks
from .qarith import (AnyPoint, ClassicalPoint, LaurentU, check_q_identity, laurent_eval,
                     make_qpoint, q_factorial, q_number)
from .report import CheckReport
from .weylalg import (FreeFieldParams, WeylElement, build_free_field, build_L_freefield,
                      build_L_reference, build_Uhat_monomial, kappa, uhat_closed_form,
                      uhat_det, uhat_from_free_field, uhat_relation_diffs,
                      verify_borel_relations, verify_L_central_elements, verify_L_equality,
                      verify_Uhat_relations)

Runner = Callable[[AnyPoint, int, float], List[CheckReport]]

F = Fraction


@dataclass(frozen=True)
class SuiteSpec:
    name: str
    modules: Tuple[str, ...]
    run: Runner
    point_free: bool = False
    classical: bool = True  # whether the q = 1 point is part of the default grid
    slack: int = 2
    description: str = ""


# --------------------------------------------------------------------------
# scalar identities
# --------------------------------------------------------------------------

_ADDITION_GRID = [(1, 1), (2, 3), (0, 5), (F(1, 2), F(3, 2)), (F(-1, 4), F(5, 8)),
                  (F(7, 2), -2), (F(3, 8), F(3, 8)), (-3, F(1, 2))]


def _qarith_suite(qp: AnyPoint, ncap: int, tol: float) -> List[CheckReport]:
    suite = "qarith-identities"
    params = {"q": qp.label()}
    out = [check_q_identity(a, b, qp, tol=min(tol, 1e-12)) for a, b in _ADDITION_GRID]
    xs = [F(k, 8) for k in range(-24, 25, 3)]
    anti = max(abs(q_number(x, qp) + q_number(-x, qp)) for x in xs)
    out.append(CheckReport.numeric(suite, "[-x] = -[x]", "q-number antisymmetry", anti, 1e-13,
                                   params))
    conj = qp.conjugate()
    dev = max(abs(complex(q_number(x, conj)) - complex(q_number(x, qp)).conjugate()) for x in xs)
    out.append(CheckReport.numeric(suite, "[x] at conj(q) = conj([x])", "q-number conjugation",
                                   dev, 1e-13, params))
    fac = [q_factorial(n, qp) for n in range(0, 12)]
    rec = max(abs(fac[n] - fac[n - 1] * q_number(n, qp)) / abs(fac[n]) for n in range(1, 12))
    out.append(CheckReport.numeric(suite, "[n]! = [n][n-1]!", "q-factorial", rec, 1e-13, params))
    out.append(CheckReport.numeric(suite, "[0]! = 1", "q-factorial", abs(fac[0] - 1), 0.0, params))
    out.append(CheckReport.numeric(suite, "[2]! = q + 1/q", "q-factorial",
                                   abs(fac[2] - (qp.power(1) + qp.power(-1))), 1e-14, params))
    out.append(_laurent_homomorphism(qp, suite, params))
    return out


def _laurent_homomorphism(qp: AnyPoint, suite: str, params, trials: int = 30) -> CheckReport:
    """Random differential test of ``eval(x*y) = eval(x) eval(y)`` and the
    same for sums; the seed is fixed so the report is reproducible."""
    rng = np.random.default_rng(20240611)
    worst = 0.0
    for _ in range(trials):
        x, y = (LaurentU({int(k): F(int(c), int(rng.integers(1, 5)))
                          for k, c in zip(rng.integers(-20, 21, 4), rng.integers(-5, 6, 4))})
                for _ in range(2))
        ex, ey = laurent_eval(x, qp), laurent_eval(y, qp)
        scale = max(1.0, abs(ex * ey))
        worst = max(worst, abs(laurent_eval(x * y, qp) - ex * ey) / scale,
                    abs(laurent_eval(x + y, qp) - (ex + ey)) / max(1.0, abs(ex) + abs(ey)))
    return CheckReport.numeric(suite, "evaluation is a ring homomorphism", "exact coefficient ring",
                               worst, 1e-12, params)


# --------------------------------------------------------------------------
# exact suites
# --------------------------------------------------------------------------

_GAMMAS = [F(-1), F(-1, 2), F(0), F(1, 2), F(1), F(2)]
_SPLITS = [(F(-1, 8), F(0)), (F(0), F(-1, 8)), (F(1, 4), F(-3, 8))]


def _weyl_borel_suite(qp, ncap, tol) -> List[CheckReport]:
    ff = build_free_field()
    out = verify_borel_relations(ff)
    out += verify_L_equality(ff)
    out += verify_L_central_elements(build_L_freefield(ff), ff.b, label="free field")
    out += verify_L_central_elements(build_L_reference(), ff.b, label="standard")
    # the Borel relations hold off the pin as well
    for lam1, nu2 in ((F(0), F(0)), (F(1, 4), F(1, 2)), (F(1), F(-1))):
        out += [CheckReport(r.suite, f"{r.name} (lam1={lam1}, nu2={nu2})", r.anchor, r.residual,
                            r.tol, r.passed, r.params, r.wall_time, r.expect_fail)
                for r in verify_borel_relations(build_free_field(FreeFieldParams(lam1=lam1,
                                                                                 nu2=nu2)))]
    return out


def _weyl_uhat_suite(qp, ncap, tol) -> List[CheckReport]:
    suite = "weyl-uhat"
    out: List[CheckReport] = []
    for g in _GAMMAS:
        for lam0, nu0 in _SPLITS:
            p = FreeFieldParams(lam0=lam0, nu0=nu0, gamma=g)
            prm = {"gamma": str(g), "lam0": str(lam0), "nu0": str(nu0)}
            U = build_Uhat_monomial(F(1, 2), 0, g, params=p)
            diff = U - uhat_closed_form(F(1, 2), 0, g)
            out.append(CheckReport.exact(suite, f"free field = closed form gamma={g} split={lam0}",
                                         "U-hat construction", diff.term_count(), prm))
            for r in verify_Uhat_relations(U, build_free_field(p).b, suite, prm):
                r.name = f"{r.name} gamma={g} split={lam0}"
                out.append(r)
    # the determinant of the exact matrix is the scalar q^(1/2)
    ff = build_free_field()
    U = build_Uhat_monomial()
    det = uhat_det(U, ff.b) - WeylElement.q_power(F(1, 2))
    out.append(CheckReport.exact(suite, "Det = q^1/2 (unit coefficients)", "deformed determinant",
                                 len(det)))
    # exchange relations fail for a U built with a wrong half shift
    bad = uhat_from_free_field(ff, eixi=WeylElement.monomial(1, a1=F(1, 2), s1=F(3, 4), s2=F(1)))
    out += verify_Uhat_relations(bad, ff.b, suite, {"control": "wrong half shift"},
                                 expect_fail=True)
    return out


def _appendix_c_suite(qp, ncap, tol) -> List[CheckReport]:
    """The conditions under which the free-field U-hat satisfies the
    homogeneous exchange identity, and the identity itself.

    The conditions on the shift exponents are checked as preconditions; the
    column factors are fixed to ``w = 1/omega`` and ``v = 1``.  Each
    condition is then broken in turn and the identity must stop holding.
    """
    suite = "appendix-c"
    ff = build_free_field()
    e = ff.eixi
    al, be, ga = kappa(ff.a, e), kappa(ff.c, e), kappa(ff.d0, e)
    out = [
        CheckReport.exact(suite, "alpha+beta=0", "conditions on the shift",
                          0 if al + be == 0 else 1),
        CheckReport.exact(suite, "gamma+beta-alpha+1=0", "conditions on the shift",
                          0 if ga + be - al + 1 == 0 else 1),
    ]
    U = uhat_from_free_field(ff)
    diffs = uhat_relation_diffs(U, ff.b)
    for key in ("C2", "C2 partner", "qXb^-1+Yb=0"):
        out.append(CheckReport.exact(suite, key, "homogeneous exchange identity",
                                     len(diffs[key])))
    omega_inv = LaurentU({0: 1}, omega_den=1)
    controls = {
        "v=b": uhat_from_free_field(ff, v=ff.b),
        "w=b/omega": uhat_from_free_field(ff, w=ff.b.scale(omega_inv)),
        "half shift off the conditions": uhat_from_free_field(
            ff, eixi=WeylElement.monomial(1, a1=F(1, 2), s1=F(3, 4), s2=F(1))),
    }
    for label, Ubad in controls.items():
        d = uhat_relation_diffs(Ubad, ff.b)
        out.append(CheckReport.exact(suite, f"C2 violated: {label}", "negative control",
                                     len(d["C2"]) + len(d["C2 partner"]), {"control": label},
                                     expect_fail=True))
    return out


# --------------------------------------------------------------------------
# numeric suites
# --------------------------------------------------------------------------


def _tensor_ops(qp, ncap, tol):
    return fock_checks.tensor_ops_checks(qp, ncap, tol)


def _classical_limit(qp, ncap, tol):
    return fock_checks.classical_limit_checks(None, ncap, tol)


def _cgc(qp, ncap, tol):
    return cgc.cgc_checks(qp, jmax=5, tol=tol)


def _dybe(qp, ncap, tol):
    out = dyn_ybe.dybe_checks(qp, (4, 24), tol)
    if not qp.classical and qp.mode == "real":
        name = "R(n) -> R+ at n=40" if abs(qp.q) > 1 else "R(n) -> P R+ P at n=40"
        out.append(CheckReport.numeric("dybe", name, "large-weight limit",
                                       dyn_ybe.large_p_deviation(qp, 40), 1e-8,
                                       {"q": qp.label()}))
    return out


SUITES: Dict[str, SuiteSpec] = {s.name: s for s in [
    SuiteSpec("qarith-identities", ("qarith",), _qarith_suite,
              description="q-number addition, symmetry, factorials, exact ring evaluation"),
    SuiteSpec("weyl-borel", ("qarith", "weylalg"), _weyl_borel_suite, point_free=True,
              description="Borel-bundle exchange relations, free-field L, central elements"),
    SuiteSpec("weyl-uhat", ("qarith", "weylalg"), _weyl_uhat_suite, point_free=True,
              description="U-hat exchange algebra over the gamma grid, exact determinant"),
    SuiteSpec("appendix-c", ("qarith", "weylalg"), _appendix_c_suite, point_free=True,
              description="conditions for the homogeneous exchange identity and controls"),
    SuiteSpec("l-algebra", ("qarith", "fock"), fock_checks.l_algebra_checks,
              description="U_q(sl2) relations, Casimir spectrum, RLL, central elements"),
    SuiteSpec("theorem1", ("qarith", "fock", "dyn_ybe"), fock_checks.theorem1_checks,
              description="exchange relations of U with D and R, U D U^-1 = L, Det U"),
    SuiteSpec("classical-limit", ("qarith", "fock"), _classical_limit, point_free=True,
              description="first-order expansion of L near q = 1, Borel decomposition of L0"),
    SuiteSpec("cgc-correspondence", ("qarith", "fock", "cgc"), _cgc, slack=1,
              description="U matrix elements against the q-CGC summation formula"),
    SuiteSpec("unitarity", ("qarith", "weylalg", "fock"), fock_checks.unitarity_checks,
              description="adjoint of z and unitarity of U^T for real q"),
    SuiteSpec("tensor-ops", ("qarith", "fock"), _tensor_ops,
              description="tensor-operator covariance of U and its matrix form"),
    SuiteSpec("diag-b", ("qarith", "weylalg", "fock"), fock_checks.diag_b_checks,
              classical=False, description="diagonalization of the Borel matrix, choice of delta"),
    SuiteSpec("q-oscillator", ("qarith", "weylalg", "fock"), fock_checks.qoscillator_checks,
              description="q-oscillator realization of U and its parameter family"),
    SuiteSpec("dybe", ("qarith", "dyn_ybe"), _dybe,
              description="dynamical Yang-Baxter equation and R-matrix identities"),
]}


class UnknownSuite(KeyError):
    pass


def get_suite(name: str) -> SuiteSpec:
    try:
        return SUITES[name]
    except KeyError:
        raise UnknownSuite(name) from None


def default_points(ncap: int, classical: bool = True) -> List[AnyPoint]:
    pts: List[AnyPoint] = [make_qpoint("real", 1.3, ncap), make_qpoint("real", 0.7, ncap),
                           make_qpoint("circle", np.pi / 40, ncap)]
    if classical:
        pts.append(ClassicalPoint(ncap))
    return pts


def run_suite(name: str, qp: AnyPoint, ncap: int = 10, tol: float = 1e-10) -> List[CheckReport]:
    spec = get_suite(name)
    return spec.run(qp, ncap, tol)
