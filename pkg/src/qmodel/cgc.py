"""Clebsch-Gordan coefficients for ``V_j (x) V_1/2`` from the Van der Waerden
sums (classical and q-deformed), and their correspondence with matrix
elements of the generating matrix U."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .qarith import AnyPoint, ClassicalPoint, HalfInt, q_factorial, q_number
from .report import CheckReport

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class CgcQuery:
    """``{j 1/2 j_out; m m_prime m_out}`` with ``m_out = m + m_prime``."""

    j: Fraction
    m: Fraction
    m_prime: Fraction
    j_out: Fraction

    @classmethod
    def make(cls, j, m, m_prime, j_out) -> "CgcQuery":
        vals = [HalfInt.parse(x).value for x in (j, m, m_prime, j_out)]
        qy = cls(*vals)
        qy.validate()
        return qy

    @property
    def m_out(self) -> Fraction:
        return self.m + self.m_prime

    def validate(self) -> None:
        j, m = self.j, self.m
        if j < 0 or abs(m) > j or (j - m).denominator != 1:
            raise ValueError(f"invalid weight |{j},{m}>")
        if self.m_prime not in (HALF, -HALF):
            raise ValueError("m_prime must be +1/2 or -1/2")
        if self.j_out not in (j - HALF, j + HALF) or self.j_out < 0:
            raise ValueError(f"j_out must be j -+ 1/2, got {self.j_out}")

    def in_range(self) -> bool:
        return abs(self.m_out) <= self.j_out


def _int(x: Fraction) -> int:
    if x.denominator != 1:
        raise ValueError(f"non-integer factorial argument {x}")
    return int(x)


def _terms(qy: CgcQuery):
    """Integer arguments of the r-sum, or None for the empty/zero cases."""
    j, m, mp, jo = qy.j, qy.m, qy.m_prime, qy.j_out
    mo = qy.m_out
    pre = [j + HALF - jo, j + jo - HALF, jo + HALF - j]
    top = j + jo + Fraction(3, 2)
    num = [j + m, j - m, jo + mo, jo - mo]
    den = lambda r: [r, j + HALF - jo - r, j - m - r, HALF + mp - r, jo - HALF + m + r,
                     jo - j - mp + r]
    return [_int(x) for x in pre], _int(top), [_int(x) for x in num], den


def cgc_classical(qy: CgcQuery) -> float:
    """Classical Van der Waerden sum for spin 1/2 coupling."""
    qy.validate()
    if not qy.in_range():
        return 0.0
    pre, top, num, den = _terms(qy)
    f = math.factorial
    prefactor = math.sqrt(f(pre[0]) * f(pre[1]) * f(pre[2]) / f(top))
    root = math.sqrt(math.prod(f(x) for x in num) * (2 * qy.j_out + 1))
    total = 0.0
    r = 0
    while True:
        args = [_int(x) for x in den(r)]
        if args[1] < 0 or args[2] < 0 or args[3] < 0:
            break
        if min(args) >= 0:
            total += (-1) ** r * root / math.prod(f(x) for x in args)
        r += 1
    return prefactor * total


def cgc_q(qy: CgcQuery, qp: AnyPoint):
    """q-deformed Van der Waerden sum; equals :func:`cgc_classical` at the
    classical point."""
    qy.validate()
    if qp.classical:
        return cgc_classical(qy)
    if not qy.in_range():
        return 0.0
    j, m, mp, jo = qy.j, qy.m, qy.m_prime, qy.j_out
    pre, top, num, den = _terms(qy)
    qf = lambda n: q_factorial(n, qp)
    prefactor = np.sqrt(qf(pre[0]) * qf(pre[1]) * qf(pre[2]) / qf(top) + 0j)
    expo = HALF * (j + HALF - jo) * (j + jo + Fraction(3, 2)) + j * mp - m / 2
    prefactor = prefactor * qp.power(float(expo))
    root = np.sqrt(math.prod(qf(x) for x in num) * q_number(2 * jo + 1, qp) + 0j)
    total = 0.0
    shift = float(j + jo + Fraction(3, 2))
    r = 0
    while True:
        args = [_int(x) for x in den(r)]
        if args[1] < 0 or args[2] < 0 or args[3] < 0:
            break
        if min(args) >= 0:
            total = total + (-1) ** r * qp.power(-r * shift) * root / math.prod(qf(x) for x in args)
        r += 1
    val = complex(prefactor * total)
    if qp.mode == "real":
        return val.real
    return val


# --------------------------------------------------------------------------
# matrix elements of U
# --------------------------------------------------------------------------

# (m_prime, j_out - j) selected by each U_i
ENTRY_QUERY = {1: (-HALF, -HALF), 2: (-HALF, HALF), 3: (HALF, -HALF), 4: (HALF, HALF)}


def prefactor(i: int, j: Fraction, qp: AnyPoint, variant=None) -> complex:
    """``<j'',m''|U_i|j,m> / CGC`` for the family variants.

    The exact matrix and the classical point give 1.  A family member with
    column constants ``q**a``, ``q**b`` and exponent ``gamma`` gives
    ``q**(a - 1/2 + (2 - gamma) j)`` for ``i = 1, 3`` and
    ``q**(b + (gamma - 2) j)`` for ``i = 2, 4``.
    """
    from .fock.models import Exact63

    if qp.classical or variant is None or isinstance(variant, Exact63):
        return 1.0
    g = variant.gamma
    if i in (1, 3):
        e = variant.alpha0_exp - HALF + (2 - g) * j
    else:
        e = variant.beta0_exp + (g - 2) * j
    return qp.power(float(e))


def correspondence_deviation(qp: AnyPoint, jmax=5, variant=None) -> Tuple[float, int]:
    """Largest ``|<U_i> - prefactor * CGC|`` over all ``|j,m>`` with ``j <= jmax``.

    Returns the deviation and the number of compared entries.
    """
    from .fock.models import Exact63, build_U, matrix_elements_U
    from .fock.space import FockSpace

    variant = Exact63() if variant is None else variant
    jmax = HalfInt.parse(jmax).value
    ncap = int(2 * jmax) + 1
    S = FockSpace(qp, ncap)
    U = build_U(S, variant)
    worst, count = 0.0, 0
    for tj in range(0, int(2 * jmax) + 1):
        j = Fraction(tj, 2)
        for tm in range(-tj, tj + 1, 2):
            m = Fraction(tm, 2)
            for i, (mp, dj) in ENTRY_QUERY.items():
                jo = j + dj
                elem = matrix_elements_U(U, S, j, m, i, slack=1)
                if jo < 0:
                    expected = 0.0
                else:
                    qy = CgcQuery(j, m, mp, jo)
                    expected = prefactor(i, j, qp, variant) * cgc_q(qy, qp)
                worst = max(worst, abs(elem - expected))
                count += 1
    return float(worst), count


def verify_correspondence(qp: AnyPoint, jmax=5, variant=None, tol: Optional[float] = None,
                          suite: str = "cgc-correspondence") -> CheckReport:
    tol = (1e-12 if qp.classical else 1e-10) if tol is None else tol
    dev, n = correspondence_deviation(qp, jmax, variant)
    name = getattr(variant, "name", "exact63")
    return CheckReport.numeric(suite, f"U matrix elements = CGC ({name})", "generating matrix for CGC",
                               dev, tol, {"q": qp.label(), "jmax": str(jmax), "variant": name,
                                          "entries": n})


def orthogonality_deviation(j, qp: AnyPoint) -> float:
    """``max |sum_{m+m'=m''} C(j'') C(j''') - delta|`` over ``j'', j''' in {j-1/2, j+1/2}``."""
    j = HalfInt.parse(j).value
    outs = [jo for jo in (j - HALF, j + HALF) if jo >= 0]
    worst = 0.0
    for tmo in range(-int(2 * j) - 1, int(2 * j) + 2, 2):
        mo = Fraction(tmo, 2)
        pairs = [(mo - mp, mp) for mp in (-HALF, HALF) if abs(mo - mp) <= j]
        for a in outs:
            for b in outs:
                if abs(mo) > a or abs(mo) > b:
                    continue
                s = sum(cgc_q(CgcQuery(j, m, mp, a), qp) * cgc_q(CgcQuery(j, m, mp, b), qp)
                        for m, mp in pairs)
                worst = max(worst, abs(s - (1.0 if a == b else 0.0)))
    return float(worst)


def orthogonality_check(j, qp: AnyPoint, tol: float = 1e-10,
                        suite: str = "cgc-correspondence") -> CheckReport:
    if not qp.classical and qp.mode != "real":
        raise ValueError("orthogonality is asserted for real q or the classical point")
    return CheckReport.numeric(suite, f"orthogonality j={HalfInt.parse(j)}", "CGC orthogonality",
                               orthogonality_deviation(j, qp), tol, {"q": qp.label()})


def selection_rule_violations(jmax=4, qp: AnyPoint = None) -> int:
    """Count of out-of-range queries with a nonzero value."""
    qp = ClassicalPoint() if qp is None else qp
    bad = 0
    for tj in range(0, int(2 * jmax) + 1):
        j = Fraction(tj, 2)
        for tm in range(-tj, tj + 1, 2):
            for mp in (-HALF, HALF):
                for jo in (j - HALF, j + HALF):
                    if jo < 0:
                        continue
                    qy = CgcQuery(j, Fraction(tm, 2), mp, jo)
                    if not qy.in_range() and cgc_q(qy, qp) != 0:
                        bad += 1
    return bad


def continuity_deviation(jmax=4, eps: float = 1e-4) -> float:
    from .qarith import make_qpoint

    qp = make_qpoint("real", 1 + eps)
    worst = 0.0
    for tj in range(0, int(2 * jmax) + 1):
        j = Fraction(tj, 2)
        for tm in range(-tj, tj + 1, 2):
            for mp in (-HALF, HALF):
                for jo in (j - HALF, j + HALF):
                    if jo < 0:
                        continue
                    qy = CgcQuery(j, Fraction(tm, 2), mp, jo)
                    worst = max(worst, abs(cgc_q(qy, qp) - cgc_classical(qy)))
    return worst


def cgc_checks(qp: AnyPoint, jmax=5, tol: float = 1e-10,
               suite: str = "cgc-correspondence") -> List[CheckReport]:
    from .fock.models import Family

    prm = {"q": qp.label()}
    out = [verify_correspondence(qp, jmax, None, None if tol == 1e-10 else tol, suite)]
    if not qp.classical:
        for fam in (Family(0, 0, 0), Family(Fraction(1, 4), Fraction(-1, 2), 1), Family(1, 1, -1)):
            out.append(verify_correspondence(qp, min(HalfInt.parse(jmax).value, 3), fam, tol, suite))
    out.append(CheckReport.exact(suite, "selection rules j<=4", "CGC selection rules",
                                 selection_rule_violations(4, qp), prm))
    spot = cgc_q(CgcQuery(HALF, HALF, -HALF, Fraction(0)), qp)
    expect = 1 / math.sqrt(2) if qp.classical else qp.power(0.5) / np.sqrt(qp.power(1) + qp.power(-1))
    out.append(CheckReport.numeric(suite, "spot value {1/2,1/2,-1/2 -> 0}", "CGC spot value",
                                   abs(spot - expect), 1e-12, prm))
    if qp.classical or qp.mode == "real":
        for j in (0, 1, Fraction(3, 2), 2):
            out.append(orthogonality_check(j, qp, tol, suite))
    if qp.classical:
        out.append(CheckReport.numeric(suite, "q -> 1 continuity", "classical limit of q-CGC",
                                       continuity_deviation(4), 1e-3, {"eps": 1e-4}))
    return out


# --------------------------------------------------------------------------
# tables
# --------------------------------------------------------------------------

COLUMNS = ["j", "m", "m'", "j''", "m''", "re", "im"]


@dataclass
class CgcTable:
    j: Fraction
    q_label: str
    rows: List[Tuple[CgcQuery, complex]]
    cross_check: Optional[float] = None

    def records(self) -> List[list]:
        return [[str(qy.j), str(qy.m), str(qy.m_prime), str(qy.j_out), str(qy.m_out),
                 float(complex(v).real), float(complex(v).imag)] for qy, v in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for rec in self.records():
            w.writerow([*rec[:5], repr(rec[5]), repr(rec[6])])
        if self.cross_check is not None:
            buf.write(f"# cross-check max deviation: {self.cross_check:.3e}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {"j": str(self.j), "q": self.q_label, "columns": COLUMNS, "rows": self.records()}
        if self.cross_check is not None:
            doc["cross_check_max_deviation"] = self.cross_check
        return json.dumps(doc, indent=2)


def cgc_table(j, qp: AnyPoint) -> CgcTable:
    """All in-range rows for ``j_out = j -+ 1/2`` at fixed ``j``."""
    j = HalfInt.parse(j).value
    rows = []
    for jo in (j - HALF, j + HALF):
        if jo < 0:
            continue
        for tm in range(int(2 * j), -int(2 * j) - 1, -2):
            m = Fraction(tm, 2)
            for mp in (HALF, -HALF):
                qy = CgcQuery(j, m, mp, jo)
                if qy.in_range():
                    rows.append((qy, cgc_q(qy, qp)))
    return CgcTable(j, qp.label(), rows)


def _entry_index(qy: CgcQuery) -> int:
    key = (qy.m_prime, qy.j_out - qy.j)
    return next(i for i, v in ENTRY_QUERY.items() if v == key)


def cross_check_table(table: CgcTable, qp: AnyPoint) -> float:
    """Largest distance between the table values and matrix elements of the
    exact U; stores the result on the table and returns it."""
    from .fock.models import Exact63, build_U, matrix_elements_U
    from .fock.space import FockSpace

    S = FockSpace(qp, int(2 * table.j) + 2)
    U = build_U(S, Exact63())
    worst = 0.0
    for qy, val in table.rows:
        elem = matrix_elements_U(U, S, qy.j, qy.m, _entry_index(qy), slack=1)
        worst = max(worst, abs(elem - val))
    table.cross_check = float(worst)
    return table.cross_check


def u_matrix_records(qp: AnyPoint, jmax, variant=None) -> List[list]:
    """Rows ``[i, j, m, j'', m'', re, im]`` of ``<j'',m''|U_i|j,m>`` for all
    ``j <= jmax`` whose target stays in the model space."""
    from .fock.models import Exact63, build_U, matrix_elements_U
    from .fock.space import FockSpace

    variant = Exact63() if variant is None else variant
    jmax = HalfInt.parse(jmax).value
    S = FockSpace(qp, int(2 * jmax) + 1)
    U = build_U(S, variant)
    out = []
    for tj in range(0, int(2 * jmax) + 1):
        j = Fraction(tj, 2)
        for tm in range(tj, -tj - 1, -2):
            m = Fraction(tm, 2)
            for i, (mp, dj) in ENTRY_QUERY.items():
                jo = j + dj
                if jo < 0 or abs(m + mp) > jo:
                    continue
                v = complex(matrix_elements_U(U, S, j, m, i, slack=1))
                out.append([i, str(j), str(m), str(jo), str(m + mp), v.real, v.imag])
    return out
