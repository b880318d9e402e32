"""Exact and numerical verification tools for the q-deformed generating
matrices of U_q(sl(2)), q-Clebsch-Gordan coefficients and dynamical
R-matrices."""

from .qarith import (ClassicalPoint, HalfInt, LaurentU, QPoint, check_q_identity,
                     laurent_arith, laurent_eval, make_qpoint, parse_qpoint, q_factorial,
                     q_number)
from .report import CheckReport, emit_report, parse_report

__all__ = [
    "ClassicalPoint", "HalfInt", "LaurentU", "QPoint", "check_q_identity", "laurent_arith",
    "laurent_eval", "make_qpoint", "parse_qpoint", "q_factorial", "q_number", "CheckReport",
    "emit_report", "parse_report",
]
