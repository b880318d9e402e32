"""Numerical representation layer: truncated model spaces and operators."""

from .models import (Exact63, Family, OscillatorParams, build_D, build_L, build_L_gauged,
                     build_U, build_Uhat, build_uqsl2, casimir, det_u, elementary_ops,
                     matrix_elements_U, oscillator_uhat, parse_variant, uhat_inverse)
from .space import (ExtendedLattice, FockSpace, OpMatrix2, WindowError, rel_residual, slot,
                    wm_eval, wm_eval_extended)


def make_space(qp, ncap: int) -> FockSpace:
    return FockSpace(qp, ncap)


__all__ = [
    "Exact63", "Family", "OscillatorParams", "build_D", "build_L", "build_L_gauged", "build_U",
    "build_Uhat", "build_uqsl2", "casimir", "det_u", "elementary_ops", "matrix_elements_U",
    "oscillator_uhat", "parse_variant", "uhat_inverse", "ExtendedLattice", "FockSpace",
    "OpMatrix2", "WindowError", "rel_residual", "slot", "wm_eval", "wm_eval_extended",
    "make_space",
]
