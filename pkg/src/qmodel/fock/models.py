"""Operators of the model space: q-oscillators, U_q(sl(2)) generators, the
L-matrix, the diagonal matrix D and the generating matrix U."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Union

import numpy as np
import scipy.sparse as sp

from ..qarith import HalfInt, _frac
from ..weylalg import WeylElement, uhat_closed_form
from .space import FockSpace, Matrix, OpMatrix2, WindowError, wm_eval


def elementary_ops(space: FockSpace) -> Dict[str, Matrix]:
    """``z_i`` (raise), ``qd_i = z_i^-1 [z_i d_i]`` (lower), ``N_i = q^(n_i)`` and
    ``P = n1 + n2 + 1`` on the normalized basis."""
    qn = space.qnum
    ops = {
        "z1": space.shift(1, 0, lambda a, b: np.sqrt(qn(a + 1))),
        "z2": space.shift(0, 1, lambda a, b: np.sqrt(qn(b + 1))),
        "qd1": space.shift(-1, 0, lambda a, b: np.sqrt(qn(a))),
        "qd2": space.shift(0, -1, lambda a, b: np.sqrt(qn(b))),
        "N1": space.diag(space.qpow(space.n1)),
        "N2": space.diag(space.qpow(space.n2)),
        "P": space.diag(space.n1 + space.n2 + 1.0),
    }
    return ops


def p_values(space: FockSpace) -> np.ndarray:
    return (space.n1 + space.n2 + 1).astype(float)


def p_function(space: FockSpace, f) -> Matrix:
    """Diagonal operator ``f(P)``."""
    return space.diag(f(p_values(space)))


def build_uqsl2(space: FockSpace) -> Dict[str, Matrix]:
    ops = elementary_ops(space)
    l3 = (space.n1 - space.n2) / 2.0
    gens = {
        "lp": (ops["z1"] @ ops["qd2"]).tocsr(),
        "lm": (ops["z2"] @ ops["qd1"]).tocsr(),
        "l3": space.diag(l3),
        "ql3": space.diag(space.qpow(l3)),
        "ql3_inv": space.diag(space.qpow(-l3)),
        "q2l3": space.diag(space.qpow(2 * l3)),
        "q2l3_inv": space.diag(space.qpow(-2 * l3)),
    }
    return gens


def casimir(space: FockSpace, gens=None) -> Matrix:
    g = gens or build_uqsl2(space)
    qp = space.qp
    w = qp.omega
    return (w * w * (g["lm"] @ g["lp"]) + qp.power(1) * g["q2l3"]
            + qp.power(-1) * g["q2l3_inv"]).tocsr()


def build_L(space: FockSpace, gens=None) -> OpMatrix2:
    """The standard L-matrix ``q^2 L_+ L_-^{-1}`` in the oscillator realization."""
    g = gens or build_uqsl2(space)
    qp = space.qp
    w = qp.omega
    C = casimir(space, g)
    return OpMatrix2([
        [qp.power(1) * C - g["q2l3_inv"], qp.power(2.5) * w * (g["lm"] @ g["ql3_inv"])],
        [qp.power(-0.5) * w * (g["lp"] @ g["ql3_inv"]), qp.power(2) * g["q2l3_inv"]],
    ])


def build_L_gauged(space: FockSpace, gens=None) -> OpMatrix2:
    """The L-matrix produced by the generating matrix: the standard one
    conjugated by ``diag(1,-1)`` (equivalently ``l+- -> -l+-``)."""
    return build_L(space, gens).gauge_sigma_z()


def build_D(space: FockSpace) -> OpMatrix2:
    P = p_values(space)
    Z = sp.csr_matrix((space.dim, space.dim), dtype=space.dtype)
    return OpMatrix2([[space.diag(space.qpow(P)), Z], [Z, space.diag(space.qpow(-P))]])


# --------------------------------------------------------------------------
# generating matrix
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Exact63:
    """The exact generating matrix with unit coefficients in its action."""

    name = "exact63"


@dataclass(frozen=True)
class Family:
    """Monomial family with column constants ``q**alpha0_exp``, ``q**beta0_exp``
    and free exponent ``gamma``."""

    alpha0_exp: Fraction = Fraction(1, 2)
    beta0_exp: Fraction = Fraction(0)
    gamma: Fraction = Fraction(2)

    def __post_init__(self):
        for f in ("alpha0_exp", "beta0_exp", "gamma"):
            object.__setattr__(self, f, _frac(getattr(self, f)))

    @property
    def name(self) -> str:
        return f"family:{self.alpha0_exp},{self.beta0_exp},{self.gamma}"


Variant = Union[Exact63, Family]


def parse_variant(text: str) -> Variant:
    """``exact63`` or ``family:ALPHA0_EXP,BETA0_EXP,GAMMA`` (rationals)."""
    t = text.strip().lower()
    if t in ("exact63", "exact"):
        return Exact63()
    if t.startswith("family"):
        _, _, rest = t.partition(":")
        parts = [p for p in rest.split(",") if p.strip()] if rest else []
        if len(parts) not in (0, 3):
            raise ValueError("family variant needs three values: alpha0_exp,beta0_exp,gamma")
        if not parts:
            return Family()
        return Family(*(Fraction(p.strip()) for p in parts))
    raise ValueError(f"unknown variant {text!r}")


def sqrt_qnum_p(space: FockSpace, power: float) -> Matrix:
    """Diagonal ``[P]**power``."""
    return p_function(space, lambda P: space.qnum(P) ** power)


def build_Uhat(space: FockSpace, variant: Variant = Exact63()) -> OpMatrix2:
    """``U-hat_i = U_i sqrt([P])`` (diagonal factor on the right)."""
    if isinstance(variant, Exact63):
        ops = elementary_ops(space)
        qp = space.qp
        n1, n2 = space.n1, space.n2
        return OpMatrix2([
            [ops["qd1"] @ space.diag(space.qpow((n2 + 1) / 2)),
             ops["z2"] @ space.diag(space.qpow(-n1 / 2))],
            [-(ops["qd2"] @ space.diag(space.qpow(-(n1 + 1) / 2))),
             ops["z1"] @ space.diag(space.qpow(n2 / 2))],
        ])
    W = uhat_closed_form(variant.alpha0_exp, variant.beta0_exp, variant.gamma)
    return OpMatrix2([[wm_eval(W[i, j], space) for j in range(2)] for i in range(2)])


def build_U(space: FockSpace, variant: Variant = Exact63()) -> OpMatrix2:
    return build_Uhat(space, variant).right(sqrt_qnum_p(space, -0.5))


def uhat_det_scalar(space: FockSpace, Uhat: OpMatrix2, cols) -> complex:
    """Value of the deformed determinant, read off a window state."""
    det = det_u(space, Uhat)
    c = int(cols[0])
    return complex(det[c, c])


def det_u(space: FockSpace, Uhat: OpMatrix2) -> Matrix:
    """``(U1 U4 - U2 U3) / [P]`` in hat variables."""
    return ((Uhat[0, 0] @ Uhat[1, 1] - Uhat[0, 1] @ Uhat[1, 0])
            @ sqrt_qnum_p(space, -1.0)).tocsr()


def det_u_alt(space: FockSpace, Uhat: OpMatrix2) -> Matrix:
    """``(U4 U1 - U3 U2) q / [P]``."""
    return (space.qp.power(1) * (Uhat[1, 1] @ Uhat[0, 0] - Uhat[1, 0] @ Uhat[0, 1])
            @ sqrt_qnum_p(space, -1.0)).tocsr()


def uhat_inverse(space: FockSpace, Uhat: OpMatrix2, det: complex) -> OpMatrix2:
    """Closed-form inverse ``(1/Det) [[U4, -q U2], [-U3, q U1]] [P]^-1``."""
    q = space.qp.power(1)
    return OpMatrix2([
        [Uhat[1, 1], -q * Uhat[0, 1]],
        [-Uhat[1, 0], q * Uhat[0, 0]],
    ]).right(sqrt_qnum_p(space, -1.0)).scale(1.0 / det)


def matrix_elements_U(U: OpMatrix2, space: FockSpace, j, m, i: int, slack: int = 1):
    """``<j'',m''| U_i |j,m>`` with the target fixed by the shift of ``U_i``.

    Shifts in ``(n1, n2)``: U1 (-1,0), U2 (0,+1), U3 (0,-1), U4 (+1,0).
    Returns 0 when the target would leave the model space.
    """
    shifts = {1: (-1, 0), 2: (0, 1), 3: (0, -1), 4: (1, 0)}
    j, m = HalfInt.parse(j), HalfInt.parse(m)
    col = space.index_jm(j, m)
    n1, n2 = space.basis[col]
    if n1 > space.ncap - slack or n2 > space.ncap - slack:
        raise WindowError(f"|{j},{m}> outside the window")
    d1, d2 = shifts[i]
    t1, t2 = n1 + d1, n2 + d2
    if t1 < 0 or t2 < 0:
        return 0.0
    entry = U[(i - 1) // 2, (i - 1) % 2]
    return entry[space.index(t1, t2), col]


SHIFT_SIGNATURES = {1: (-1, 0), 2: (0, 1), 3: (0, -1), 4: (1, 0)}


def shift_signature(op: Matrix, space: FockSpace):
    """Common ``(dn1, dn2)`` of all nonzero entries, or ``None`` if mixed."""
    coo = sp.coo_matrix(op)
    keep = np.abs(coo.data) > 0
    if not keep.any():
        return None
    r, c = coo.row[keep], coo.col[keep]
    d1 = space.n1[r] - space.n1[c]
    d2 = space.n2[r] - space.n2[c]
    if np.all(d1 == d1[0]) and np.all(d2 == d2[0]):
        return int(d1[0]), int(d2[0])
    return None


# --------------------------------------------------------------------------
# q-oscillator family
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class OscillatorParams:
    """Parameters of the oscillator family; constants are numbers."""

    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(-1, 2)
    alpha0: complex = None  # default q**(1/2)
    beta0: complex = 1.0
    gamma0: complex = None  # default q**(-1/2)
    delta0: complex = 1.0


def oscillator_uhat(space: FockSpace, prm: OscillatorParams, tol: float = 1e-12) -> OpMatrix2:
    qp = space.qp
    q = qp.power(1)
    a0 = qp.power(0.5) if prm.alpha0 is None else prm.alpha0
    g0 = qp.power(-0.5) if prm.gamma0 is None else prm.gamma0
    b0, d0 = prm.beta0, prm.delta0
    if abs(a0 * d0 - q * b0 * g0) > tol * max(1.0, abs(a0 * d0)):
        raise ValueError("oscillator constants violate alpha0*delta0 = q*beta0*gamma0")
    al, be = _frac(prm.alpha), _frac(prm.beta)
    W = WeylElement
    M = lambda s1, s2: W.monomial(1, s1=s1, s2=s2)
    a1, a2 = W.qd(1), W.qd(2)
    a1p, a2p = W.z(1), W.z(2)
    entries = [
        [a1 * M(al, -be), a2p * M(be, -al)],
        [a2 * M(-(1 + be), al), a1p * M(-al, 1 + be)],
    ]
    consts = [[a0, b0], [-g0, d0]]
    return OpMatrix2([[consts[i][j] * wm_eval(entries[i][j], space) for j in range(2)]
                      for i in range(2)])
