"""Constant and dynamical R-matrices for U_q(sl(2)) and the shifted
Yang-Baxter equation on an integer weight lattice."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
import scipy.sparse as sp

from .qarith import AnyPoint, qnum_array
from .report import CheckReport

PERM = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=float)


def _is_complex(qp: AnyPoint) -> bool:
    return (not qp.classical) and qp.mode == "circle"


def build_R_const(qp: AnyPoint, sign: int = +1) -> np.ndarray:
    """``R_+ = q^(-1/2) [[q,0,0,0],[0,1,w,0],[0,0,1,0],[0,0,0,q]]`` and
    ``R_- = P R_+^{-1} P``."""
    q = qp.power(1.0)
    w = qp.omega
    Rp = qp.power(-0.5) * np.array([[q, 0, 0, 0], [0, 1, w, 0], [0, 0, 1, 0], [0, 0, 0, q]],
                                   dtype=complex if _is_complex(qp) else float)
    if sign > 0:
        return Rp
    return PERM @ np.linalg.inv(Rp) @ PERM


def r_dyn_values(p: np.ndarray, qp: AnyPoint, sign: int = +1) -> np.ndarray:
    """Stack of 4x4 matrices ``R_sign(p)`` for each value in ``p``."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    dt = complex if _is_complex(qp) else float
    qn = lambda x: qnum_array(x, qp)
    s = np.sqrt(qn(p + 1) * qn(p - 1) + 0j) / qn(p)
    if dt is float:
        s = s.real
    out = np.zeros((p.size, 4, 4), dtype=dt)
    q = qp.power(1.0)
    out[:, 0, 0] = q
    out[:, 3, 3] = q
    out[:, 1, 1] = s
    out[:, 2, 2] = s
    out[:, 1, 2] = qp.power(p) / qn(p)
    out[:, 2, 1] = -qp.power(-p) / qn(p)
    out *= qp.power(-0.5)
    if sign > 0:
        return out
    inv = np.linalg.inv(out)
    return PERM[None] @ inv @ PERM[None]


def classical_r(p) -> np.ndarray:
    """Undeformed dynamical R-matrix (a rotation in the middle block)."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    out = np.zeros((p.size, 4, 4))
    s = np.sqrt((p + 1) * (p - 1)) / p
    out[:, 0, 0] = out[:, 3, 3] = 1.0
    out[:, 1, 1] = out[:, 2, 2] = s
    out[:, 1, 2] = 1 / p
    out[:, 2, 1] = -1 / p
    return out


def embed_dyn(values: np.ndarray, naux_slots: Tuple[int, int], nslots: int) -> sp.csr_matrix:
    """Operator ``sum_rc f_rc(P) (x) E`` acting in two of ``nslots`` auxiliary spaces.

    ``values[k]`` is the 4x4 matrix at the k-th lattice/basis point; the
    pair ``naux_slots`` gives the (0-based) slots carrying the first and
    second tensor factor.
    """
    i, j = naux_slots
    n = values.shape[0]
    out = None
    for r in range(4):
        for c in range(4):
            col = values[:, r, c]
            if not np.any(col):
                continue
            a, b = divmod(r, 2)
            cc, d = divmod(c, 2)
            facs = [np.eye(2)] * nslots
            Ea = np.zeros((2, 2))
            Ea[a, cc] = 1
            Eb = np.zeros((2, 2))
            Eb[b, d] = 1
            facs = list(facs)
            facs[i] = Ea
            facs[j] = Eb
            aux = facs[0]
            for f in facs[1:]:
                aux = np.kron(aux, f)
            term = sp.kron(sp.diags(col, 0), sp.csr_matrix(aux), format="csr")
            out = term if out is None else out + term
    return out.tocsr()


@dataclass
class PLattice:
    """Integer weight lattice ``n_min..n_max`` with ``P|n> = n|n>`` and the
    conjugate shift ``S|n> = |n+1>`` (so ``q^P S = q S q^P``)."""

    qp: AnyPoint
    n_min: int = 2
    n_max: int = 27

    def __post_init__(self):
        if self.n_min < 2:
            raise ValueError("n_min must be >= 2 so that [n-1] does not vanish")
        if self.n_max - self.n_min < 6:
            raise ValueError("lattice too small")

    @property
    def points(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1, dtype=float)

    @property
    def size(self) -> int:
        return self.n_max - self.n_min + 1

    def shift(self, k: int = 1) -> sp.csr_matrix:
        n = self.size
        dt = complex if _is_complex(self.qp) else float
        return sp.eye(n, n, k=-k, dtype=dt, format="csr")

    def P(self) -> sp.csr_matrix:
        return sp.diags(self.points, 0, format="csr")

    def window_indices(self, lo: int, hi: int) -> np.ndarray:
        if lo - self.n_min < 2 or self.n_max - hi < 2:
            raise ValueError("window too close to the lattice edge")
        return np.arange(lo - self.n_min, hi - self.n_min + 1)


def _Q(lat: PLattice, k: int, nslots: int = 3, inverse: bool = False) -> sp.csr_matrix:
    S, Si = lat.shift(1), lat.shift(-1)
    if inverse:
        S, Si = Si, S
    out = None
    for a, X in ((0, S), (1, Si)):
        facs = [np.eye(2)] * nslots
        E = np.zeros((2, 2))
        E[a, a] = 1
        facs = list(facs)
        facs[k] = E
        aux = facs[0]
        for f in facs[1:]:
            aux = np.kron(aux, f)
        term = sp.kron(X, sp.csr_matrix(aux), format="csr")
        out = term if out is None else out + term
    return out.tocsr()


def _rel(A, B, cols) -> float:
    A = sp.csr_matrix(A)[:, cols].toarray()
    B = sp.csr_matrix(B)[:, cols].toarray()
    scale = max(np.linalg.norm(A), np.linalg.norm(B))
    return float(np.linalg.norm(A - B) / scale) if scale else float(np.linalg.norm(A - B))


def dybe_residual(lat: PLattice, window: Tuple[int, int] = (4, 24),
                  values=None) -> float:
    vals = r_dyn_values(lat.points, lat.qp, +1) if values is None else values
    R12 = embed_dyn(vals, (0, 1), 3)
    R13 = embed_dyn(vals, (0, 2), 3)
    R23 = embed_dyn(vals, (1, 2), 3)
    Q1, Q1i = _Q(lat, 0), _Q(lat, 0, inverse=True)
    Q2, Q2i = _Q(lat, 1), _Q(lat, 1, inverse=True)
    Q3, Q3i = _Q(lat, 2), _Q(lat, 2, inverse=True)
    lhs = Q1 @ R23 @ Q1i @ R13 @ Q3 @ R12 @ Q3i
    rhs = R12 @ Q2 @ R13 @ Q2i @ R23
    idx = lat.window_indices(*window)
    cols = (idx[:, None] * 8 + np.arange(8)[None, :]).ravel()
    return _rel(lhs, rhs, cols)


def verify_dybe(lat: PLattice, window: Tuple[int, int] = (4, 24), tol: float = 1e-10,
                suite: str = "dybe") -> CheckReport:
    res = dybe_residual(lat, window)
    return CheckReport.numeric(suite, "shifted Yang-Baxter", "dynamical Yang-Baxter",
                               res, tol, {"q": lat.qp.label(), "window": list(window)})


def rd_residual(qp: AnyPoint, p: np.ndarray) -> float:
    Rp = r_dyn_values(p, qp, +1)
    Rm = r_dyn_values(p, qp, -1)
    sigma = np.diag([qp.power(-1.0), qp.power(1.0), qp.power(1.0), qp.power(-1.0)])
    worst = 0.0
    for k, pv in enumerate(np.atleast_1d(p)):
        d = qp.power(float(pv))
        D1 = np.diag([d, d, 1 / d, 1 / d])
        rhs = np.linalg.inv(D1) @ Rp[k] @ sigma @ D1
        worst = max(worst, np.linalg.norm(Rm[k] - rhs) / np.linalg.norm(Rm[k]))
    return float(worst)


def verify_RD_identity(lat: PLattice, tol: float = 1e-12, suite: str = "dybe") -> CheckReport:
    res = rd_residual(lat.qp, lat.points[2:-2])
    return CheckReport.numeric(suite, "R-(p) = D1^-1 R+(p) sigma D1", "dynamical R identity",
                               res, tol, {"q": lat.qp.label()})


def dybe_checks(qp: AnyPoint, window: Tuple[int, int] = (4, 24), tol: float = 1e-10,
                suite: str = "dybe") -> List[CheckReport]:
    lat = PLattice(qp, 2, window[1] + 3)
    params = {"q": qp.label()}
    out = [verify_dybe(lat, window, tol, suite), verify_RD_identity(lat, 1e-12, suite)]
    # constant R-matrices
    Rp, Rm = build_R_const(qp, +1), build_R_const(qp, -1)
    I2 = np.eye(2)
    R12 = np.kron(Rp, I2)
    R23 = np.kron(I2, Rp)
    P23 = np.kron(I2, PERM)
    R13 = P23 @ R12 @ P23
    out.append(CheckReport.numeric(suite, "constant Yang-Baxter", "constant R-matrix",
                                   np.linalg.norm(R12 @ R13 @ R23 - R23 @ R13 @ R12)
                                   / np.linalg.norm(R12 @ R13 @ R23), 1e-12, params))
    out.append(CheckReport.numeric(suite, "R- = P R+^-1 P", "constant R-matrix",
                                   np.linalg.norm(Rm @ PERM @ Rp @ PERM - np.eye(4)), 1e-12, params))
    # entry structure
    pts = lat.points[2:-2]
    vals = r_dyn_values(pts, qp, +1)
    qn = lambda x: qnum_array(x, qp)
    det_mid = vals[:, 1, 1] * vals[:, 2, 2] - vals[:, 1, 2] * vals[:, 2, 1]
    formula = qp.power(-1.0) * (qn(pts + 1) * qn(pts - 1) + 1) / qn(pts) ** 2
    out.append(CheckReport.numeric(suite, "middle-block determinant", "dynamical R entries",
                                   np.max(np.abs(det_mid - formula)), 1e-12, params))
    out.append(CheckReport.numeric(suite, "[n+1][n-1]+1=[n]^2", "q-number identity",
                                   np.max(np.abs((qn(pts + 1) * qn(pts - 1) + 1 - qn(pts) ** 2)
                                                 / qn(pts) ** 2)), 1e-12, params))
    out.append(CheckReport.numeric(suite, "middle-block determinant = q^-1", "dynamical R entries",
                                   np.max(np.abs(det_mid - qp.power(-1.0))), 1e-12, params))
    # translation covariance: S^-k R(P) S^k = R(P+k)
    k = 2
    full = r_dyn_values(lat.points, qp, +1)
    R = embed_dyn(full, (0, 1), 2)
    S = sp.kron(lat.shift(k), sp.identity(4), format="csr")
    Si = sp.kron(lat.shift(-k), sp.identity(4), format="csr")
    shifted = embed_dyn(r_dyn_values(lat.points + k, qp, +1), (0, 1), 2)
    idx = lat.window_indices(*window)
    cols = (idx[:, None] * 4 + np.arange(4)[None, :]).ravel()
    out.append(CheckReport.numeric(suite, "translation covariance", "dynamical R entries",
                                   _rel(Si @ R @ S, shifted, cols), 1e-12, params))
    if qp.classical:
        out.append(CheckReport.numeric(suite, "classical rotation form", "undeformed dynamical R",
                                       np.max(np.abs(vals - classical_r(pts))), 1e-12, params))
    return out


def large_p_limit(qp: AnyPoint) -> np.ndarray:
    """Limit of ``R_+(n)`` for large ``n``: ``R_+`` itself when ``|q| > 1``
    and the flipped ``P R_+ P`` when ``q < 1``."""
    Rp = build_R_const(qp, +1)
    if qp.mode == "real" and abs(qp.q) < 1:
        return PERM @ Rp @ PERM
    return Rp


def large_p_deviation(qp: AnyPoint, n: int = 40, against=None) -> float:
    """Entrywise distance between ``R_+(n)`` and ``against`` (default: the
    large-weight limit for this q)."""
    target = large_p_limit(qp) if against is None else against
    return float(np.max(np.abs(r_dyn_values([n], qp, +1)[0] - target)))
