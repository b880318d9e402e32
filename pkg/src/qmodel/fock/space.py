"""Truncated model spaces and the sparse-operator plumbing used by the
numerical suites.

:class:`FockSpace` is spanned by normalized vectors
``|n1,n2> = z1**n1 z2**n2 / sqrt([n1]! [n2]!)`` with ``0 <= n_i <= ncap``;
``j = (n1+n2)/2`` and ``m = (n1-n2)/2``.

:class:`ExtendedLattice` uses unnormalized monomials ``z1**n1 z2**n2`` with
half-integer exponents in ``[-lslack, ncap]``; it hosts the factors with
``z**(1/2)`` whose products return to the polynomial sector.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..qarith import AnyPoint, HalfInt, LaurentU, qfact_array, qnum_array
from ..weylalg import WeylElement

Matrix = sp.csr_matrix


class WindowError(ValueError):
    """The requested check window is empty or the state lies outside it."""


def _dtype(qp: AnyPoint):
    return complex if (not qp.classical and qp.mode == "circle") else float


class FockSpace:
    """Truncated two-variable model space with an orthonormal monomial basis."""

    def __init__(self, qp: AnyPoint, ncap: int):
        if ncap < 2:
            raise WindowError("ncap must be at least 2")
        self.qp = qp
        self.ncap = int(ncap)
        side = np.arange(ncap + 1)
        n1, n2 = np.meshgrid(side, side, indexing="ij")
        self.n1 = n1.ravel()
        self.n2 = n2.ravel()
        self.dim = self.n1.size
        self.basis: List[Tuple[int, int]] = list(zip(self.n1.tolist(), self.n2.tolist()))
        self._index: Dict[Tuple[int, int], int] = {b: i for i, b in enumerate(self.basis)}
        self.dtype = _dtype(qp)
        self.norms = np.sqrt(qfact_array(self.n1, qp) * qfact_array(self.n2, qp))

    # -- indexing ----------------------------------------------------------
    def index(self, n1: int, n2: int) -> int:
        try:
            return self._index[(n1, n2)]
        except KeyError:
            raise WindowError(f"state ({n1},{n2}) outside ncap={self.ncap}") from None

    def index_jm(self, j, m) -> int:
        j, m = HalfInt.parse(j), HalfInt.parse(m)
        if (j.twice - m.twice) % 2 or abs(m.twice) > j.twice:
            raise WindowError(f"invalid weight j={j}, m={m}")
        return self.index((j.twice + m.twice) // 2, (j.twice - m.twice) // 2)

    def jm(self, idx: int) -> Tuple[Fraction, Fraction]:
        n1, n2 = self.basis[idx]
        return Fraction(n1 + n2, 2), Fraction(n1 - n2, 2)

    def window(self, slack: int, exclude_vacuum: bool = False) -> np.ndarray:
        lim = self.ncap - slack
        if lim < 0:
            raise WindowError(f"slack {slack} exceeds ncap {self.ncap}")
        mask = (self.n1 <= lim) & (self.n2 <= lim)
        if exclude_vacuum:
            mask &= (self.n1 + self.n2) > 0
        return np.nonzero(mask)[0]

    # -- operator builders -------------------------------------------------
    def identity(self) -> Matrix:
        return sp.identity(self.dim, dtype=self.dtype, format="csr")

    def diag(self, values) -> Matrix:
        values = np.broadcast_to(np.asarray(values), (self.dim,))
        return sp.diags(values.astype(self.dtype), 0, format="csr")

    def shift(self, d1: int, d2: int, coeff) -> Matrix:
        """Operator mapping ``|n1,n2>`` to ``coeff(n1,n2) |n1+d1, n2+d2>``.

        Targets outside ``[0, ncap]`` are dropped.
        """
        c = np.broadcast_to(np.asarray(coeff(self.n1, self.n2)), (self.dim,))
        t1, t2 = self.n1 + d1, self.n2 + d2
        ok = (t1 >= 0) & (t1 <= self.ncap) & (t2 >= 0) & (t2 <= self.ncap)
        cols = np.nonzero(ok)[0]
        rows = t1[ok] * (self.ncap + 1) + t2[ok]
        return sp.csr_matrix((c[ok].astype(self.dtype), (rows, cols)), shape=(self.dim, self.dim))

    def qpow(self, x):
        return self.qp.power(np.asarray(x, dtype=float))

    def qnum(self, x):
        return qnum_array(x, self.qp)


class ExtendedLattice:
    """Unnormalized monomials with exponents in (1/2)Z within ``[-lslack, ncap]``."""

    def __init__(self, qp: AnyPoint, ncap: int, lslack: int = 4):
        self.qp = qp
        self.ncap = int(ncap)
        self.lslack = int(lslack)
        self.twice = np.arange(-2 * lslack, 2 * ncap + 1)  # exponents stored doubled
        side = self.twice.size
        t1, t2 = np.meshgrid(self.twice, self.twice, indexing="ij")
        self.t1 = t1.ravel()
        self.t2 = t2.ravel()
        self.side = side
        self.dim = side * side
        self.dtype = _dtype(qp)

    def _flat(self, t1, t2):
        return (t1 + 2 * self.lslack) * self.side + (t2 + 2 * self.lslack)

    def index(self, n1, n2) -> int:
        t1, t2 = int(2 * Fraction(n1)), int(2 * Fraction(n2))
        return int(self._flat(t1, t2))

    def polynomial_window(self, slack: int) -> np.ndarray:
        lim = 2 * (self.ncap - slack)
        ok = (self.t1 % 2 == 0) & (self.t2 % 2 == 0) & (self.t1 >= 0) & (self.t2 >= 0) \
            & (self.t1 <= lim) & (self.t2 <= lim)
        return np.nonzero(ok)[0]

    def identity(self) -> Matrix:
        return sp.identity(self.dim, dtype=self.dtype, format="csr")

    def diag(self, values) -> Matrix:
        values = np.broadcast_to(np.asarray(values), (self.dim,))
        return sp.diags(values.astype(self.dtype), 0, format="csr")

    @property
    def p_values(self) -> np.ndarray:
        """Eigenvalue of ``z1 d1 + z2 d2 + 1`` on each monomial."""
        return (self.t1 + self.t2) / 2 + 1

    def shift(self, d1, d2, coeff) -> Matrix:
        """``z^n -> coeff(n1, n2) z^(n + d)`` on doubled integer coordinates."""
        D1, D2 = int(2 * Fraction(d1)), int(2 * Fraction(d2))
        c = np.broadcast_to(np.asarray(coeff(self.t1 / 2, self.t2 / 2)), (self.dim,))
        s1, s2 = self.t1 + D1, self.t2 + D2
        lo, hi = -2 * self.lslack, 2 * self.ncap
        ok = (s1 >= lo) & (s1 <= hi) & (s2 >= lo) & (s2 <= hi)
        cols = np.nonzero(ok)[0]
        rows = self._flat(s1[ok], s2[ok])
        return sp.csr_matrix((c[ok].astype(self.dtype), (rows, cols)), shape=(self.dim, self.dim))


# --------------------------------------------------------------------------
# bridge from the exact algebra
# --------------------------------------------------------------------------


def _exact_coeffs(elem: WeylElement, n1: int, n2: int, doubled: bool):
    """Exact image of one monomial state: ``{(m1, m2): LaurentU}``.

    ``n`` given doubled if ``doubled`` (extended lattice)."""
    out: Dict[Tuple[int, int], LaurentU] = {}
    for (A1, A2, S1, S2), c in elem.terms.items():
        if doubled:
            k = S1 * n1 + S2 * n2  # u**(8 s n) with n = t/2, s = S/4
            tgt = (n1 + A1, n2 + A2)
        else:
            if A1 % 2 or A2 % 2:
                raise ValueError("half-integer z exponent on the polynomial space")
            k = 2 * (S1 * n1 + S2 * n2)
            tgt = (n1 + A1 // 2, n2 + A2 // 2)
        val = c * LaurentU.u_power(k)
        out[tgt] = out[tgt] + val if tgt in out else val
    return {t: v for t, v in out.items() if not v.is_zero()}


def wm_eval(elem: WeylElement, space: FockSpace) -> Matrix:
    """Matrix of an exact algebra element on the normalized basis.

    Terms leaving the polynomial sector must cancel exactly; raising beyond
    ``ncap`` is truncated.
    """
    rows, cols, vals = [], [], []
    qp = space.qp
    for col, (n1, n2) in enumerate(space.basis):
        for (m1, m2), c in _exact_coeffs(elem, n1, n2, doubled=False).items():
            if m1 < 0 or m2 < 0:
                raise ValueError(f"element leaves the polynomial sector at ({n1},{n2})")
            if m1 > space.ncap or m2 > space.ncap:
                continue
            row = space.index(m1, m2)
            val = complex(c.evaluate(qp)) * space.norms[row] / space.norms[col]
            rows.append(row)
            cols.append(col)
            vals.append(val)
    vals = np.asarray(vals, dtype=complex)
    if space.dtype is float:
        vals = vals.real
    return sp.csr_matrix((vals, (rows, cols)), shape=(space.dim, space.dim))


def wm_eval_extended(elem: WeylElement, lat: ExtendedLattice) -> Matrix:
    """Matrix of an exact algebra element on the unnormalized extended lattice."""
    rows, cols, vals = [], [], []
    lo, hi = -2 * lat.lslack, 2 * lat.ncap
    for col in range(lat.dim):
        t1, t2 = int(lat.t1[col]), int(lat.t2[col])
        for (m1, m2), c in _exact_coeffs(elem, t1, t2, doubled=True).items():
            if m1 < lo or m1 > hi or m2 < lo or m2 > hi:
                continue
            rows.append(int(lat._flat(m1, m2)))
            cols.append(col)
            vals.append(complex(c.evaluate(lat.qp)))
    vals = np.asarray(vals, dtype=complex)
    if lat.dtype is float:
        vals = vals.real
    return sp.csr_matrix((vals, (rows, cols)), shape=(lat.dim, lat.dim))


# --------------------------------------------------------------------------
# 2x2 operator matrices and auxiliary slots
# --------------------------------------------------------------------------


class OpMatrix2:
    """2x2 matrix whose entries are sparse operators on one space."""

    def __init__(self, entries: Sequence[Sequence[Matrix]]):
        self.e = [[sp.csr_matrix(entries[i][j]) for j in range(2)] for i in range(2)]

    def __getitem__(self, ij) -> Matrix:
        i, j = ij
        return self.e[i][j]

    @property
    def dim(self) -> int:
        return self.e[0][0].shape[0]

    def __matmul__(self, other: "OpMatrix2") -> "OpMatrix2":
        return OpMatrix2([[self.e[i][0] @ other.e[0][j] + self.e[i][1] @ other.e[1][j]
                           for j in range(2)] for i in range(2)])

    def __sub__(self, other: "OpMatrix2") -> "OpMatrix2":
        return OpMatrix2([[self.e[i][j] - other.e[i][j] for j in range(2)] for i in range(2)])

    def right(self, op: Matrix) -> "OpMatrix2":
        """Multiply every entry by ``op`` on the right."""
        return OpMatrix2([[x @ op for x in row] for row in self.e])

    def left(self, op: Matrix) -> "OpMatrix2":
        return OpMatrix2([[op @ x for x in row] for row in self.e])

    def scale(self, c) -> "OpMatrix2":
        return OpMatrix2([[x * c for x in row] for row in self.e])

    def transpose(self) -> "OpMatrix2":
        """Formal transpose: entries move, operators are untouched."""
        return OpMatrix2([[self.e[0][0], self.e[1][0]], [self.e[0][1], self.e[1][1]]])

    def adjoint(self) -> "OpMatrix2":
        """Conjugate of the matrix: transpose plus operator adjoint per entry."""
        return OpMatrix2([[self.e[j][i].conj().T.tocsr() for j in range(2)] for i in range(2)])

    def gauge_sigma_z(self) -> "OpMatrix2":
        return OpMatrix2([[self.e[0][0], -self.e[0][1]], [-self.e[1][0], self.e[1][1]]])

    def block(self) -> Matrix:
        """Single operator on H (x) V with V the 2-dim auxiliary space."""
        return slot(self, 1, nslots=1)


def unit(a: int, b: int, n: int = 2) -> np.ndarray:
    m = np.zeros((n, n))
    m[a, b] = 1.0
    return m


def slot(M: OpMatrix2, k: int, nslots: int = 2) -> Matrix:
    """Embed ``M`` into ``H (x) V^{(x) nslots}`` acting in auxiliary slot ``k``."""
    out = None
    for a in range(2):
        for b in range(2):
            facs = [np.eye(2)] * nslots
            facs[k - 1] = unit(a, b)
            aux = facs[0]
            for f in facs[1:]:
                aux = np.kron(aux, f)
            term = sp.kron(M[a, b], sp.csr_matrix(aux), format="csr")
            out = term if out is None else out + term
    return out.tocsr()


def aux_const(space_dim: int, R: np.ndarray) -> Matrix:
    """``I_H (x) R`` for a constant matrix on the auxiliary spaces."""
    return sp.kron(sp.identity(space_dim, format="csr"), sp.csr_matrix(R), format="csr")


def aux_window(cols: np.ndarray, naux: int) -> np.ndarray:
    return (np.asarray(cols)[:, None] * naux + np.arange(naux)[None, :]).ravel()


def rel_residual(A, B, cols: Optional[np.ndarray] = None) -> float:
    """Relative Frobenius residual of ``A - B`` restricted to columns ``cols``."""
    A = sp.csr_matrix(A)
    B = sp.csr_matrix(B)
    if cols is not None:
        A = A[:, cols]
        B = B[:, cols]
    diff = spla.norm(A - B) if (A - B).nnz else 0.0
    scale = max(spla.norm(A) if A.nnz else 0.0, spla.norm(B) if B.nnz else 0.0)
    if scale == 0.0:
        return float(diff)
    return float(diff / scale)


def op_residual(M1: OpMatrix2, M2: OpMatrix2, cols) -> float:
    return rel_residual(M1.block(), M2.block(), aux_window(cols, 2))
