"""Scalar layer: evaluation points for q, q-numbers, q-factorials and the
exact coefficient ring of Laurent polynomials in ``u = q**(1/8)``.

All exponents of q handled exactly are multiples of 1/8, so every exact
scalar lives in ``Q[u, 1/u]``.  Division by ``omega = q - 1/q`` is needed by
a handful of formulas (the ``1/omega`` prefactors of the free-field matrices
and the adjoint of ``z``), so :class:`LaurentU` is localized at omega: each
value carries an integer power of omega in its denominator, reduced away
whenever the numerator is divisible.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Dict, Mapping, Union

import numpy as np

DEFAULT_NCAP = 10

Number = Union[int, Fraction]


class QPointError(ValueError):
    """Raised for inadmissible deformation parameters."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def eighths(x) -> int:
    """Return ``8*x`` as an int; raise if ``x`` is not in (1/8)Z."""
    f = _frac(x) * 8
    if f.denominator != 1:
        raise ValueError(f"exponent {x} is not a multiple of 1/8")
    return int(f)


# --------------------------------------------------------------------------
# evaluation points
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class QPoint:
    """A concrete value of q with fixed principal fractional roots.

    ``mode`` is ``"real"`` (q > 0) or ``"circle"`` (q = exp(i*theta)).
    """

    mode: str
    q: complex
    u: complex
    parameter: float
    ncap: int = DEFAULT_NCAP
    precision: str = "float64"

    classical = False

    @property
    def log_q(self) -> complex:
        return 8 * cmath.log(self.u)

    def power(self, x):
        """Principal ``q**x``; ``x`` may be a scalar or an array."""
        val = np.exp(np.asarray(x, dtype=float) * self.log_q)
        if self.mode == "real":
            val = val.real
        return val[()] if np.ndim(val) == 0 else val

    @property
    def omega(self):
        return self.power(1) - self.power(-1)

    def conjugate(self) -> "QPoint":
        return QPoint(self.mode, complex(self.q).conjugate(), complex(self.u).conjugate(),
                      -self.parameter if self.mode == "circle" else self.parameter,
                      self.ncap, self.precision)

    def label(self) -> str:
        if self.mode == "circle":
            return f"circle:{self.parameter:.12g}"
        return f"{self.parameter:.12g}"


@dataclass(frozen=True)
class ClassicalPoint:
    """The undeformed point q = 1: ``[x] = x`` and every power of q is 1."""

    ncap: int = DEFAULT_NCAP
    mode: str = "classical"
    q: complex = 1.0
    u: complex = 1.0
    parameter: float = 1.0
    precision: str = "float64"

    classical = True

    def power(self, x):
        val = np.ones(np.shape(x), dtype=float)
        return val[()] if np.ndim(val) == 0 else val

    @property
    def omega(self):
        return 0.0

    def conjugate(self) -> "ClassicalPoint":
        return self

    def label(self) -> str:
        return "1"


AnyPoint = Union[QPoint, ClassicalPoint]


def make_qpoint(mode: str, parameter: float, ncap: int = DEFAULT_NCAP) -> QPoint:
    """Build a :class:`QPoint`.

    ``mode="real"``: ``parameter`` is q itself (> 0, != 1).
    ``mode="circle"``: ``parameter`` is theta with ``q = exp(i*theta)`` and
    ``0 < theta < pi/(2*ncap + 4)``, which keeps ``[n] > 0`` for all
    ``n <= 2*ncap + 2``.
    """
    mode = mode.lower()
    if mode in ("real", "r"):
        p = float(parameter)
        if not p > 0:
            raise QPointError(f"real q must be positive, got {parameter}")
        if p == 1.0:
            raise QPointError("q=1 requires ClassicalPoint")
        u = p ** 0.125
        return QPoint("real", complex(p), complex(u), p, ncap)
    if mode in ("circle", "unitcircle", "unit_circle"):
        theta = float(parameter)
        bound = math.pi / (2 * ncap + 4)
        if not 0 < theta < bound:
            raise QPointError(
                f"theta={theta} outside (0, pi/{2 * ncap + 4}) for ncap={ncap}")
        return QPoint("circle", cmath.exp(1j * theta), cmath.exp(1j * theta / 8), theta, ncap)
    raise QPointError(f"unknown mode {mode!r}")


def parse_qpoint(text: str, ncap: int = DEFAULT_NCAP) -> AnyPoint:
    """Parse ``"1"``, a real number, or ``"circle:theta"``.

    ``theta`` may use ``pi``, e.g. ``circle:pi/40``.
    """
    text = text.strip()
    if text.startswith("circle:"):
        return make_qpoint("circle", _parse_angle(text[len("circle:"):]), ncap)
    try:
        val = float(text)
    except ValueError as exc:
        raise QPointError(f"cannot parse q={text!r}") from exc
    if val == 1.0:
        return ClassicalPoint(ncap)
    return make_qpoint("real", val, ncap)


def _parse_angle(text: str) -> float:
    t = text.strip().replace(" ", "")
    if "pi" in t:
        num, _, den = t.partition("/")
        num = num.replace("*", "")
        factor = num.replace("pi", "") or "1"
        try:
            val = float(factor) * math.pi
            return val / float(den) if den else val
        except ValueError as exc:
            raise QPointError(f"cannot parse angle {text!r}") from exc
    try:
        return float(t)
    except ValueError as exc:
        raise QPointError(f"cannot parse angle {text!r}") from exc


# --------------------------------------------------------------------------
# q-numbers
# --------------------------------------------------------------------------


def q_number(x, qp: AnyPoint):
    """``[x] = (q**x - q**-x) / (q - 1/q)``; equals ``x`` at the classical point."""
    eighths(x)
    if qp.classical:
        return float(_frac(x))
    xf = float(_frac(x))
    return (qp.power(xf) - qp.power(-xf)) / qp.omega


def qnum_array(x, qp: AnyPoint):
    """Vectorized q-number for float arrays (no exactness check)."""
    x = np.asarray(x, dtype=float)
    if qp.classical:
        return x.copy()
    return (qp.power(x) - qp.power(-x)) / qp.omega


def q_factorial(n: int, qp: AnyPoint):
    """``[1][2]...[n]`` with ``[0]! = 1``."""
    if n < 0:
        raise ValueError("q_factorial needs n >= 0")
    out = 1.0
    for k in range(1, n + 1):
        out = out * q_number(k, qp)
    return out


def qfact_array(n, qp: AnyPoint):
    """Vectorized q-factorial over an integer array."""
    n = np.asarray(n, dtype=int)
    top = int(n.max()) if n.size else 0
    table = np.ones(top + 1, dtype=complex if (not qp.classical and qp.mode == "circle") else float)
    for k in range(1, top + 1):
        table[k] = table[k - 1] * qnum_array(k, qp)
    return table[n]


# --------------------------------------------------------------------------
# half-integers
# --------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class HalfInt:
    """A half-integer stored as twice its value."""

    twice: int

    @classmethod
    def parse(cls, value) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            f = Fraction(value.strip())
        else:
            f = _frac(value) if not isinstance(value, float) else Fraction(value)
        t = 2 * f
        if t.denominator != 1:
            raise ValueError(f"{value!r} is not a half-integer")
        return cls(int(t))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __float__(self) -> float:
        return self.twice / 2

    def __str__(self) -> str:
        return str(self.value)


# --------------------------------------------------------------------------
# exact Laurent polynomials in u = q^(1/8)
# --------------------------------------------------------------------------


def _clean(terms: Mapping[int, Fraction]) -> Dict[int, Fraction]:
    return {k: v for k, v in terms.items() if v != 0}


def _divisible_by_omega(terms: Mapping[int, Fraction]) -> bool:
    # omega = u^-8 (u^16 - 1): divisible iff the coefficient sums vanish in
    # every residue class mod 16.
    sums: Dict[int, Fraction] = {}
    for k, v in terms.items():
        sums[k % 16] = sums.get(k % 16, 0) + v
    return all(v == 0 for v in sums.values())


def _divide_by_omega(terms: Mapping[int, Fraction]) -> Dict[int, Fraction]:
    """Exact ``terms / omega``; caller guarantees divisibility."""
    if not terms:
        return {}
    lo = min(terms)
    poly = {k - lo: v for k, v in terms.items()}
    deg = max(poly)
    quot: Dict[int, Fraction] = {}
    rem = dict(poly)
    for d in range(deg, 15, -1):
        c = rem.get(d, 0)
        if c:
            quot[d - 16] = c
            rem[d] = 0
            rem[d - 16] = rem.get(d - 16, 0) + c
    # p / (u^16 - 1) = quot ; p / omega = u^8 * quot
    return _clean({k + lo + 8: v for k, v in quot.items()})


class LaurentU:
    """Exact element of ``Q[u, 1/u][1/omega]``, ``u = q**(1/8)``.

    ``terms`` maps integer u-exponents to rationals; ``omega_den`` is the power
    of ``omega = u**8 - u**-8`` in the denominator.  Normal form: no zero
    coefficients and a numerator not divisible by omega when
    ``omega_den > 0``, so ``==`` is structural.
    """

    __slots__ = ("terms", "omega_den", "_hash")

    def __init__(self, terms: Mapping[int, Number] | None = None, omega_den: int = 0):
        t = _clean({int(k): _frac(v) for k, v in (terms or {}).items()})
        if omega_den < 0:
            for _ in range(-omega_den):
                t = _mul_terms(t, _OMEGA_TERMS)
            omega_den = 0
        while omega_den > 0 and t and _divisible_by_omega(t):
            t = _divide_by_omega(t)
            omega_den -= 1
        if not t:
            omega_den = 0
        self.terms = t
        self.omega_den = omega_den
        self._hash = None

    # constructors ---------------------------------------------------------
    @classmethod
    def const(cls, c: Number) -> "LaurentU":
        return cls({0: c})

    @classmethod
    def u_power(cls, k: int, c: Number = 1) -> "LaurentU":
        return cls({k: c})

    @classmethod
    def q_power(cls, x, c: Number = 1) -> "LaurentU":
        return cls({eighths(x): c})

    @classmethod
    def omega(cls) -> "LaurentU":
        return cls(_OMEGA_TERMS)

    @classmethod
    def q_number(cls, x) -> "LaurentU":
        """Exact ``[x]`` as ``(q**x - q**-x) / omega``."""
        k = eighths(x)
        return cls({k: 1, -k: -1}, omega_den=1)

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_unit(self) -> bool:
        return len(self.terms) == 1

    # arithmetic -----------------------------------------------------------
    def _lift(self, den: int) -> Dict[int, Fraction]:
        t = self.terms
        for _ in range(den - self.omega_den):
            t = _mul_terms(t, _OMEGA_TERMS)
        return t

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        den = max(self.omega_den, other.omega_den)
        a, b = self._lift(den), other._lift(den)
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, 0) + v
        return LaurentU(out, den)

    __radd__ = __add__

    def __neg__(self):
        return LaurentU({k: -v for k, v in self.terms.items()}, self.omega_den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return LaurentU(_mul_terms(self.terms, other.terms), self.omega_den + other.omega_den)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentU":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit of the coefficient ring")
        (k, c), = self.terms.items()
        inv = LaurentU({-k: 1 / c})
        for _ in range(self.omega_den):
            inv = inv * LaurentU.omega()
        return inv

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = LaurentU.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divide_by_omega(self) -> "LaurentU":
        return LaurentU(self.terms, self.omega_den + 1)

    def conjugate(self, mode: str = "real") -> "LaurentU":
        """Complex conjugation of the coefficient at a point of the given mode.

        Real q: u is real, nothing changes.  Unit circle: u -> 1/u, which
        also sends omega to -omega.
        """
        if mode == "real":
            return self
        sign = -1 if self.omega_den % 2 else 1
        return LaurentU({-k: sign * v for k, v in self.terms.items()}, self.omega_den)

    # evaluation -----------------------------------------------------------
    def evaluate(self, qp: AnyPoint):
        if qp.classical:
            if self.omega_den:
                raise ZeroDivisionError("omega vanishes at the classical point")
            return complex(sum(self.terms.values()))
        u = complex(qp.u)
        val = sum(complex(v) * u ** k for k, v in self.terms.items())
        if self.omega_den:
            val /= complex(qp.omega) ** self.omega_den
        return val

    # comparison / display -------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self.omega_den == other.omega_den and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.terms.items()), self.omega_den))
        return self._hash

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            mono = "" if k == 0 else (f"u^{k}" if k != 1 else "u")
            if mono and c == 1:
                parts.append(mono)
            elif mono and c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}{'*' + mono if mono else ''}")
        s = " + ".join(parts).replace("+ -", "- ")
        if self.omega_den:
            s = f"({s})/omega" + (f"^{self.omega_den}" if self.omega_den > 1 else "")
        return s


_OMEGA_TERMS = {8: Fraction(1), -8: Fraction(-1)}


def _mul_terms(a: Mapping[int, Fraction], b: Mapping[int, Fraction]) -> Dict[int, Fraction]:
    out: Dict[int, Fraction] = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            out[ka + kb] = out.get(ka + kb, 0) + va * vb
    return _clean(out)


def _coerce(x):
    if isinstance(x, LaurentU):
        return x
    if isinstance(x, (int, Fraction, np.integer)):
        return LaurentU.const(x)
    return NotImplemented


def laurent_arith(x: LaurentU, y: LaurentU | None, op: str) -> LaurentU:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    raise ValueError(f"unknown op {op!r}")


def laurent_eval(x: LaurentU, qp: AnyPoint):
    return x.evaluate(qp)


def check_q_identity(a, b, qp: AnyPoint, tol: float = 1e-12):
    """Residual of ``[a] q**b + [b] q**-a - [a+b]`` at ``qp``."""
    from .report import CheckReport

    a, b = _frac(a), _frac(b)
    lhs = q_number(a, qp) * qp.power(float(b)) + q_number(b, qp) * qp.power(-float(a))
    rhs = q_number(a + b, qp)
    res = abs(lhs - rhs) / max(1.0, abs(rhs))
    return CheckReport.numeric("qarith-identities", f"addition a={a} b={b}", "q-number addition",
                               res, tol, {"q": qp.label()})
