"""Exact real trigonometric polynomials on the n-torus.

A TrigPoly is a finitely supported table of Fourier coefficients

    f(theta) = sum_k  c_k  exp(i k . theta),     k in Z^n,

with c_k complex rational and Hermitian symmetry c_{-k} = conj(c_k), so f is
real-valued.  Tables are canonical: zero coefficients are never stored and
equality is table equality.  All arithmetic is exact; floating point only
enters through the evaluation helpers.

Division is exact Laurent-polynomial division after the substitution
z = exp(i theta): a univariate trig polynomial of frequency spread [m, M] is
sum_{m<=j<=M} c_j z^j, and f = q*g in the trig ring iff the shifted ordinary
polynomial division leaves no remainder.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Optional

import numpy as np

from ._rational import CQ, CQ_ZERO, cq, rat, rat_str


class DimensionMismatch(ValueError):
    pass


class NoQuotient(Exception):
    """Raised by div_exact when no exact quotient exists in the ring."""


class TrigPoly:
    """Real trigonometric polynomial on T^dim with exact coefficients."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs: Optional[Mapping[tuple, CQ]] = None, *, _raw=False):
        if dim < 1:
            raise ValueError("dim must be positive")
        object.__setattr__(self, "dim", dim)
        table = {}
        if coeffs:
            for k, c in coeffs.items():
                k = tuple(int(a) for a in k)
                if len(k) != dim:
                    raise DimensionMismatch(f"index {k} has length {len(k)}, expected {dim}")
                if not isinstance(c, CQ):
                    c = cq(c)
                if not c.is_zero():
                    table[k] = table[k] + c if k in table else c
            table = {k: c for k, c in table.items() if not c.is_zero()}
        object.__setattr__(self, "coeffs", table)
        if not _raw:
            self._check_hermitian()

    def __setattr__(self, *a):
        raise AttributeError("TrigPoly is immutable")

    def _check_hermitian(self):
        for k, c in self.coeffs.items():
            mk = tuple(-a for a in k)
            cm = self.coeffs.get(mk)
            if cm is None or cm != c.conj():
                raise ValueError(f"coefficient table is not Hermitian at mode {k}")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(dim: int) -> "TrigPoly":
        return TrigPoly(dim, {}, _raw=True)

    @staticmethod
    def const(dim: int, value) -> "TrigPoly":
        z = (0,) * dim
        return TrigPoly(dim, {z: cq(value)})

    @staticmethod
    def cosine(dim: int, axis: int, freq: int = 1, amplitude=1) -> "TrigPoly":
        """amplitude * cos(freq * theta_axis)."""
        if freq == 0:
            return TrigPoly.const(dim, amplitude)
        k = [0] * dim
        k[axis] = freq
        half = cq(rat(amplitude) / 2)
        return TrigPoly(dim, {tuple(k): half, tuple(-a for a in k): half})

    @staticmethod
    def sine(dim: int, axis: int, freq: int = 1, amplitude=1) -> "TrigPoly":
        """amplitude * sin(freq * theta_axis)."""
        if freq == 0:
            return TrigPoly.zero(dim)
        k = [0] * dim
        k[axis] = freq
        half = CQ(0, -rat(amplitude) / 2)  # sin t = (e^{it} - e^{-it}) / 2i
        return TrigPoly(dim, {tuple(k): half, tuple(-a for a in k): half.conj()})

    @staticmethod
    def from_records(dim: int, records: Iterable[Mapping]) -> "TrigPoly":
        """Build from serialized records {"k": [...], "re": "p/q", "im": "p/q"}."""
        table = {}
        for rec in records:
            k = tuple(int(a) for a in rec["k"])
            table[k] = CQ(rat(rec.get("re", 0)), rat(rec.get("im", 0)))
        return TrigPoly(dim, table)

    # -- ring operations ----------------------------------------------------

    def _binop_check(self, other):
        if not isinstance(other, TrigPoly):
            raise TypeError(f"expected TrigPoly, got {type(other).__name__}")
        if self.dim != other.dim:
            raise DimensionMismatch(f"dim {self.dim} vs {other.dim}")

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        self._binop_check(other)
        table = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = table.get(k, CQ_ZERO) + c
            if s.is_zero():
                table.pop(k, None)
            else:
                table[k] = s
        return TrigPoly(self.dim, table, _raw=True)

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self + (-other)

    def __neg__(self) -> "TrigPoly":
        return TrigPoly(self.dim, {k: -c for k, c in self.coeffs.items()}, _raw=True)

    def __mul__(self, other: "TrigPoly") -> "TrigPoly":
        """Pointwise product; support is the Minkowski sum of supports."""
        self._binop_check(other)
        table = {}
        for ka, ca in self.coeffs.items():
            for kb, cb in other.coeffs.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                p = ca * cb
                s = table.get(k)
                table[k] = p if s is None else s + p
        table = {k: c for k, c in table.items() if not c.is_zero()}
        return TrigPoly(self.dim, table, _raw=True)

    def scale(self, r) -> "TrigPoly":
        """Multiply by an exact rational scalar."""
        r = rat(r)
        if r == 0:
            return TrigPoly.zero(self.dim)
        return TrigPoly(self.dim, {k: c.scale(r) for k, c in self.coeffs.items()}, _raw=True)

    # -- calculus ------------------------------------------------------------

    def partial(self, axis: int) -> "TrigPoly":
        """Exact partial derivative along the given torus axis."""
        if not 0 <= axis < self.dim:
            raise ValueError(f"axis {axis} out of range for dim {self.dim}")
        table = {}
        for k, c in self.coeffs.items():
            if k[axis] != 0:
                table[k] = c * CQ(0, k[axis])  # multiply by i*k[axis]
        return TrigPoly(self.dim, table, _raw=True)

    def average(self, axes: Iterable[int]) -> "TrigPoly":
        """Exact mean over the given circle factors.

        Keeps only the modes with zero frequency on each axis in `axes`.
        """
        axes = set(axes)
        for a in axes:
            if not 0 <= a < self.dim:
                raise ValueError(f"axis {a} out of range for dim {self.dim}")
        table = {k: c for k, c in self.coeffs.items() if all(k[a] == 0 for a in axes)}
        return TrigPoly(self.dim, table, _raw=True)

    def div_exact(self, other: "TrigPoly") -> "TrigPoly":
        """Exact quotient in the trig-polynomial ring, or raise NoQuotient.

        Both operands must be univariate on the same axis.  The quotient, when
        it exists, satisfies q * other == self exactly.
        """
        self._binop_check(other)
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero trig polynomial")
        axis_f = self.support_axes()
        axis_g = other.support_axes()
        if len(axis_f) > 1 or len(axis_g) > 1:
            raise ValueError("div_exact requires univariate operands")
        if not self.coeffs:
            return TrigPoly.zero(self.dim)
        axis = (axis_f | axis_g).pop() if (axis_f | axis_g) else None
        if axis is None:
            # both constants
            table = {(0,) * self.dim: self.coeffs[(0,) * self.dim] / other.coeffs[(0,) * self.dim]}
            return TrigPoly(self.dim, table, _raw=True)
        if axis_f and axis_g and axis_f != axis_g:
            raise ValueError("div_exact operands live on different axes")

        fz = {k[axis]: c for k, c in self.coeffs.items()}
        gz = {k[axis]: c for k, c in other.coeffs.items()}
        qz = _laurent_div(fz, gz)
        if qz is None:
            raise NoQuotient(f"{self!r} is not divisible by {other!r}")
        table = {}
        for j, c in qz.items():
            k = [0] * self.dim
            k[axis] = j
            table[tuple(k)] = c
        return TrigPoly(self.dim, table, _raw=True)

    # -- inspection / evaluation ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return all(all(a == 0 for a in k) for k in self.coeffs)

    def constant_value(self) -> CQ:
        """The value of a constant trig polynomial (raises if non-constant)."""
        if not self.coeffs:
            return CQ_ZERO
        if not self.is_constant():
            raise ValueError("not a constant trig polynomial")
        return self.coeffs[(0,) * self.dim]

    def support_axes(self) -> set:
        return {a for k in self.coeffs for a in range(self.dim) if k[a] != 0}

    def max_frequency(self) -> int:
        """Largest |k_a| over the support (0 for constants and zero)."""
        return max((abs(a) for k in self.coeffs for a in k), default=0)

    def depends_on(self, axis: int) -> bool:
        return any(k[axis] != 0 for k in self.coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TrigPoly)
            and self.dim == other.dim
            and self.coeffs == other.coeffs
        )

    def __call__(self, theta) -> float:
        """Evaluate at a point (sequence of floats)."""
        total = 0.0
        for k, c in self.coeffs.items():
            ph = sum(a * t for a, t in zip(k, theta))
            total += float(c.re) * np.cos(ph) - float(c.im) * np.sin(ph)
        return total

    def eval_many(self, theta: np.ndarray) -> np.ndarray:
        """Evaluate at a batch of points, shape (N, dim) -> (N,)."""
        from ._kernels import trig_eval

        K, cre, cim = self.mode_arrays()
        return trig_eval(K, cre, cim, np.ascontiguousarray(theta, dtype=np.float64))

    def mode_arrays(self):
        """(K, cre, cim) arrays for the numeric kernels; deterministic order."""
        ks = sorted(self.coeffs)
        K = np.array(ks, dtype=np.int64).reshape(len(ks), self.dim)
        cre = np.array([float(self.coeffs[k].re) for k in ks], dtype=np.float64)
        cim = np.array([float(self.coeffs[k].im) for k in ks], dtype=np.float64)
        return K, cre, cim

    def to_records(self) -> list:
        """Serialize as a list of {"k", "re", "im"} records, deterministic order."""
        return [
            {"k": list(k), "re": rat_str(c.re), "im": rat_str(c.im)}
            for k, c in sorted(self.coeffs.items())
        ]

    def __repr__(self):
        if not self.coeffs:
            return f"TrigPoly.zero({self.dim})"
        parts = [f"{k}:{c.re!s}{'+' if c.im >= 0 else ''}{c.im!s}i" for k, c in sorted(self.coeffs.items())]
        return f"TrigPoly({self.dim}; " + ", ".join(parts) + ")"


def _laurent_div(f: dict, g: dict):
    """Divide Laurent polynomials (exponent -> CQ); return quotient dict or None.

    f and g are nonzero.  Shift both to ordinary polynomials with nonzero
    constant term, long-divide over the field of complex rationals, and shift
    back; a nonzero remainder means no Laurent quotient exists.
    """
    mf, Mf = min(f), max(f)
    mg, Mg = min(g), max(g)
    if Mf - mf < Mg - mg:
        return None
    fp = [f.get(mf + j, CQ_ZERO) for j in range(Mf - mf + 1)]
    gp = [g.get(mg + j, CQ_ZERO) for j in range(Mg - mg + 1)]
    dq = len(fp) - len(gp)
    lead = gp[-1]
    quo = [CQ_ZERO] * (dq + 1)
    rem = list(fp)
    for j in range(dq, -1, -1):
        c = rem[j + len(gp) - 1] / lead
        quo[j] = c
        if not c.is_zero():
            for t, gc in enumerate(gp):
                rem[j + t] = rem[j + t] - c * gc
    if any(not r.is_zero() for r in rem):
        return None
    shift = mf - mg
    return {shift + j: c for j, c in enumerate(quo) if not c.is_zero()}


# -- spec-level operation aliases ------------------------------------------


def tp_mul(a: TrigPoly, b: TrigPoly) -> TrigPoly:
    return a * b


def tp_partial(f: TrigPoly, axis: int) -> TrigPoly:
    return f.partial(axis)


def tp_average(f: TrigPoly, axes: Iterable[int]) -> TrigPoly:
    return f.average(axes)


def tp_div_exact(f: TrigPoly, g: TrigPoly) -> TrigPoly:
    return f.div_exact(g)
