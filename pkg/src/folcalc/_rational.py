"""Exact rational and complex-rational scalars.

Every symbolic identity in this package (d² = 0, chain maps, bracket
equalities) is asserted as exact coefficient equality, so coefficients are
rationals, never floats.  gmpy2.mpq is used when available (it is much faster
than fractions.Fraction); the Fraction fallback keeps the package usable
without it.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

QLike = object  # int, str "p/q", or Q


def rat(x) -> Q:
    """Coerce an int, Q, or "p/q" string to an exact rational."""
    if isinstance(x, str):
        return Q(x)
    return Q(x)


def rat_str(x: Q) -> str:
    """Serialize a rational as "p/q" (or "p" when the denominator is 1)."""
    return str(x)


class CQ:
    """A complex number with exact rational real and imaginary parts.

    Immutable.  Supports the field operations; division raises
    ZeroDivisionError on zero.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", rat(re))
        object.__setattr__(self, "im", rat(im))

    def __setattr__(self, *a):
        raise AttributeError("CQ is immutable")

    # -- field operations -------------------------------------------------

    def __add__(self, other: "CQ") -> "CQ":
        return CQ(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "CQ") -> "CQ":
        return CQ(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "CQ") -> "CQ":
        return CQ(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other: "CQ") -> "CQ":
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero CQ")
        return CQ(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __neg__(self) -> "CQ":
        return CQ(-self.re, -self.im)

    def conj(self) -> "CQ":
        return CQ(self.re, -self.im)

    def scale(self, r) -> "CQ":
        r = rat(r)
        return CQ(self.re * r, self.im * r)

    # -- predicates / conversions -----------------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __eq__(self, other) -> bool:
        return isinstance(other, CQ) and self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"CQ({self.re!s}, {self.im!s})"


CQ_ZERO = CQ(0, 0)
CQ_ONE = CQ(1, 0)
CQ_I = CQ(0, 1)


def cq(re=0, im=0) -> CQ:
    if isinstance(re, CQ):
        return re
    return CQ(re, im)
