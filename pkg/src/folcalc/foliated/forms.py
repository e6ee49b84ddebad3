"""Bigraded differential forms in an adapted coframe.

A form is stored per bidegree block: the key (T, L) holds the coefficient of
e^{t_1} ^ ... ^ e^{t_u} ^ e^{l_1} ^ ... ^ e^{l_v}, transverse coframe legs
first, both index tuples strictly increasing.  Leaf indices run 0..k-1 and
transverse indices k..n-1, matching the frame ordering.

The exterior derivative is computed exactly by converting to the coordinate
basis (where d is trivial) and back; both conversions stay inside the trig
polynomial ring because frames have constant determinant.  Its bihomogeneous
pieces of bidegree (0,1), (1,0) and (2,-1) are exposed by d_components; the
(0,1) piece restricted to purely leafwise forms is the leafwise differential,
which is also implemented directly via the Koszul formula (the two routes are
cross-checked in the tests, the Koszul one being much faster inside linear
solvers).
"""

from __future__ import annotations

from itertools import combinations
from typing import Dict, Tuple

from ..trig_algebra import TrigPoly
from .exterior import add_into, coord_d, merge_sign, sort_sign
from .frames import FramedTorus

BlockKey = Tuple[tuple, tuple]


class NotLeafwiseClosed(ValueError):
    """Input form is not closed under the leafwise differential."""


class BigradedForm:
    """Differential form on a framed torus, stored by bidegree blocks."""

    def __init__(self, base: FramedTorus, blocks: Dict[BlockKey, TrigPoly] = None):
        self.base = base
        self.blocks = {}
        if blocks:
            k = base.leaf_rank
            for (T, L), f in blocks.items():
                T, L = tuple(T), tuple(L)
                if any(not k <= t < base.dim for t in T) or list(T) != sorted(set(T)):
                    raise ValueError(f"bad transverse legs {T}")
                if any(not 0 <= l < k for l in L) or list(L) != sorted(set(L)):
                    raise ValueError(f"bad leaf legs {L}")
                if not f.is_zero():
                    add_into(self.blocks, (T, L), f)

    # -- structure ------------------------------------------------------------

    @staticmethod
    def zero(base: FramedTorus) -> "BigradedForm":
        return BigradedForm(base)

    def is_zero(self) -> bool:
        return not self.blocks

    def bidegrees(self):
        return sorted({(len(T), len(L)) for T, L in self.blocks})

    def is_homogeneous(self):
        return len(self.bidegrees()) <= 1

    def bidegree(self):
        degs = self.bidegrees()
        if len(degs) != 1:
            raise ValueError(f"form is not homogeneous: bidegrees {degs}")
        return degs[0]

    def homogeneous_part(self, u: int, v: int) -> "BigradedForm":
        out = {key: f for key, f in self.blocks.items() if (len(key[0]), len(key[1])) == (u, v)}
        return BigradedForm(self.base, out)

    def is_foliated(self) -> bool:
        return all(len(T) == 0 for T, _ in self.blocks)

    def is_transverse(self) -> bool:
        return all(len(L) == 0 for _, L in self.blocks)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BigradedForm)
            and (self.base is other.base or self.base.same_frame(other.base))
            and self.blocks == other.blocks
        )

    def __repr__(self):
        if not self.blocks:
            return "BigradedForm(0)"
        parts = [f"{key}: {f!r}" for key, f in sorted(self.blocks.items())]
        return "BigradedForm{" + ", ".join(parts) + "}"

    # -- linear operations -------------------------------------------------------

    def __add__(self, other: "BigradedForm") -> "BigradedForm":
        self._same_base(other)
        out = dict(self.blocks)
        for key, f in other.blocks.items():
            add_into(out, key, f)
        return BigradedForm(self.base, out)

    def __sub__(self, other: "BigradedForm") -> "BigradedForm":
        return self + (-other)

    def __neg__(self) -> "BigradedForm":
        return BigradedForm(self.base, {key: -f for key, f in self.blocks.items()})

    def scale(self, r) -> "BigradedForm":
        return BigradedForm(self.base, {key: f.scale(r) for key, f in self.blocks.items()})

    def mul_scalar(self, g: TrigPoly) -> "BigradedForm":
        return BigradedForm(self.base, {key: f * g for key, f in self.blocks.items()})

    def _same_base(self, other):
        if self.base is not other.base and not self.base.same_frame(other.base):
            raise ValueError("forms live on different framed tori")

    # -- wedge ---------------------------------------------------------------------

    def wedge(self, other: "BigradedForm") -> "BigradedForm":
        self._same_base(other)
        out = {}
        for (T1, L1), f1 in self.blocks.items():
            for (T2, L2), f2 in other.blocks.items():
                st, T = merge_sign(T1, T2)
                if st == 0:
                    continue
                sl, L = merge_sign(L1, L2)
                if sl == 0:
                    continue
                # move the second transverse group left past the first leaf group
                sign = st * sl * (-1 if (len(L1) * len(T2)) % 2 else 1)
                term = f1 * f2
                add_into(out, (T, L), term if sign > 0 else -term)
        return BigradedForm(self.base, out)

    def wedge_power(self, m: int) -> "BigradedForm":
        if m < 0:
            raise ValueError("negative wedge power")
        out = unit_form(self.base)
        for _ in range(m):
            out = out.wedge(self)
        return out

    # -- contraction with frame fields ------------------------------------------------

    def contract_frame(self, i: int) -> "BigradedForm":
        """Interior product with frame field i (e^j(u_i) = delta_ij exactly)."""
        out = {}
        for (T, L), f in self.blocks.items():
            seq = T + L
            if i not in seq:
                continue
            pos = seq.index(i)
            if pos < len(T):
                key = (T[:pos] + T[pos + 1 :], L)
            else:
                key = (T, L[: pos - len(T)] + L[pos - len(T) + 1 :])
            add_into(out, key, f if pos % 2 == 0 else -f)
        return BigradedForm(self.base, out)

    def evaluate_frame(self, indices) -> TrigPoly:
        """Evaluate on a tuple of frame fields given by index (exact).

        omega(u_a, u_b, ...) = (iota_{u_a} omega)(u_b, ...), contracting left
        to right.
        """
        out = self
        for i in indices:
            out = out.contract_frame(i)
        if out.blocks and set(out.blocks) != {((), ())}:
            raise ValueError("evaluation did not exhaust all legs")
        return out.blocks.get(((), ()), TrigPoly.zero(self.base.dim))

    # -- coordinate conversion ----------------------------------------------------------

    def to_coordinates(self) -> dict:
        """Expand into the coordinate basis {dtheta_A: TrigPoly}."""
        n = self.base.dim
        E = self.base.coframe
        out = {}
        for (T, L), f in self.blocks.items():
            seq = T + L  # wedge order of the stored block
            p = len(seq)
            if p == 0:
                add_into(out, (), f)
                continue
            for A in combinations(range(n), p):
                minor = _minor_det([[E[s][a] for a in A] for s in seq])
                if minor.is_zero():
                    continue
                add_into(out, A, f * minor)
        return out

    @staticmethod
    def from_coordinates(base: FramedTorus, coord: dict) -> "BigradedForm":
        """Expand coordinate blocks {dtheta_A: TrigPoly} in the adapted coframe."""
        n, k = base.dim, base.leaf_rank
        F = base.fields  # F[j][a]: component a of field j
        out = {}
        for A, f in coord.items():
            p = len(A)
            if p == 0:
                add_into(out, ((), ()), f)
                continue
            for S in combinations(range(n), p):
                minor = _minor_det([[F[s][a] for s in S] for a in A])
                if minor.is_zero():
                    continue
                # ascending S lists leaf indices first; stored order is transverse first
                L = tuple(s for s in S if s < k)
                T = tuple(s for s in S if s >= k)
                sign = -1 if (len(L) * len(T)) % 2 else 1
                term = f * minor
                add_into(out, (T, L), term if sign > 0 else -term)
        return BigradedForm(base, out)

    # -- differentials -------------------------------------------------------------------

    def exterior_d(self) -> "BigradedForm":
        """The de Rham differential, computed exactly through coordinates."""
        coord = self.to_coordinates()
        return BigradedForm.from_coordinates(self.base, coord_d(coord, self.base.dim))

    def d_components(self):
        """The (0,1), (1,0) and (2,-1) pieces of d on a homogeneous form."""
        u, v = self.bidegree() if self.blocks else (0, 0)
        d = self.exterior_d()
        d01 = d.homogeneous_part(u, v + 1)
        d10 = d.homogeneous_part(u + 1, v)
        d2m1 = d.homogeneous_part(u + 2, v - 1) if v >= 1 else BigradedForm.zero(self.base)
        rest = d - d01 - d10 - d2m1
        if not rest.is_zero():
            raise AssertionError("d produced blocks outside the three bidegrees")
        return d01, d10, d2m1


def unit_form(base: FramedTorus) -> BigradedForm:
    return BigradedForm(base, {((), ()): TrigPoly.const(base.dim, 1)})


def _minor_det(rows) -> TrigPoly:
    """Determinant of a small TrigPoly matrix given as row lists."""
    p = len(rows)
    if p == 1:
        return rows[0][0]
    if p == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    dim = rows[0][0].dim
    acc = TrigPoly.zero(dim)
    for j in range(p):
        e = rows[0][j]
        if e.is_zero():
            continue
        sub = _minor_det([[r[c] for c in range(p) if c != j] for r in rows[1:]])
        term = e * sub
        acc = acc + (term if j % 2 == 0 else -term)
    return acc


def leafwise_d(form: BigradedForm) -> BigradedForm:
    """Leafwise differential of a purely foliated form via the Koszul formula.

    Agrees with the (0, v+1) component of exterior_d on foliated forms; this
    direct version avoids the coordinate round trip inside linear solvers.
    """
    base = form.base
    if not form.is_foliated():
        raise ValueError("leafwise_d expects a foliated form")
    k = base.leaf_rank
    if not form.blocks:
        return BigradedForm.zero(base)
    (_, L0) = next(iter(form.blocks))
    v = len(L0)

    def ev(indices):
        sign, key = sort_sign(indices)
        if sign == 0:
            return TrigPoly.zero(base.dim)
        f = form.blocks.get(((), key))
        if f is None:
            return TrigPoly.zero(base.dim)
        return f if sign > 0 else -f

    # leafwise structure functions: [V_i, V_j] = sum_m c^m V_m
    out = {}
    for J in combinations(range(k), v + 1):
        acc = TrigPoly.zero(base.dim)
        for a, ja in enumerate(J):
            rest = J[:a] + J[a + 1 :]
            val = ev(rest)
            if not val.is_zero():
                term = base.apply_field(ja, val)
                acc = acc + (term if a % 2 == 0 else -term)
        for a in range(v + 1):
            for b in range(a + 1, v + 1):
                comps = base.structure(J[a], J[b])
                rest = J[:a] + J[a + 1 : b] + J[b + 1 :]
                for m in range(k):
                    if comps[m].is_zero():
                        continue
                    val = ev((m,) + rest)
                    if val.is_zero():
                        continue
                    term = comps[m] * val
                    acc = acc + (term if (a + b) % 2 == 0 else -term)
        if not acc.is_zero():
            out[((), J)] = acc
    return BigradedForm(base, out)
