"""Adapted frames on foliated tori.

A FramedTorus fixes a global frame of vector fields on T^n with trig
polynomial coefficients: the first `leaf_rank` fields span the (involutive)
leaf distribution, the remaining fields span the chosen complement.  The
frame determinant must be a nonzero constant so that the dual coframe again
has trig polynomial entries; every example geometry in scope satisfies this.
"""

from __future__ import annotations

from typing import Sequence

from .._rational import CQ
from ..trig_algebra import TrigPoly


class FrameNotUnimodular(ValueError):
    """Frame determinant is zero or non-constant."""


class NotInvolutive(ValueError):
    """The leafwise fields do not close under the Lie bracket."""


def mat_det(m: Sequence[Sequence[TrigPoly]]) -> TrigPoly:
    """Determinant of a square TrigPoly matrix (cofactor expansion)."""
    n = len(m)
    if n == 0:
        raise ValueError("empty matrix")
    dim = m[0][0].dim

    def rec(rows, cols):
        if len(rows) == 1:
            return m[rows[0]][cols[0]]
        r = rows[0]
        acc = TrigPoly.zero(dim)
        for pos, c in enumerate(cols):
            e = m[r][c]
            if e.is_zero():
                continue
            sub = rec(rows[1:], cols[:pos] + cols[pos + 1 :])
            term = e * sub
            acc = acc + (term if pos % 2 == 0 else -term)
        return acc

    return rec(tuple(range(n)), tuple(range(n)))


def mat_adjugate(m: Sequence[Sequence[TrigPoly]]):
    """Adjugate matrix: adj(m)[i][j] = (-1)^{i+j} * minor_{ji}."""
    n = len(m)
    dim = m[0][0].dim
    if n == 1:
        return [[TrigPoly.const(dim, 1)]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            rows = tuple(r for r in range(n) if r != j)
            cols = tuple(c for c in range(n) if c != i)
            minor = mat_det([[m[r][c] for c in cols] for r in rows])
            adj[i][j] = minor if (i + j) % 2 == 0 else -minor
    return adj


def mat_inverse_constant_det(m: Sequence[Sequence[TrigPoly]]):
    """Inverse of a TrigPoly matrix with constant nonzero determinant.

    Raises FrameNotUnimodular when the determinant is non-constant or zero
    (the inverse would leave the trig polynomial ring).
    """
    det = mat_det(m)
    if det.is_zero() or not det.is_constant():
        raise FrameNotUnimodular(f"determinant {det!r} is not a nonzero constant")
    d = det.constant_value()
    if d.im != 0:
        raise FrameNotUnimodular("determinant is not real")  # cannot happen for real entries
    inv_d = CQ(1) / d
    adj = mat_adjugate(m)
    n = len(m)
    dim = m[0][0].dim
    return [[TrigPoly(dim, {k: c * inv_d for k, c in adj[i][j].coeffs.items()}, _raw=True) for j in range(n)] for i in range(n)]


def dual_coframe(frame_columns):
    """Coframe rows E with E . F = Id for frame columns F (exact)."""
    n = len(frame_columns)
    F = [[frame_columns[j][a] for j in range(n)] for a in range(n)]  # F[a][j]
    return mat_inverse_constant_det(F)


class FramedTorus:
    """Torus dimension, leaf rank, and an adapted frame.

    fields[j] lists the coordinate components of the j-th frame field;
    fields 0..leaf_rank-1 are leafwise, the rest span the complement.
    coframe[i] lists the coordinate components of the dual coframe element.
    """

    def __init__(self, dim: int, leaf_rank: int, fields: Sequence[Sequence[TrigPoly]]):
        if not 0 < leaf_rank <= dim:
            raise ValueError("leaf rank must be in 1..dim")
        if len(fields) != dim or any(len(f) != dim for f in fields):
            raise ValueError("frame must be a dim x dim table")
        self.dim = dim
        self.leaf_rank = leaf_rank
        self.fields = tuple(tuple(f) for f in fields)
        self.coframe = dual_coframe(self.fields)
        self._structure = {}
        self._check_duality()
        self._check_involutive()

    # -- validation ----------------------------------------------------------

    def _check_duality(self):
        n = self.dim
        for i in range(n):
            for j in range(n):
                s = TrigPoly.zero(n)
                for a in range(n):
                    s = s + self.coframe[i][a] * self.fields[j][a]
                want = TrigPoly.const(n, 1 if i == j else 0)
                if s != want:
                    raise FrameNotUnimodular("coframe . frame != identity")

    def _check_involutive(self):
        k = self.leaf_rank
        for i in range(k):
            for j in range(i + 1, k):
                comps = self.structure(i, j)
                for m in range(k, self.dim):
                    if not comps[m].is_zero():
                        raise NotInvolutive(
                            f"[V_{i}, V_{j}] has a component on complement field {m}"
                        )

    # -- frame calculus --------------------------------------------------------

    def apply_field(self, j: int, f: TrigPoly) -> TrigPoly:
        """Derivative of f along frame field j (exact)."""
        out = TrigPoly.zero(self.dim)
        for a in range(self.dim):
            comp = self.fields[j][a]
            if comp.is_zero():
                continue
            out = out + comp * f.partial(a)
        return out

    def bracket_coords(self, i: int, j: int):
        """Coordinate components of [u_i, u_j]."""
        n = self.dim
        out = []
        for a in range(n):
            acc = TrigPoly.zero(n)
            for b in range(n):
                xb = self.fields[i][b]
                yb = self.fields[j][b]
                if not xb.is_zero():
                    acc = acc + xb * self.fields[j][a].partial(b)
                if not yb.is_zero():
                    acc = acc - yb * self.fields[i][a].partial(b)
            out.append(acc)
        return out

    def structure(self, i: int, j: int):
        """Frame components of [u_i, u_j]: [u_i,u_j] = sum_m c^m u_m (exact)."""
        key = (i, j)
        if key not in self._structure:
            coords = self.bracket_coords(i, j)
            comps = []
            for m in range(self.dim):
                acc = TrigPoly.zero(self.dim)
                for a in range(self.dim):
                    if not coords[a].is_zero() and not self.coframe[m][a].is_zero():
                        acc = acc + self.coframe[m][a] * coords[a]
                comps.append(acc)
            self._structure[key] = comps
            self._structure[(j, i)] = [-c for c in comps]
        return self._structure[key]

    def is_complement_involutive(self) -> bool:
        k, n = self.leaf_rank, self.dim
        for i in range(k, n):
            for j in range(i + 1, n):
                comps = self.structure(i, j)
                if any(not comps[m].is_zero() for m in range(k)):
                    return False
        return True

    def leaf_indices(self):
        return range(self.leaf_rank)

    def transverse_indices(self):
        return range(self.leaf_rank, self.dim)

    def same_frame(self, other: "FramedTorus") -> bool:
        return (
            self.dim == other.dim
            and self.leaf_rank == other.leaf_rank
            and self.fields == other.fields
        )

    def __repr__(self):
        return f"FramedTorus(dim={self.dim}, leaf_rank={self.leaf_rank})"
