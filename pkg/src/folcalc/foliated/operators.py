"""Foliated forms valued in the complement or its dual, and the maps between
them.

Conventions, pinned once and tested everywhere:

* A G-valued (resp. G*-valued) foliated v-form is stored as components
  (m, L) -> f meaning  f * e^L (x) u_m  (resp. f * e^L (x) e^m), with m a
  transverse frame index and L an ascending leaf tuple.
* tau relabels a bidegree-(1, v) form into a G*-valued v-form without
  touching coefficients:  <tau(eta)(V_L), u_m> = eta(u_m; V_L).
* The Bott connection on the complement is nabla_V Y = pr_G [V, Y]; its dual
  acts on G* by the Leibniz rule.  Both induce Koszul differentials whose
  squares vanish.
* flat maps Y to the covector iota_Y omega restricted to the complement;
  its inverse stays in the trig ring because the transverse coefficient
  matrix of a Presymplectic has constant determinant.
* The cochain representative of the transverse differentiation map on a
  leafwise-closed k-form alpha is (-1)^k tau(d_{1,0} alpha); it is a
  bott_d_star cocycle, and on the worked T^3 geometry it reproduces the
  closed-form transverse derivative componentwise.
* phi(alpha) = (-1)^{k+1} (Id (x) flat^{-1})(tau(d_{1,0} alpha)) satisfies
  phi(d_F alpha) = -bott_d(phi(alpha)).
"""

from __future__ import annotations

from itertools import combinations
from typing import Dict, Tuple

from ..trig_algebra import TrigPoly
from .exterior import sort_sign
from .forms import BigradedForm, NotLeafwiseClosed, leafwise_d
from .frames import FramedTorus, mat_inverse_constant_det

CompKey = Tuple[int, tuple]


class ValuedForm:
    """Foliated form with values in the complement ('G') or its dual ('Gstar')."""

    def __init__(self, base: FramedTorus, kind: str, comps: Dict[CompKey, TrigPoly] = None):
        if kind not in ("G", "Gstar"):
            raise ValueError("kind must be 'G' or 'Gstar'")
        self.base = base
        self.kind = kind
        self.comps = {}
        if comps:
            k = base.leaf_rank
            for (m, L), f in comps.items():
                L = tuple(L)
                if not k <= m < base.dim:
                    raise ValueError(f"value index {m} is not transverse")
                if any(not 0 <= l < k for l in L) or list(L) != sorted(set(L)):
                    raise ValueError(f"bad leaf legs {L}")
                if not f.is_zero():
                    cur = self.comps.get((m, L))
                    s = f if cur is None else cur + f
                    if s.is_zero():
                        self.comps.pop((m, L), None)
                    else:
                        self.comps[(m, L)] = s

    def degree(self) -> int:
        degs = {len(L) for _, L in self.comps}
        if len(degs) > 1:
            raise ValueError("inhomogeneous valued form")
        return degs.pop() if degs else 0

    def is_zero(self) -> bool:
        return not self.comps

    def __add__(self, other: "ValuedForm") -> "ValuedForm":
        if self.kind != other.kind:
            raise ValueError("cannot add G-valued and G*-valued forms")
        out = dict(self.comps)
        for key, f in other.comps.items():
            cur = out.get(key)
            s = f if cur is None else cur + f
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return ValuedForm(self.base, self.kind, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ValuedForm(self.base, self.kind, {key: -f for key, f in self.comps.items()})

    def scale(self, r) -> "ValuedForm":
        return ValuedForm(self.base, self.kind, {key: f.scale(r) for key, f in self.comps.items()})

    def __eq__(self, other):
        return (
            isinstance(other, ValuedForm)
            and self.kind == other.kind
            and (self.base is other.base or self.base.same_frame(other.base))
            and self.comps == other.comps
        )

    def eval_leaf(self, m: int, indices) -> TrigPoly:
        """Component on value index m evaluated on leaf frame fields."""
        sign, key = sort_sign(indices)
        if sign == 0:
            return TrigPoly.zero(self.base.dim)
        f = self.comps.get((m, key))
        if f is None:
            return TrigPoly.zero(self.base.dim)
        return f if sign > 0 else -f

    def __repr__(self):
        return f"ValuedForm({self.kind}; " + ", ".join(
            f"{key}: {f!r}" for key, f in sorted(self.comps.items())
        ) + ")"


# -- tau -------------------------------------------------------------------


def tau(form: BigradedForm) -> ValuedForm:
    """Relabel a bidegree-(1, v) form as a G*-valued v-form (coefficients unchanged)."""
    for (T, L) in form.blocks:
        if len(T) != 1:
            raise ValueError("tau expects a bidegree (1, v) form")
    return ValuedForm(form.base, "Gstar", {(T[0], L): f for (T, L), f in form.blocks.items()})


def tau_inv(vf: ValuedForm) -> BigradedForm:
    if vf.kind != "Gstar":
        raise ValueError("tau_inv expects a G*-valued form")
    return BigradedForm(vf.base, {((m,), L): f for (m, L), f in vf.comps.items()})


# -- Bott differentials ------------------------------------------------------


def _nabla_G(base: FramedTorus, i: int, section: Dict[int, TrigPoly]) -> Dict[int, TrigPoly]:
    """Bott connection along leaf field i of a G-section {m: coefficient}."""
    k, n = base.leaf_rank, base.dim
    out = {}
    for m, g in section.items():
        if g.is_zero():
            continue
        d = base.apply_field(i, g)
        if not d.is_zero():
            out[m] = out.get(m, TrigPoly.zero(n)) + d
        comps = base.structure(i, m)  # [V_i, Y_m] in the frame
        for l in range(k, n):
            c = comps[l]
            if c.is_zero():
                continue
            out[l] = out.get(l, TrigPoly.zero(n)) + g * c
    return {m: f for m, f in out.items() if not f.is_zero()}


def _nabla_Gstar(base: FramedTorus, i: int, section: Dict[int, TrigPoly]) -> Dict[int, TrigPoly]:
    """Dual Bott connection: <nabla* xi, Y_l> = V_i<xi, Y_l> - <xi, pr_G[V_i, Y_l]>."""
    k, n = base.leaf_rank, base.dim
    out = {}
    for l in range(k, n):
        acc = TrigPoly.zero(n)
        g = section.get(l)
        if g is not None and not g.is_zero():
            acc = acc + base.apply_field(i, g)
        comps = base.structure(i, l)
        for m in range(k, n):
            gm = section.get(m)
            if gm is None or gm.is_zero() or comps[m].is_zero():
                continue
            acc = acc - gm * comps[m]
        if not acc.is_zero():
            out[l] = acc
    return out


def _bott_koszul(vf: ValuedForm, nabla) -> ValuedForm:
    base = vf.base
    k, n = base.leaf_rank, base.dim
    v = vf.degree()
    out = {}
    for J in combinations(range(k), v + 1):
        # value of the Koszul sum on (V_{J[0]}, ..., V_{J[v]}) as a G(*)-section
        section = {}
        for a, ja in enumerate(J):
            rest = J[:a] + J[a + 1 :]
            inner = {m: vf.eval_leaf(m, rest) for m in range(k, n)}
            inner = {m: f for m, f in inner.items() if not f.is_zero()}
            nb = nabla(base, ja, inner)
            for m, f in nb.items():
                term = f if a % 2 == 0 else -f
                section[m] = section.get(m, TrigPoly.zero(n)) + term
        for a in range(v + 1):
            for b in range(a + 1, v + 1):
                comps = base.structure(J[a], J[b])
                rest = J[:a] + J[a + 1 : b] + J[b + 1 :]
                for mm in range(k):
                    c = comps[mm]
                    if c.is_zero():
                        continue
                    for m in range(k, n):
                        val = vf.eval_leaf(m, (mm,) + rest)
                        if val.is_zero():
                            continue
                        term = c * val
                        term = term if (a + b) % 2 == 0 else -term
                        section[m] = section.get(m, TrigPoly.zero(n)) + term
        for m, f in section.items():
            if not f.is_zero():
                out[(m, J)] = f
    return ValuedForm(base, vf.kind, out)


def bott_d(vf: ValuedForm) -> ValuedForm:
    """Bott-complex differential on G-valued foliated forms."""
    if vf.kind != "G":
        raise ValueError("bott_d expects a G-valued form")
    return _bott_koszul(vf, _nabla_G)


def bott_d_star(vf: ValuedForm) -> ValuedForm:
    """Bott-complex differential on G*-valued foliated forms."""
    if vf.kind != "Gstar":
        raise ValueError("bott_d_star expects a G*-valued form")
    return _bott_koszul(vf, _nabla_Gstar)


# -- presymplectic structure ---------------------------------------------------


class NotPresymplectic(ValueError):
    pass


class Presymplectic:
    """A closed (2,0) form whose transverse coefficient matrix is invertible.

    The matrix B holds B[i][j] = omega(Y_{k+i}, Y_{k+j}); flat sends a G
    section with coefficients a to the G* covector with coefficients B^T a,
    and flat_inv applies the exact inverse (constant determinant).
    """

    def __init__(self, base: FramedTorus, omega: BigradedForm):
        if omega.base is not base and not omega.base.same_frame(base):
            raise ValueError("omega is not defined on the given frame")
        if omega.blocks and omega.bidegrees() != [(2, 0)]:
            raise NotPresymplectic("omega must have pure bidegree (2,0)")
        self.base = base
        self.omega = omega
        if not omega.exterior_d().is_zero():
            raise NotPresymplectic("omega is not closed")
        for i in range(base.leaf_rank):
            if not omega.contract_frame(i).is_zero():
                raise NotPresymplectic("omega is not annihilated by the leaf fields")
        k, n = base.leaf_rank, base.dim
        q = n - k
        self._B = [[TrigPoly.zero(n) for _ in range(q)] for _ in range(q)]
        for (T, L), f in omega.blocks.items():
            a, b = T[0] - k, T[1] - k
            self._B[a][b] = f
            self._B[b][a] = -f
        if q > 0:
            BT = [[self._B[j][i] for j in range(q)] for i in range(q)]
            try:
                self._BT_inv = mat_inverse_constant_det(BT)
            except Exception as e:
                raise NotPresymplectic(f"transverse coefficient matrix not ring-invertible: {e}")
        else:
            self._BT_inv = []

    def transverse_matrix(self):
        return self._B

    def flat(self, vf: ValuedForm) -> ValuedForm:
        """(Id (x) flat): G-valued to G*-valued, exact."""
        if vf.kind != "G":
            raise ValueError("flat expects a G-valued form")
        k, n = self.base.leaf_rank, self.base.dim
        out = {}
        for (m, L), f in vf.comps.items():
            for l in range(k, n):
                c = self._B[m - k][l - k]
                if c.is_zero():
                    continue
                key = (l, L)
                cur = out.get(key)
                term = f * c
                out[key] = term if cur is None else cur + term
        return ValuedForm(self.base, "Gstar", out)

    def flat_inv(self, vf: ValuedForm) -> ValuedForm:
        """(Id (x) flat^{-1}): G*-valued to G-valued, exact."""
        if vf.kind != "Gstar":
            raise ValueError("flat_inv expects a G*-valued form")
        k, n = self.base.leaf_rank, self.base.dim
        out = {}
        for (l, L), f in vf.comps.items():
            for m in range(k, n):
                c = self._BT_inv[m - k][l - k]
                if c.is_zero():
                    continue
                key = (m, L)
                cur = out.get(key)
                term = f * c
                out[key] = term if cur is None else cur + term
        return ValuedForm(self.base, "G", out)


# -- transverse differentiation and the conormal-direction map -------------------


def d10_of_foliated(alpha: BigradedForm) -> BigradedForm:
    """(1, v) component of d applied to a foliated form."""
    if not alpha.is_foliated():
        raise ValueError("expected a foliated form")
    if alpha.is_zero():
        return alpha
    _, v = alpha.bidegree()
    return alpha.exterior_d().homogeneous_part(1, v)


def d_nu_rep(alpha: BigradedForm) -> ValuedForm:
    """Cochain representative of the transverse differentiation map.

    For a leafwise-closed foliated k-form returns (-1)^k tau(d_{1,0} alpha),
    a bott_d_star cocycle.  Raises NotLeafwiseClosed otherwise.
    """
    if not leafwise_d(alpha).is_zero():
        raise NotLeafwiseClosed("input form is not leafwise closed")
    if alpha.is_zero():
        return ValuedForm(alpha.base, "Gstar", {})
    _, k = alpha.bidegree()
    rep = tau(d10_of_foliated(alpha))
    return rep if k % 2 == 0 else -rep


def phi_map(pres: Presymplectic, alpha: BigradedForm) -> ValuedForm:
    """First-order foliation deformation induced by a foliated form.

    phi(alpha) = (-1)^{k+1} (Id (x) flat^{-1})(tau(d_{1,0} alpha)); satisfies
    phi(d_F alpha) = -bott_d(phi(alpha)).
    """
    if alpha.is_zero():
        return ValuedForm(pres.base, "G", {})
    _, k = alpha.bidegree()
    val = pres.flat_inv(tau(d10_of_foliated(alpha)))
    return -val if k % 2 == 0 else val


def pairing(a: ValuedForm, b: ValuedForm) -> BigradedForm:
    """Duality pairing of a G-valued p-form with a G*-valued q-form.

    <<eta (x) Y, xi (x) gamma>> = <gamma, Y> eta ^ xi, extended bilinearly;
    the result is a foliated (p+q)-form.
    """
    if a.kind != "G" or b.kind != "Gstar":
        raise ValueError("pairing expects (G-valued, G*-valued)")
    if a.base is not b.base and not a.base.same_frame(b.base):
        raise ValueError("pairing operands live on different framed tori")
    from .exterior import merge_sign

    out = {}
    for (m, J), f in a.comps.items():
        for (l, K), g in b.comps.items():
            if m != l:
                continue  # <e^l, u_m> = delta
            sign, legs = merge_sign(J, K)
            if sign == 0:
                continue
            term = f * g
            key = ((), legs)
            cur = out.get(key)
            term = term if sign > 0 else -term
            out[key] = term if cur is None else cur + term
    return BigradedForm(a.base, out)
