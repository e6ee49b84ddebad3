"""The symplectic local model on T^n x R^k and its exact calculus.

Scalars on the total space are polynomials in the fiber variables y with
trig polynomial coefficients (PolyTrig); the model two-form is affine in y.
Coordinate axes are 0..n-1 for the torus and n..n+k-1 for the fiber.

Conventions:

* the fiber coordinate y_i pairs with the i-th leaf coframe element, i.e.
  the point (theta, y) is the covector sum_i y_i e^i restricted to the
  leaves; j extends leaf covectors by zero on the complement, so
  j(e^i|_leaves) is the full coframe element e^i.
* the canonical symplectic form carries the sign making the section
  pullback identity  alpha* Omega = omega_C - d(j alpha)  exact, i.e.
  Omega = p* omega_C - d(sum_i y_i p* j e^i).  On a flat splitting this is
  p* omega_C + sum_i dq_i ^ dy_i.
* the Poisson bivector of Omega is the bivector Pi with matrix -M^{-1},
  where M[a][b] = Omega(d/dx_a, d/dx_b); with these signs the vertical
  fiberwise-constant field corresponding to a foliated one-form with fiber
  components g_i is exactly sum_i g_i d/dy_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .foliated import BigradedForm, Presymplectic
from .foliated.exterior import add_into, coord_add, coord_d, coord_neg, coord_wedge, merge_sign
from .foliated.frames import mat_inverse_constant_det
from .trig_algebra import TrigPoly


class UnsupportedConfiguration(ValueError):
    pass


# -- scalars: polynomials in y with TrigPoly coefficients ------------------------


class PolyTrig:
    """sum over y-exponent tuples e of  y^e * (trig polynomial in theta)."""

    __slots__ = ("n", "k", "terms")

    def __init__(self, n: int, k: int, terms: Optional[Dict[tuple, TrigPoly]] = None):
        self.n = n
        self.k = k
        self.terms = {}
        if terms:
            for e, f in terms.items():
                e = tuple(int(a) for a in e)
                if len(e) != k or any(a < 0 for a in e):
                    raise ValueError(f"bad fiber exponent {e}")
                if not f.is_zero():
                    cur = self.terms.get(e)
                    s = f if cur is None else cur + f
                    if s.is_zero():
                        self.terms.pop(e, None)
                    else:
                        self.terms[e] = s

    @staticmethod
    def lift(f: TrigPoly, k: int) -> "PolyTrig":
        return PolyTrig(f.dim, k, {(0,) * k: f})

    @staticmethod
    def fiber_var(n: int, k: int, i: int) -> "PolyTrig":
        e = [0] * k
        e[i] = 1
        return PolyTrig(n, k, {tuple(e): TrigPoly.const(n, 1)})

    @staticmethod
    def zero_nk(n: int, k: int) -> "PolyTrig":
        return PolyTrig(n, k, {})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PolyTrig") -> "PolyTrig":
        out = dict(self.terms)
        for e, f in other.terms.items():
            cur = out.get(e)
            s = f if cur is None else cur + f
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return PolyTrig(self.n, self.k, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return PolyTrig(self.n, self.k, {e: -f for e, f in self.terms.items()})

    def __mul__(self, other: "PolyTrig") -> "PolyTrig":
        out = {}
        for ea, fa in self.terms.items():
            for eb, fb in other.terms.items():
                e = tuple(a + b for a, b in zip(ea, eb))
                prod = fa * fb
                cur = out.get(e)
                s = prod if cur is None else cur + prod
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return PolyTrig(self.n, self.k, out)

    def partial(self, axis: int) -> "PolyTrig":
        """d/dx_axis: theta derivative for axis < n, formal y derivative after."""
        if axis < self.n:
            return PolyTrig(self.n, self.k, {e: f.partial(axis) for e, f in self.terms.items()})
        i = axis - self.n
        out = {}
        for e, f in self.terms.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            out[tuple(e2)] = f.scale(e[i])
        return PolyTrig(self.n, self.k, out)

    def truncate(self, max_deg: int) -> "PolyTrig":
        return PolyTrig(self.n, self.k, {e: f for e, f in self.terms.items() if sum(e) <= max_deg})

    def y_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def at_zero_section(self) -> TrigPoly:
        return self.terms.get((0,) * self.k, TrigPoly.zero(self.n))

    def substitute(self, values: Sequence[TrigPoly]) -> TrigPoly:
        """Substitute y_i := values[i](theta); exact."""
        out = TrigPoly.zero(self.n)
        for e, f in self.terms.items():
            term = f
            for i, p in enumerate(e):
                for _ in range(p):
                    term = term * values[i]
            out = out + term
        return out

    def __eq__(self, other):
        return isinstance(other, PolyTrig) and self.terms == other.terms

    def __repr__(self):
        return "PolyTrig{" + ", ".join(f"y^{e}: {f!r}" for e, f in sorted(self.terms.items())) + "}"


# -- multivectors on the total space ------------------------------------------------


class PolyTrigMultivector:
    """Multivector field on T^n x R^k: {legs tuple: PolyTrig}, legs ascending."""

    def __init__(self, n: int, k: int, comps: Optional[Dict[tuple, PolyTrig]] = None):
        self.n = n
        self.k = k
        self.comps = {}
        if comps:
            for legs, f in comps.items():
                legs = tuple(legs)
                if list(legs) != sorted(set(legs)):
                    raise ValueError(f"bad legs {legs}")
                if not f.is_zero():
                    cur = self.comps.get(legs)
                    s = f if cur is None else cur + f
                    if s.is_zero():
                        self.comps.pop(legs, None)
                    else:
                        self.comps[legs] = s

    def degree(self) -> int:
        degs = {len(l) for l in self.comps}
        if len(degs) > 1:
            raise ValueError("inhomogeneous multivector")
        return degs.pop() if degs else 0

    def is_zero(self):
        return not self.comps

    def __add__(self, other):
        out = dict(self.comps)
        for legs, f in other.comps.items():
            cur = out.get(legs)
            s = f if cur is None else cur + f
            if s.is_zero():
                out.pop(legs, None)
            else:
                out[legs] = s
        return PolyTrigMultivector(self.n, self.k, out)

    def __neg__(self):
        return PolyTrigMultivector(self.n, self.k, {l: -f for l, f in self.comps.items()})

    def truncate(self, max_deg: int):
        return PolyTrigMultivector(
            self.n, self.k, {l: f.truncate(max_deg) for l, f in self.comps.items()}
        )

    def __eq__(self, other):
        return isinstance(other, PolyTrigMultivector) and self.comps == other.comps

    def __repr__(self):
        return "PolyTrigMultivector{" + ", ".join(
            f"{l}: {f!r}" for l, f in sorted(self.comps.items())
        ) + "}"


def schouten_bracket(P: PolyTrigMultivector, Q: PolyTrigMultivector) -> PolyTrigMultivector:
    """Schouten-Nijenhuis bracket of homogeneous multivector fields.

    For decomposables,
      [x_1^...^x_p, y_1^...^y_q]
        = sum_{i,j} (-1)^{i+j} [x_i, y_j] ^ x_1^...(no i)...^x_p ^ y_1^...(no j)...^y_q;
    each stored term c * d_{a_1}^...^d_{a_p} is decomposed as
    (c d_{a_1}) ^ d_{a_2} ^ ... and the vector-field brackets are
    [f d_a, g d_b] = f (d_a g) d_b - g (d_b f) d_a.
    On vector fields this is the Lie bracket; [P, X] = -L_X P.
    """
    n, k = P.n, P.k
    one = PolyTrig(n, k, {(0,) * k: TrigPoly.const(n, 1)})

    def vec_bracket(fa, a, gb, b):
        # [fa d_a, gb d_b] as {axis: PolyTrig}
        res = {}
        dg = gb.partial(a)
        if not dg.is_zero():
            res[b] = fa * dg
        df = fa.partial(b)
        if not df.is_zero():
            t = gb * df
            res[a] = res.get(a, PolyTrig.zero_nk(n, k)) - t if a in res else -t
        return {ax: f for ax, f in res.items() if not f.is_zero()}

    acc: Dict[tuple, PolyTrig] = {}
    for legs_p, fp in P.comps.items():
        p = len(legs_p)
        for legs_q, fq in Q.comps.items():
            q = len(legs_q)
            for i in range(p):
                for j in range(q):
                    if i > 0 and j > 0:
                        continue  # [d_a, d_b] = 0
                    # the coefficient rides the first factor; when the
                    # bracketed factor is not the first, the coefficient
                    # multiplies through (wedge is function-linear)
                    fa = fp if i == 0 else one
                    gb = fq if j == 0 else one
                    leftover = None
                    if i > 0:
                        leftover = fp
                    if j > 0:
                        leftover = fq if leftover is None else leftover * fq
                    br = vec_bracket(fa, legs_p[i], gb, legs_q[j])
                    if not br:
                        continue
                    rest_p = legs_p[:i] + legs_p[i + 1 :]
                    rest_q = legs_q[:j] + legs_q[j + 1 :]
                    sign0 = -1 if (i + j) % 2 else 1  # (-1)^{(i+1)+(j+1)}
                    for ax, coeff in br.items():
                        if leftover is not None:
                            coeff = coeff * leftover
                            if coeff.is_zero():
                                continue
                        s1, merged1 = merge_sign((ax,), rest_p)
                        if s1 == 0:
                            continue
                        s2, merged = merge_sign(merged1, rest_q)
                        if s2 == 0:
                            continue
                        sign = sign0 * s1 * s2
                        term = coeff if sign > 0 else -coeff
                        cur = acc.get(merged)
                        s = term if cur is None else cur + term
                        if s.is_zero():
                            acc.pop(merged, None)
                        else:
                            acc[merged] = s
    return PolyTrigMultivector(n, k, acc)


# -- coordinate forms on the total space ---------------------------------------------


def lift_coord_form(coord: dict, k: int) -> dict:
    """Lift a base coordinate form {legs: TrigPoly} to the total space."""
    return {legs: PolyTrig.lift(f, k) for legs, f in coord.items()}


def zero_section_pullback(blocks: dict, n: int, k: int) -> dict:
    """Pull a total-space coordinate form back along theta -> (theta, 0)."""
    out = {}
    for legs, f in blocks.items():
        if any(a >= n for a in legs):
            continue
        g = f.at_zero_section()
        if not g.is_zero():
            out[legs] = g
    return out


def section_substitute(blocks: dict, n: int, k: int, alpha: Sequence[TrigPoly]) -> dict:
    """Pull a total-space coordinate form back along theta -> (theta, alpha(theta))."""
    dalpha = [[alpha[i].partial(a) for a in range(n)] for i in range(k)]
    out: dict = {}
    for legs, f in blocks.items():
        coeff = f.substitute(alpha)
        if coeff.is_zero():
            continue
        # expand each dy leg as dy_i -> sum_a (d alpha_i / d theta_a) d theta_a
        form = {(): coeff}
        for leg in legs:
            if leg < n:
                step = {(leg,): TrigPoly.const(n, 1)}
            else:
                i = leg - n
                step = {(a,): dalpha[i][a] for a in range(n) if not dalpha[i][a].is_zero()}
            form = coord_wedge(form, step)
        out = coord_add(out, form)
    return out


# -- the local model -------------------------------------------------------------------


@dataclass
class GotayModel:
    base: Presymplectic
    omega_total: dict  # coordinate form on T^n x R^k with PolyTrig coefficients

    @property
    def n(self) -> int:
        return self.base.base.dim

    @property
    def k(self) -> int:
        return self.base.base.leaf_rank

    def omega_matrix(self) -> List[List[PolyTrig]]:
        """M[a][b] = Omega(d/dx_a, d/dx_b), antisymmetric, affine in y."""
        d = self.n + self.k
        zero = PolyTrig.zero_nk(self.n, self.k)
        M = [[zero for _ in range(d)] for _ in range(d)]
        for (a, b), f in self.omega_total.items():
            M[a][b] = f
            M[b][a] = -f
        return M


def _coframe_coord_row(base, i) -> dict:
    """Coframe element e^i as a base coordinate one-form."""
    return {(a,): base.coframe[i][a] for a in range(base.dim) if not base.coframe[i][a].is_zero()}


def build_gotay(pres: Presymplectic) -> GotayModel:
    """Assemble the local model form  p* omega_C - d(sum_i y_i p* j e^i).

    Validates: d Omega = 0, zero-section pullback equals omega_C, and the
    zero-section block structure (leafwise-leafwise pairing zero, unit
    leafwise-fiber pairing, transverse block equal to omega_C's).
    """
    base = pres.base
    n, k = base.dim, base.leaf_rank
    omega_c_coord = pres.omega.to_coordinates()
    total = lift_coord_form(omega_c_coord, k)
    for i in range(k):
        je = _coframe_coord_row(base, i)  # j e^i in base coordinates
        je_tot = lift_coord_form(je, k)
        dy = {(n + i,): PolyTrig(n, k, {(0,) * k: TrigPoly.const(n, 1)})}
        total = coord_add(total, coord_neg(coord_wedge(dy, je_tot)))
        dje_tot = lift_coord_form(coord_d(je, n), k)
        yi = PolyTrig.fiber_var(n, k, i)
        total = coord_add(total, coord_neg({legs: yi * f for legs, f in dje_tot.items()}))

    model = GotayModel(pres, total)

    if any(coord_d(total, n + k).values()):
        raise AssertionError("local model form is not closed")
    if zero_section_pullback(total, n, k) != omega_c_coord:
        raise AssertionError("zero-section pullback does not recover omega_C")
    _check_zero_section_blocks(model)
    return model


def _check_zero_section_blocks(model: GotayModel):
    """Mixed-frame block structure along the zero section.

    In the frame (V_1..V_k, Y_.., d/dy_..): leafwise-leafwise and
    leafwise-transverse pairings vanish, the leafwise-fiber pairing is the
    identity, the transverse block is omega_C's, and fiber-fiber vanishes.
    """
    base = model.base.base
    n, k = base.dim, base.leaf_rank
    M = model.omega_matrix()
    M0 = [[f.at_zero_section() for f in row] for row in M]

    def pair_fields(i, j) -> TrigPoly:
        acc = TrigPoly.zero(n)
        for a in range(n):
            for b in range(n):
                if base.fields[i][a].is_zero() or base.fields[j][b].is_zero():
                    continue
                acc = acc + base.fields[i][a] * base.fields[j][b] * M0[a][b]
        return acc

    def pair_field_fiber(i, l) -> TrigPoly:
        acc = TrigPoly.zero(n)
        for a in range(n):
            if not base.fields[i][a].is_zero():
                acc = acc + base.fields[i][a] * M0[a][n + l]
        return acc

    for i in range(k):
        for j in range(n):
            want = TrigPoly.zero(n)
            if pair_fields(i, j) != want:
                raise AssertionError("zero-section leafwise pairing is not zero")
    for i in range(k):
        for l in range(k):
            want = TrigPoly.const(n, 1 if i == l else 0)
            if pair_field_fiber(i, l) != want:
                raise AssertionError("zero-section leafwise-fiber pairing is not unit")
    B = model.base.transverse_matrix()
    for i in range(k, n):
        for j in range(k, n):
            if pair_fields(i, j) != B[i - k][j - k]:
                raise AssertionError("zero-section transverse block mismatch")
    for i in range(k):
        for l in range(k):
            if not M0[n + i][n + l].is_zero():
                raise AssertionError("fiber-fiber block is not zero")


# -- sections -------------------------------------------------------------------------


@dataclass
class Section:
    """Fiber components of a section, one TrigPoly per leaf coframe element."""

    values: Tuple[TrigPoly, ...]

    def __post_init__(self):
        self.values = tuple(self.values)

    @property
    def k(self):
        return len(self.values)


def section_as_one_form(model: GotayModel, alpha: Section) -> dict:
    """j(alpha) as a base coordinate one-form: sum_i alpha_i j e^i."""
    base = model.base.base
    out: dict = {}
    for i in range(model.k):
        if alpha.values[i].is_zero():
            continue
        for legs, f in _coframe_coord_row(base, i).items():
            add_into(out, legs, alpha.values[i] * f)
    return out


def section_pullback(model: GotayModel, alpha: Section) -> BigradedForm:
    """alpha* Omega computed two independent ways (asserted equal, exact).

    Route one: omega_C - d(j alpha).  Route two: substitute y := alpha(theta),
    dy := d alpha into the model form.
    """
    base = model.base.base
    n, k = model.n, model.k
    if alpha.k != k:
        raise ValueError("section has wrong fiber dimension")
    ja = section_as_one_form(model, alpha)
    route1 = coord_add(model.base.omega.to_coordinates(), coord_neg(coord_d(ja, n)))
    route2 = section_substitute(model.omega_total, n, k, alpha.values)
    if route1 != route2:
        raise AssertionError("section pullback routes disagree")  # implementation fault
    return BigradedForm.from_coordinates(base, route1)


# -- coisotropic rank criterion ----------------------------------------------------------


@dataclass
class CoisotropicReport:
    coisotropic: bool
    margin: Optional[float] = None
    power_vanishes: Optional[bool] = None
    witness: Optional[dict] = None
    grid: Optional[int] = None
    rows: Optional[list] = None  # per-grid-point diagnostics

    def __bool__(self):
        return self.coisotropic


def coisotropic_check(
    omega: BigradedForm,
    k: int,
    n: int,
    grid: int = 32,
    collect_rows: bool = False,
) -> CoisotropicReport:
    """Rank criterion for a two-form on a k-base inside a 2n-model.

    Verifies omega^{k-n+1} = 0 exactly and omega^{k-n} nowhere zero on a
    grid (margin = min over points of the max block coefficient).  When the
    top power has constant coefficients the nowhere-zero part is decided
    symbolically.
    """
    m = k - n + 1
    if m < 0:
        raise ValueError("k - n + 1 must be nonnegative")
    power = omega.wedge_power(m)
    if not power.is_zero():
        witness = {
            "kind": "power_not_zero",
            "block": repr(sorted(power.blocks)[0]),
        }
        return CoisotropicReport(False, power_vanishes=False, witness=witness, grid=grid)
    lower = omega.wedge_power(m - 1) if m >= 1 else None
    if lower is None or not lower.blocks:
        if m == 0:
            # omega itself must vanish (handled above); rank 0 is fine
            return CoisotropicReport(True, margin=1.0, power_vanishes=True, grid=grid)
        witness = {"kind": "rank_drop", "point": "everywhere", "note": "lower power is zero"}
        return CoisotropicReport(False, power_vanishes=True, witness=witness, grid=grid)
    if not collect_rows and all(f.is_constant() for f in lower.blocks.values()):
        margin = max(abs(complex(f.constant_value())) for f in lower.blocks.values())
        ok = margin > 0
        report = CoisotropicReport(ok, margin=margin, power_vanishes=True, grid=grid)
        if not ok:
            report.witness = {"kind": "rank_drop", "point": "everywhere"}
        return report

    dim = omega.base.dim
    axes = [np.arange(grid) * (2 * np.pi / grid) for _ in range(dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m_.ravel() for m_ in mesh], axis=1)
    vals = np.stack([f.eval_many(pts) for f in lower.blocks.values()], axis=0)
    per_point = np.abs(vals).max(axis=0)
    margin = float(per_point.min())
    idx = int(per_point.argmin())
    report = CoisotropicReport(margin > 1e-12, margin=margin, power_vanishes=True, grid=grid)
    if collect_rows:
        ranks = _numeric_ranks(omega, pts)
        report.rows = [
            {"point": [float(x) for x in pts[i]], "margin": float(per_point[i]), "rank": int(ranks[i])}
            for i in range(len(pts))
        ]
    if not report.coisotropic:
        report.witness = {"kind": "rank_drop", "point": [float(x) for x in pts[idx]], "margin": margin}
    return report


def _numeric_ranks(omega: BigradedForm, pts: np.ndarray) -> np.ndarray:
    dim = omega.base.dim
    coord = omega.to_coordinates()
    mats = np.zeros((len(pts), dim, dim))
    for (a, b), f in coord.items():
        v = f.eval_many(pts)
        mats[:, a, b] = v
        mats[:, b, a] = -v
    s = np.linalg.svd(mats, compute_uv=False)
    tol = 1e-9 * np.maximum(1.0, s[:, :1])
    return (s > tol).sum(axis=1)


# -- vertical fields and the Poisson jet -----------------------------------------------


def vert_field_from_form(model: GotayModel, beta: BigradedForm) -> PolyTrigMultivector:
    """Vertical fiberwise-constant multivector corresponding to a foliated form.

    The foliated form with fiber components g_I on the leaf coframe basis
    maps to sum_I g_I d/dy_I; the inverse route through the model two-form
    is form_from_vert_field.
    """
    if not beta.is_foliated():
        raise ValueError("expected a foliated form")
    n, k = model.n, model.k
    comps = {}
    for (_, L), f in beta.blocks.items():
        legs = tuple(n + l for l in L)
        comps[legs] = PolyTrig.lift(f, k)
    return PolyTrigMultivector(n, k, comps)


def form_from_vert_field(model: GotayModel, W: PolyTrigMultivector) -> BigradedForm:
    """Inverse correspondence through the model form (independent route).

    V maps to (-1)^deg r(i*(wedge^deg flat)(V)): each d/dy_i contracts the
    model form to -p* j e^i exactly, the wedge of those is pulled back to the
    zero section and restricted to the leaves.
    """
    base = model.base.base
    n, k = model.n, model.k
    deg = W.degree()
    if deg == 0:
        f = W.comps.get((), PolyTrig.zero_nk(n, k)).at_zero_section()
        return BigradedForm(base, {((), ()): f})
    total: dict = {}
    for legs, coeff in W.comps.items():
        if any(l < n for l in legs):
            raise ValueError("multivector is not vertical")
        if coeff.y_degree() != 0:
            raise ValueError("multivector is not fiberwise constant")
        wedge = {(): coeff.at_zero_section()}
        for l in legs:
            je = _coframe_coord_row(base, l - n)
            wedge = coord_wedge(wedge, coord_neg(je))
        total = coord_add(total, wedge)
    form = BigradedForm.from_coordinates(base, total)
    foliated = form.homogeneous_part(0, deg)
    return foliated if deg % 2 == 0 else -foliated


def pi_jet(model: GotayModel, order: int = 2) -> PolyTrigMultivector:
    """Fiber-Taylor expansion of the Poisson bivector along the zero section.

    The model form matrix is M0 + N with N linear in y, so
    -(M0 + N)^{-1} = -(M0^{-1} - M0^{-1} N M0^{-1} + ...) is exact up to the
    requested order (<= 2; the affine structure makes the order-2 truncation
    exact modulo y^3).  Requires M0 ring-invertible (constant determinant).
    """
    if order > 2:
        raise UnsupportedConfiguration("jet order above 2 is not supported")
    n, k = model.n, model.k
    d = n + k
    M = model.omega_matrix()
    M0 = [[M[a][b].at_zero_section() for b in range(d)] for a in range(d)]
    try:
        inv0 = mat_inverse_constant_det(M0)
    except Exception as e:
        raise UnsupportedConfiguration(f"zero-order matrix is not ring-invertible: {e}")
    lift = lambda mat: [[PolyTrig.lift(mat[a][b], k) for b in range(d)] for a in range(d)]
    inv0p = lift(inv0)
    Np = [[M[a][b] - PolyTrig.lift(M0[a][b], k) for b in range(d)] for a in range(d)]

    def matmul(A, B, cap):
        out = [[PolyTrig.zero_nk(n, k) for _ in range(d)] for _ in range(d)]
        for a in range(d):
            for b in range(d):
                acc = PolyTrig.zero_nk(n, k)
                for c in range(d):
                    if A[a][c].is_zero() or B[c][b].is_zero():
                        continue
                    acc = acc + A[a][c] * B[c][b]
                out[a][b] = acc.truncate(cap)
        return out

    terms = [inv0p]
    current = inv0p
    for _ in range(order):
        current = matmul(matmul(current, Np, order), inv0p, order)
        terms.append(current)
    # inv = sum (-1)^j terms[j]; Pi = -inv
    comps = {}
    for a in range(d):
        for b in range(a + 1, d):
            acc = PolyTrig.zero_nk(n, k)
            for j, t in enumerate(terms):
                acc = acc + (t[a][b] if j % 2 == 1 else -t[a][b])
            if not acc.is_zero():
                comps[(a, b)] = acc
    return PolyTrigMultivector(n, k, comps)


def pi_jet_residual(model: GotayModel, jet: PolyTrigMultivector, order: int = 2):
    """(-jet-as-matrix) . M - Id, truncated to the jet order; zero when exact."""
    n, k = model.n, model.k
    d = n + k
    M = model.omega_matrix()
    P = [[PolyTrig.zero_nk(n, k) for _ in range(d)] for _ in range(d)]
    for (a, b), f in jet.comps.items():
        P[a][b] = f
        P[b][a] = -f
    bad = []
    for a in range(d):
        for b in range(d):
            acc = PolyTrig.zero_nk(n, k)
            for c in range(d):
                if P[a][c].is_zero() or M[c][b].is_zero():
                    continue
                acc = acc + P[a][c] * M[c][b]
            acc = acc.truncate(order)
            want_one = a == b
            target = PolyTrig.lift(TrigPoly.const(n, -1 if want_one else 0), k)
            if acc != target:
                bad.append((a, b, acc))
    return bad
