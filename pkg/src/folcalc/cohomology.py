"""Certificate-based (non)exactness in foliated cohomology.

Deciding whether a leafwise-closed form is leafwise exact is done with two
one-sided tools:

* an exact linear solve for a primitive supported in a frequency box.  The
  leafwise differential acts on Fourier coefficients as a sparse exact-
  rational operator; the coupling graph splits into small connected
  components which are eliminated independently over the complex rationals.
  Failure of the box solve alone proves nothing (small divisors), so it
  never certifies non-exactness.
* an averaging certificate.  When every leafwise frame field differentiates
  only along a set A of torus axes with coefficients independent of those
  axes (and the target degree is one, or the leafwise fields commute), the
  average of each block coefficient over the A-circles kills every leafwise
  exact form; a nonzero average therefore certifies non-exactness.  This is
  the integration-over-subtori argument of the worked T^3 example, stated as
  a reusable rule; its soundness is property-tested.

The remaining verdict is InconclusiveOnBox.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from ._rational import CQ, CQ_ZERO, rat
from .foliated import BigradedForm, FramedTorus, NotLeafwiseClosed, leafwise_d
from .trig_algebra import NoQuotient, TrigPoly, tp_div_exact


# -- verdict types -------------------------------------------------------------


@dataclass
class ExactnessVerdict:
    status: str  # ExactWithPrimitive | NotExactCertified | InconclusiveOnBox
    primitive: Optional[BigradedForm] = None
    certificate: Optional[TrigPoly] = None
    certificate_block: Optional[tuple] = None
    box: Optional[int] = None

    def is_exact(self):
        return self.status == "ExactWithPrimitive"


@dataclass
class KernelVerdict:
    in_kernel: bool
    quotient: Optional[TrigPoly] = None


# -- averaging certificates --------------------------------------------------------


def averaging_axes(base: FramedTorus) -> Optional[frozenset]:
    """Axes A for which averaging kills leafwise derivatives, or None.

    Requires every leafwise field to have components only along A-axes, with
    all components independent of the A-variables.
    """
    n, k = base.dim, base.leaf_rank
    A = set()
    for i in range(k):
        for a in range(n):
            if not base.fields[i][a].is_zero():
                A.add(a)
    if not A:
        return None
    for i in range(k):
        for a in range(n):
            comp = base.fields[i][a]
            if any(comp.depends_on(ax) for ax in A):
                return None
    return frozenset(A)


def _leaf_frame_commutes(base: FramedTorus) -> bool:
    k = base.leaf_rank
    for i in range(k):
        for j in range(i + 1, k):
            if any(not c.is_zero() for c in base.structure(i, j)):
                return False
    return True


def averaging_certificate(g: BigradedForm) -> Tuple[Optional[TrigPoly], Optional[tuple]]:
    """Nonzero averaged block of g over the averaging axes, if the rule applies.

    Returns (certificate, block key) or (None, None) when no certificate is
    available (either the rule does not apply or all averages vanish).
    """
    base = g.base
    A = averaging_axes(base)
    if A is None:
        return None, None
    degree = max((len(L) for _, L in g.blocks), default=0)
    if degree > 1 and not _leaf_frame_commutes(base):
        return None, None
    for key in sorted(g.blocks):
        avg = g.blocks[key].average(A)
        if not avg.is_zero():
            return avg, key
    return None, None


# -- exact box solve ------------------------------------------------------------


class _LinearSystem:
    """Sparse exact linear system over complex rationals, keyed rows/columns."""

    def __init__(self):
        self.rows: Dict[object, Dict[object, CQ]] = {}
        self.rhs: Dict[object, CQ] = {}

    def add_coeff(self, row, col, c: CQ):
        if c.is_zero():
            return
        r = self.rows.setdefault(row, {})
        s = r.get(col, CQ_ZERO) + c
        if s.is_zero():
            r.pop(col, None)
        else:
            r[col] = s

    def set_rhs(self, row, c: CQ):
        if not c.is_zero():
            self.rhs[row] = c
            self.rows.setdefault(row, {})

    def solve(self) -> Optional[Dict[object, CQ]]:
        """Any exact solution of the sparse system, or None if inconsistent.

        Splits into connected components of the row/column incidence graph
        and Gauss-eliminates each over the complex rationals.
        """
        parent = {}

        def find(x):
            while parent.get(x, x) != x:
                parent[x] = parent.get(parent[x], parent[x])
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        for row, cols in self.rows.items():
            for col in cols:
                union(("r", row), ("c", col))
        groups: Dict[object, List] = {}
        for row in self.rows:
            groups.setdefault(find(("r", row)), []).append(("r", row))
        for row, cols in self.rows.items():
            for col in cols:
                key = find(("c", col))
                groups.setdefault(key, [])
                if ("c", col) not in groups[key]:
                    groups[key].append(("c", col))

        solution: Dict[object, CQ] = {}
        for members in groups.values():
            rows = [m[1] for m in members if m[0] == "r"]
            cols = sorted({m[1] for m in members if m[0] == "c"})
            if not any(r in self.rhs for r in rows):
                continue  # homogeneous component; zero solves it
            col_pos = {c: j for j, c in enumerate(cols)}
            mat = []
            vec = []
            for r in rows:
                rowvec = [CQ_ZERO] * len(cols)
                for c, val in self.rows[r].items():
                    rowvec[col_pos[c]] = val
                mat.append(rowvec)
                vec.append(self.rhs.get(r, CQ_ZERO))
            sol = _gauss_solve(mat, vec)
            if sol is None:
                return None
            for c, val in zip(cols, sol):
                if not val.is_zero():
                    solution[c] = val
        return solution


def _gauss_solve(mat: List[List[CQ]], rhs: List[CQ]) -> Optional[List[CQ]]:
    """One solution of mat x = rhs over CQ, or None when inconsistent."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    rows = [list(r) + [b] for r, b in zip(mat, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = CQ(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if not rows[i][n].is_zero():
            return None
    x = [CQ_ZERO] * n
    for i, c in enumerate(pivots):
        x[c] = rows[i][n]
    return x


def default_box(g: BigradedForm) -> int:
    """Frequency bound: twice the largest input frequency plus headroom."""
    freq = max((f.max_frequency() for f in g.blocks.values()), default=0)
    base = g.base
    for i in range(base.leaf_rank):
        for a in range(base.dim):
            freq = max(freq, base.fields[i][a].max_frequency())
    return 2 * freq + 4


def _box_modes(n: int, bound: int, axes=None):
    """All frequency tuples with |k_a| <= bound; axes outside `axes` stay 0."""
    active = list(range(n)) if axes is None else sorted(axes)
    ranges = [range(-bound, bound + 1) if a in active else (0,) for a in range(n)]

    def rec(prefix, rest):
        if not rest:
            yield tuple(prefix)
            return
        for v in rest[0]:
            yield from rec(prefix + [v], rest[1:])

    yield from rec([], ranges)


def _relevant_axes(g: BigradedForm) -> set:
    """Axes a primitive can usefully involve: input support plus frame support."""
    base = g.base
    axes = set()
    for f in g.blocks.values():
        axes |= f.support_axes()
    for i in range(base.leaf_rank):
        for a in range(base.dim):
            axes |= base.fields[i][a].support_axes()
            if not base.fields[i][a].is_zero():
                axes.add(a)
    return axes


def exactness_test(g: BigradedForm, box: Optional[int] = None) -> ExactnessVerdict:
    """Decide d_F h = g by certificate or exact box solve.

    g must be a foliated form, leafwise closed when its degree is >= 1.
    """
    base = g.base
    if not g.is_foliated():
        raise ValueError("exactness_test expects a foliated form")
    if g.is_zero():
        return ExactnessVerdict("ExactWithPrimitive", primitive=BigradedForm.zero(base))
    _, v = g.bidegree()
    if v >= 1 and not leafwise_d(g).is_zero():
        raise NotLeafwiseClosed("input is not leafwise closed")
    if v == 0:
        # functions are exact only when zero (d_F h = g has h of degree -1)
        cert, key = averaging_certificate(g)
        if cert is not None:
            return ExactnessVerdict("NotExactCertified", certificate=cert, certificate_block=key)
        return ExactnessVerdict("InconclusiveOnBox", box=0)

    cert, key = averaging_certificate(g)
    if cert is not None:
        return ExactnessVerdict("NotExactCertified", certificate=cert, certificate_block=key)

    bound = default_box(g) if box is None else box
    axes = _relevant_axes(g)
    k = base.leaf_rank
    system = _LinearSystem()
    unknown_keys = []
    for L in combinations(range(k), v - 1):
        for mode in _box_modes(base.dim, bound, axes):
            unknown_keys.append((L, mode))

    # column action of d_F on each basis coefficient e^{i k theta} e^L
    for L, mode in unknown_keys:
        basis = BigradedForm(base, {((), L): TrigPoly(base.dim, {mode: CQ(1)}, _raw=True)})
        img = leafwise_d(basis)
        for (_, J), f in img.blocks.items():
            for kk, c in f.coeffs.items():
                system.add_coeff((J, kk), (L, mode), c)
    for (_, J), f in g.blocks.items():
        for kk, c in f.coeffs.items():
            system.set_rhs((J, kk), c)

    sol = system.solve()
    if sol is None:
        return ExactnessVerdict("InconclusiveOnBox", box=bound)
    blocks: Dict[tuple, dict] = {}
    for (L, mode), c in sol.items():
        blocks.setdefault(L, {})[mode] = c
    primitive = BigradedForm(
        base, {((), L): TrigPoly(base.dim, table) for L, table in blocks.items()}
    )
    if leafwise_d(primitive) != g:
        raise AssertionError("box solve returned a non-primitive")  # solver fault
    return ExactnessVerdict("ExactWithPrimitive", primitive=primitive, box=bound)


# -- box solve in the dual Bott complex ---------------------------------------------


def bott_dstar_exactness_box(rep, box: int):
    """Try to solve bott_d_star(xi) = rep for a G*-valued 0-form xi on a box.

    Returns the potential as a ValuedForm or None when the truncated system
    is inconsistent (which certifies nothing, as with the leafwise solver).
    Used to cross-validate the divisibility kernel test.
    """
    from .foliated import ValuedForm, bott_d_star

    base = rep.base
    n, k = base.dim, base.leaf_rank
    axes = set()
    for f in rep.comps.values():
        axes |= f.support_axes()
    for i in range(n):
        for a in range(n):
            axes |= base.fields[i][a].support_axes()
    system = _LinearSystem()
    for m in range(k, n):
        for mode in _box_modes(n, box, axes):
            basis = ValuedForm(base, "Gstar", {(m, ()): TrigPoly(n, {mode: CQ(1)}, _raw=True)})
            img = bott_d_star(basis)
            for (mm, L), f in img.comps.items():
                for kk, c in f.coeffs.items():
                    system.add_coeff((mm, L, kk), (m, mode), c)
    for (mm, L), f in rep.comps.items():
        for kk, c in f.coeffs.items():
            system.set_rhs((mm, L, kk), c)
    sol = system.solve()
    if sol is None:
        return None
    comps = {}
    for (m, mode), c in sol.items():
        comps.setdefault(m, {})[mode] = c
    xi = ValuedForm(base, "Gstar", {(m, ()): TrigPoly(n, table) for m, table in comps.items()})
    if bott_d_star(xi) != rep:
        raise AssertionError("box solve returned a non-potential")
    return xi


# -- the worked T^3 kernel test ----------------------------------------------------


def dnu_kernel_test(g: TrigPoly) -> KernelVerdict:
    """Kernel membership for classes g(t2) (leaf coframe) on the worked T^3 geometry.

    The class is in the kernel of the transverse differentiation map iff
    g' is divisible by sin(t2) in the trig ring; the exact quotient is
    returned as the witness.
    """
    axes = g.support_axes()
    if axes - {1}:
        raise ValueError("dnu_kernel_test expects g univariate in the second axis")
    gprime = g.partial(1)
    s = TrigPoly.sine(g.dim, 1)
    try:
        l = tp_div_exact(gprime, s)
    except NoQuotient:
        return KernelVerdict(False)
    return KernelVerdict(True, quotient=l)


def class_independence(gs: List[TrigPoly]) -> int:
    """Rank of the span of classes g(t2) (leaf coframe) in first leafwise cohomology.

    Uses the certified fact that such a class vanishes iff g = 0, so the rank
    is the rank of the coefficient vectors over the rationals (exact).
    """
    modes = sorted({k for g in gs for k in g.coeffs})
    if not modes:
        return 0
    rows = []
    for g in gs:
        row = []
        for k in modes:
            c = g.coeffs.get(k, CQ_ZERO)
            row.extend([c.re, c.im])
        rows.append(row)
    # exact row reduction over rationals
    rank = 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rat(rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        rank += 1
        if r == len(rows):
            break
    return rank


# -- suspension foliations -------------------------------------------------------


class Unsupported(ValueError):
    pass


@dataclass
class SuspensionH1:
    dimension: int
    kernel_multiplicity: int
    generators: list = field(default_factory=list)


def suspension_h1(mu: List[float], dense_leaves: bool, tol: float = 1e-9) -> SuspensionH1:
    """First leafwise cohomology of the suspension foliation of a mapping torus.

    mu lists the eigenvalues acting on the leafwise directions.  With dense
    leaves the degree-zero leafwise cohomology of the fiber foliation is the
    constants, on which the monodromy acts trivially; the cokernel summand
    contributes 1 and the kernel summand counts eigenvalues equal to 1.
    """
    if any(m <= 0 for m in mu):
        raise ValueError("eigenvalues must be positive")
    if not dense_leaves:
        raise Unsupported(
            "only the dense-leaf regime is supported (declared by the caller)"
        )
    fixed = sum(1 for m in mu if abs(m - 1.0) <= tol)
    gens = ["restriction of dt"]
    gens += [f"leafwise coframe class {j}" for j, m in enumerate(mu) if abs(m - 1.0) <= tol]
    return SuspensionH1(dimension=1 + fixed, kernel_multiplicity=fixed, generators=gens)
