"""Prolongation of first-order deformations by the flow of a Moser field.

Pipeline: fix an extension of the deformation whose differential is basic
(verified exactly), form the affine family of symplectic forms
omega_t = Omega - t p*(d ext) on the local model, solve the contraction
equation iota_X omega_t = p* ext pointwise, integrate the flow with fixed-
step RK4, and reconstruct the section sigma_t over each base grid point by
Newton-shooting the fiber values against the forward flow (the graph point
must land on the zero section at time t).  All verification is done by
independent oracles: finite differences in t against the input deformation,
spectral-derivative rank margins on the grid, and an exact wedge-power test
on a trigonometric fit of the section.

Grid work is vectorized; the per-point linear solves are batched and the
trig evaluations go through the compiled kernel when available.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ._rational import CQ
from .foliated import BigradedForm, Presymplectic, leafwise_d
from .foliated.exterior import coord_d
from .gotay import GotayModel
from .trig_algebra import TrigPoly

NEWTON_TOL = 1e-10
NEWTON_MAX_ITER = 25
SOLVE_RTOL = 1e-12


class NotAnExtension(ValueError):
    pass


class NotBasicDifferential(ValueError):
    pass


class SingularAtPoint(RuntimeError):
    def __init__(self, t, point):
        self.t = t
        self.point = point
        super().__init__(f"form family is singular at t={t}, point={point}")


class NewtonDivergence(RuntimeError):
    def __init__(self, t, point):
        self.t = t
        self.point = point
        super().__init__(f"graph reconstruction diverged at t={t}, point={point}")


# -- extension check -------------------------------------------------------------


def verify_extension(pres: Presymplectic, beta: BigradedForm, beta_ext: BigradedForm) -> None:
    """Exact check that beta_ext extends beta with basic differential.

    The extension must restrict to beta on the leaves and satisfy
    iota_V d(beta_ext) = 0 for every leafwise frame field; closedness of
    d(beta_ext) makes the Lie-derivative half automatic.
    """
    base = pres.base
    leaf_part = BigradedForm(
        base, {key: f for key, f in beta_ext.blocks.items() if len(key[0]) == 0}
    )
    if leaf_part != beta:
        raise NotAnExtension("leaf restriction of the extension differs from beta")
    d = beta_ext.exterior_d()
    for i in range(base.leaf_rank):
        if not d.contract_frame(i).is_zero():
            raise NotBasicDifferential(
                f"iota_V d(ext) is nonzero for leaf field {i}: {d.contract_frame(i)!r}"
            )


# -- numeric model ----------------------------------------------------------------


class _Entry:
    """Numeric evaluator for one trig polynomial on theta batches."""

    __slots__ = ("K", "cre", "cim", "const")

    def __init__(self, f: TrigPoly):
        self.const = None
        if f.is_constant():
            self.const = float(f.constant_value().re) if f.coeffs else 0.0
        self.K, self.cre, self.cim = f.mode_arrays()

    def __call__(self, theta: np.ndarray) -> np.ndarray:
        if self.const is not None:
            return np.full(theta.shape[0], self.const)
        from ._kernels import trig_eval

        return trig_eval(self.K, self.cre, self.cim, theta)


class NumericMoser:
    """Batched evaluation of the form family and the Moser field."""

    def __init__(self, model: GotayModel, beta_ext: BigradedForm):
        self.model = model
        base = model.base.base
        self.n, self.k = model.n, model.k
        d = self.n + self.k
        self.dim = d
        # omega matrix entries, affine in y
        self._m0: Dict[Tuple[int, int], _Entry] = {}
        self._m1: Dict[Tuple[int, int, int], _Entry] = {}
        for (a, b), f in model.omega_total.items():
            for e, tp in f.terms.items():
                deg = sum(e)
                if deg == 0:
                    self._m0[(a, b)] = _Entry(tp)
                elif deg == 1:
                    i = next(j for j, p in enumerate(e) if p)
                    self._m1[(a, b, i)] = _Entry(tp)
                else:
                    raise ValueError("model form must be affine in the fiber")
        # extension as a coordinate one-form and its differential
        ext_coord = beta_ext.to_coordinates()
        self._rhs = {legs[0]: _Entry(f) for legs, f in ext_coord.items()}
        dext = coord_d(ext_coord, self.n)
        self._dext = {legs: _Entry(f) for legs, f in dext.items()}

    def omega_matrices(self, theta: np.ndarray, y: np.ndarray, t: float) -> np.ndarray:
        N = theta.shape[0]
        M = np.zeros((N, self.dim, self.dim))
        for (a, b), entry in self._m0.items():
            v = entry(theta)
            M[:, a, b] += v
            M[:, b, a] -= v
        for (a, b, i), entry in self._m1.items():
            v = entry(theta) * y[:, i]
            M[:, a, b] += v
            M[:, b, a] -= v
        if t != 0.0:
            for (a, b), entry in self._dext.items():
                v = t * entry(theta)
                M[:, a, b] -= v
                M[:, b, a] += v
        return M

    def rhs(self, theta: np.ndarray) -> np.ndarray:
        N = theta.shape[0]
        b = np.zeros((N, self.dim))
        for a, entry in self._rhs.items():
            b[:, a] = entry(theta)
        return b

    def field(self, t: float, x: np.ndarray) -> np.ndarray:
        """Moser vector field at a batch of points x = (theta, y)."""
        theta, y = x[:, : self.n], x[:, self.n :]
        M = self.omega_matrices(theta, y, t)
        b = self.rhs(theta)
        try:
            X = np.linalg.solve(np.transpose(M, (0, 2, 1)), b[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            bad = _first_singular(M)
            raise SingularAtPoint(t, x[bad].tolist())
        resid = np.abs(np.einsum("pa,pab->pb", X, M) - b).max(axis=1)
        scale = 1.0 + np.abs(b).max(axis=1)
        worst = int(np.argmax(resid / scale))
        if resid[worst] > SOLVE_RTOL * scale[worst]:
            raise SingularAtPoint(t, x[worst].tolist())
        return X

    def flow(self, x0: np.ndarray, steps: int, dt: float, t0: float = 0.0) -> np.ndarray:
        """Fixed-step RK4 integration of the time-dependent field."""
        x = x0.copy()
        t = t0
        for _ in range(steps):
            k1 = self.field(t, x)
            k2 = self.field(t + dt / 2, x + (dt / 2) * k1)
            k3 = self.field(t + dt / 2, x + (dt / 2) * k2)
            k4 = self.field(t + dt, x + dt * k3)
            x = x + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
            t += dt
        return x


def moser_field(model: GotayModel, beta_ext: BigradedForm, t: float, point) -> np.ndarray:
    """The Moser field at a single point of the local model (residual-checked)."""
    numeric = NumericMoser(model, beta_ext)
    x = np.asarray(point, dtype=float).reshape(1, -1)
    return numeric.field(t, x)[0]


def _first_singular(M: np.ndarray) -> int:
    dets = np.abs(np.linalg.det(M))
    return int(np.argmin(dets))


# -- graph reconstruction -------------------------------------------------------------


def _newton_sections(
    numeric: NumericMoser,
    grid_pts: np.ndarray,
    steps: int,
    dt: float,
    guess: np.ndarray,
    tol: float,
    max_iter: int,
):
    """Solve fiber(flow_t(q, u)) = 0 for u over every grid point at once.

    The Jacobian in u is taken by forward differences, with the perturbed
    trajectories integrated in the same batch as the base ones.
    """
    n, k = numeric.n, numeric.k
    N = grid_pts.shape[0]
    t = steps * dt
    if steps == 0:
        # the time-zero flow is the identity; the graph condition forces u = 0
        return np.zeros_like(guess), 0.0, 0
    u = guess.copy()
    h = 1e-6
    for it in range(max_iter):
        batch = np.concatenate(
            [np.concatenate([grid_pts, u], axis=1)]
            + [
                np.concatenate([grid_pts, u + h * np.eye(k)[j][None, :]], axis=1)
                for j in range(k)
            ],
            axis=0,
        )
        out = numeric.flow(batch, steps, dt)
        fibers = out[:, n:]
        res = fibers[:N]
        res_norm = np.abs(res).max()
        if res_norm < tol:
            return u, float(res_norm), it
        J = np.stack(
            [(fibers[(j + 1) * N : (j + 2) * N] - res) / h for j in range(k)], axis=2
        )
        try:
            delta = np.linalg.solve(J, res[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            raise NewtonDivergence(t, grid_pts[0].tolist())
        if not np.isfinite(delta).all():
            bad = int(np.argmax(~np.isfinite(delta).all(axis=1)))
            raise NewtonDivergence(t, grid_pts[bad].tolist())
        u = u - delta
    res_norm = np.abs(res).max()
    bad = int(np.argmax(np.abs(res).max(axis=1)))
    raise NewtonDivergence(t, grid_pts[bad].tolist())


# -- spectral diagnostics ------------------------------------------------------------


def _grid_points(n: int, g: int) -> np.ndarray:
    axes = [np.arange(g) * (2 * np.pi / g) for _ in range(n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _spectral_partial(values: np.ndarray, axis: int) -> np.ndarray:
    """Exact derivative of trigonometric grid data along one axis."""
    g = values.shape[axis]
    freqs = np.fft.fftfreq(g, d=1.0 / g)
    if g % 2 == 0:
        freqs[g // 2] = 0.0  # Nyquist mode has no odd-derivative content
    shape = [1] * values.ndim
    shape[axis] = g
    F = np.fft.fft(values, axis=axis)
    F *= (1j * freqs).reshape(shape)
    return np.fft.ifft(F, axis=axis).real


def _rank_margin(pres: Presymplectic, grid_pts: np.ndarray, grid_shape, sections: np.ndarray):
    """(margin, excess) of omega_C - d(j sigma) on the grid.

    margin: smallest r-th singular value over the grid, r the transverse
    rank (1.0 when r = 0); excess: largest (r+1)-th singular value, which
    measures rank inflation and should stay at integration-error scale.
    """
    base = pres.base
    n, k = base.dim, base.leaf_rank
    r = n - k
    N = grid_pts.shape[0]
    # w_a = sum_i sigma_i E[i][a] on the grid
    w = np.zeros((N, n))
    for i in range(k):
        for a in range(n):
            e = base.coframe[i][a]
            if e.is_zero():
                continue
            w[:, a] += sections[:, i] * e.eval_many(grid_pts)
    omega = np.zeros((N, n, n))
    for (a, b), f in pres.omega.to_coordinates().items():
        v = f.eval_many(grid_pts)
        omega[:, a, b] += v
        omega[:, b, a] -= v
    for a in range(n):
        wa = w[:, a].reshape(grid_shape)
        for b in range(n):
            if b == a:
                continue
            dwa_b = _spectral_partial(wa, b).ravel()
            # d(j sigma)_{b a} contribution: partial_b w_a dtheta_b ^ dtheta_a
            omega[:, b, a] -= dwa_b
            omega[:, a, b] += dwa_b
    s = np.linalg.svd(omega, compute_uv=False)
    margin = float(s[:, r - 1].min()) if r >= 1 else 1.0
    excess = float(s[:, r].max()) if r < n else 0.0
    return margin, excess


def _fft_fit(grid_shape, values: np.ndarray, tol: float = 1e-10) -> TrigPoly:
    """Trig polynomial through periodic grid data, small modes dropped.

    Nyquist coefficients (index g/2 on an even grid) are split evenly
    between the +g/2 and -g/2 frequencies, which leaves the values at the
    grid points unchanged and keeps the table Hermitian.
    """
    g = grid_shape[0]
    F = np.fft.fftn(values.reshape(grid_shape)) / values.size
    raw = {}
    for idx in np.ndindex(*grid_shape):
        c = F[idx]
        if abs(c) < tol:
            continue
        # each index with a Nyquist component fans out over +-g/2
        options = []
        for i in idx:
            if g % 2 == 0 and i == g // 2:
                options.append((g // 2, -(g // 2)))
            elif i <= g // 2:
                options.append((int(i),))
            else:
                options.append((int(i) - g,))
        fan = 1
        for o in options:
            fan *= len(o)
        from itertools import product as _product

        for kvec in _product(*options):
            raw[kvec] = raw.get(kvec, 0.0) + c / fan
    table = {}
    for kvec, c in raw.items():
        re = Fraction(float(c.real)).limit_denominator(10**12)
        im = Fraction(float(c.imag)).limit_denominator(10**12)
        cc = CQ(str(re), str(im))
        if not cc.is_zero():
            table[kvec] = cc
    # enforce Hermitian symmetry against rounding asymmetries
    sym = {}
    for kvec, c in table.items():
        mk = tuple(-a for a in kvec)
        if mk in sym or kvec in sym:
            continue
        cm = table.get(mk, c.conj())
        avg = (c + cm.conj()).scale("1/2")
        sym[kvec] = avg
        sym[mk] = avg.conj()
    return TrigPoly(len(grid_shape), sym)


# -- the prolongation ------------------------------------------------------------------


@dataclass
class DeformationPath:
    times: List[float]
    dt: float
    grid: int
    grid_points: np.ndarray
    sections: List[np.ndarray]
    diagnostics: List[dict]
    deriv_residual: float
    fitted: Optional[List[List[TrigPoly]]] = None
    fit_residuals: Optional[List[float]] = None
    fit_power_defect: Optional[float] = None
    initial_margin: float = 0.0

    def max_initial_section(self) -> float:
        return float(np.abs(self.sections[0]).max())


def prolong(
    model: GotayModel,
    beta: BigradedForm,
    beta_ext: BigradedForm,
    t_max: float,
    steps: int,
    grid: int,
    n_samples: int = 6,
    newton_tol: float = NEWTON_TOL,
    fit: bool = True,
) -> DeformationPath:
    """Integrate the Moser flow and reconstruct the section path.

    beta must be leafwise closed and beta_ext a verified extension; sample
    times are snapped to the RK grid (dt = t_max / steps).  Diagnostics per
    sample: max fiber value, Newton residual and iterations, rank margin and
    rank excess of the reconstructed presymplectic form.  The finite-
    difference derivative residual ||sigma_dt / dt - beta||_inf is measured
    at the first RK step, where the path derivative is the input deformation.
    """
    pres = model.base
    if not beta.is_zero() and not leafwise_d(beta).is_zero():
        raise ValueError("beta is not leafwise closed")
    verify_extension(pres, beta, beta_ext)
    numeric = NumericMoser(model, beta_ext)
    n, k = model.n, model.k
    dt = t_max / steps
    grid_pts = _grid_points(n, grid)
    grid_shape = (grid,) * n
    N = grid_pts.shape[0]

    sample_steps = sorted({int(round(s)) for s in np.linspace(0, steps, n_samples)})
    times = [m * dt for m in sample_steps]

    # beta evaluated on the grid (fiber components on the leaf coframe basis)
    beta_grid = np.zeros((N, k))
    for (_, L), f in beta.blocks.items():
        beta_grid[:, L[0]] = f.eval_many(grid_pts)

    sections = []
    diagnostics = []
    guess = np.zeros((N, k))
    for idx, (m, t) in enumerate(zip(sample_steps, times)):
        u, res, iters = _newton_sections(
            numeric, grid_pts, m, dt, guess, newton_tol, NEWTON_MAX_ITER
        )
        sections.append(u)
        margin, excess = _rank_margin(pres, grid_pts, grid_shape, u)
        diagnostics.append(
            {
                "t": t,
                "max_fiber": float(np.abs(u).max()),
                "newton_residual": res,
                "newton_iters": iters,
                "rank_margin": margin,
                "rank_excess": excess,
            }
        )
        # warm start the next sample with a first-order extrapolation
        if idx + 1 < len(sample_steps):
            gap = (sample_steps[idx + 1] - m) * dt
            guess = u + beta_grid * gap

    # derivative residual at the origin: one RK step
    u1, _, _ = _newton_sections(
        numeric, grid_pts, 1, dt, beta_grid * dt, newton_tol, NEWTON_MAX_ITER
    )
    deriv_residual = float(np.abs(u1 / dt - beta_grid).max())

    path = DeformationPath(
        times=times,
        dt=dt,
        grid=grid,
        grid_points=grid_pts,
        sections=sections,
        diagnostics=diagnostics,
        deriv_residual=deriv_residual,
        initial_margin=diagnostics[0]["rank_margin"],
    )
    if fit:
        fitted = []
        fit_residuals = []
        power_defect = 0.0
        for u in sections:
            comps = []
            resid = 0.0
            for i in range(k):
                tp = _fft_fit(grid_shape, u[:, i])
                comps.append(tp)
                resid = max(resid, float(np.abs(tp.eval_many(grid_pts) - u[:, i]).max()))
            fitted.append(comps)
            fit_residuals.append(resid)
            power_defect = max(power_defect, _power_defect(pres, comps))
        path.fitted = fitted
        path.fit_residuals = fit_residuals
        path.fit_power_defect = power_defect
    return path


def _power_defect(pres: Presymplectic, section_comps: List[TrigPoly]) -> float:
    """Max coefficient of (omega_C - d(j sigma))^{r/2 + 1} for a fitted section.

    Exactly zero for a genuinely coisotropic graph; fit noise shows up at the
    fit-residual scale.
    """
    base = pres.base
    n, k = base.dim, base.leaf_rank
    m = (n - k) // 2 + 1
    blocks = {}
    for i, f in enumerate(section_comps):
        if not f.is_zero():
            blocks[((), (i,))] = f
    sigma = BigradedForm(base, blocks)
    omega = pres.omega - sigma.exterior_d()
    power = omega.wedge_power(m)
    worst = 0.0
    for f in power.blocks.values():
        for c in f.coeffs.values():
            worst = max(worst, abs(complex(c)))
    return worst


def convergence_study(
    model: GotayModel,
    beta: BigradedForm,
    beta_ext: BigradedForm,
    t_max: float,
    base_steps: int,
    grid: int,
    halvings: int = 3,
) -> List[float]:
    """Derivative residuals for dt, dt/2, ..., dt/2^halvings."""
    out = []
    for j in range(halvings + 1):
        path = prolong(
            model,
            beta,
            beta_ext,
            t_max,
            base_steps * (2**j),
            grid,
            n_samples=2,
            fit=False,
        )
        out.append(path.deriv_residual)
    return out


def symplecticity_spot_check(
    model: GotayModel,
    beta_ext: BigradedForm,
    t: float,
    dt: float,
    n_points: int = 5,
    seed: int = 0,
) -> float:
    """Max defect |(flow pullback of omega_t) - Omega| on random point/vector pairs.

    The flow differential is taken by central differences; the Moser ansatz
    makes the pullback exactly the starting form.
    """
    numeric = NumericMoser(model, beta_ext)
    d = numeric.dim
    rng = np.random.default_rng(seed)
    steps = int(round(t / dt))
    pts = np.concatenate(
        [rng.uniform(0, 2 * np.pi, (n_points, numeric.n)), rng.uniform(-0.05, 0.05, (n_points, numeric.k))],
        axis=1,
    )
    h = 1e-5
    worst = 0.0
    for p in pts:
        u = rng.normal(size=d)
        v = rng.normal(size=d)
        batch = np.stack([p, p + h * u, p - h * u, p + h * v, p - h * v])
        out = numeric.flow(batch, steps, dt)
        du = (out[1] - out[2]) / (2 * h)
        dv = (out[3] - out[4]) / (2 * h)
        M_end = numeric.omega_matrices(out[:1, : numeric.n], out[:1, numeric.n :], t)[0]
        M_start = numeric.omega_matrices(
            p[None, : numeric.n], p[None, numeric.n :], 0.0
        )[0]
        pulled = du @ M_end @ dv
        original = u @ M_start @ v
        worst = max(worst, abs(pulled - original))
    return worst


# -- q-contact slices and the leafwise volume criterion ---------------------------------


@dataclass
class ContactSliceReport:
    ok: bool
    factor: object  # exact rational
    degenerate: bool
    top_margin: float
    reason: Optional[str] = None


def contact_model_check(
    pres: Presymplectic, alphas: Sequence[BigradedForm], h: Sequence, grid: int = 16
) -> ContactSliceReport:
    """Slice of the contact-type model over a constant fiber point.

    Requires d alpha_i = omega_C exactly and the defining top form nowhere
    zero; builds p* omega_C + sum_i d(y_i p* alpha_i) on the product with an
    h-dimensional fiber, pulls back to the slice y = h, and verifies the
    result equals (1 + sum h_i) omega_C exactly.
    """
    from ._rational import rat

    base = pres.base
    n, k = base.dim, base.leaf_rank
    q = len(alphas)
    for i, a in enumerate(alphas):
        if a.exterior_d() != pres.omega:
            raise ValueError(f"d alpha_{i} != omega (precondition)")
    # top form alpha_1 ^ ... ^ alpha_q ^ omega^{(n_model - q)} with
    # 2 n_model = dim C + q
    if (n + q) % 2:
        raise ValueError("dim C + q must be even")
    n_model = (n + q) // 2
    top = alphas[0]
    for a in alphas[1:]:
        top = top.wedge(a)
    top = top.wedge(pres.omega.wedge_power(n_model - q))
    if not top.blocks:
        return ContactSliceReport(
            False, factor=rat(0), degenerate=True, top_margin=0.0, reason="top form vanishes"
        )
    if all(f.is_constant() for f in top.blocks.values()):
        margin = max(abs(complex(f.constant_value())) for f in top.blocks.values())
    else:
        pts = _grid_points(n, grid)
        vals = np.stack([f.eval_many(pts) for f in top.blocks.values()])
        margin = float(np.abs(vals).max(axis=0).min())
    if margin <= 1e-12:
        return ContactSliceReport(
            False, factor=rat(0), degenerate=True, top_margin=margin, reason="top form has a zero"
        )

    h = [rat(x) for x in h]
    if len(h) != q:
        raise ValueError("slice point dimension must match the number of one-forms")
    # build the model over a q-dimensional fiber and pull back to y = h
    from .gotay import PolyTrig, lift_coord_form, section_substitute
    from .foliated.exterior import coord_add

    omega_coord = pres.omega.to_coordinates()
    total = lift_coord_form(omega_coord, q)
    for i, a in enumerate(alphas):
        a_coord = lift_coord_form(a.to_coordinates(), q)
        yi = PolyTrig.fiber_var(n, q, i)
        y_alpha = {legs: yi * f for legs, f in a_coord.items()}
        total = coord_add(total, coord_d(y_alpha, n + q))
    h_consts = [TrigPoly.const(n, x) for x in h]
    slice_coord = section_substitute(total, n, q, h_consts)
    factor = rat(1) + sum(h, rat(0))
    want = {legs: f.scale(factor) for legs, f in omega_coord.items() if not f.scale(factor).is_zero()}
    if slice_coord != want:
        raise AssertionError("slice pullback does not match the scaled form")  # fault
    return ContactSliceReport(
        ok=factor != 0, factor=factor, degenerate=factor == 0, top_margin=margin,
        reason=None if factor != 0 else "scale factor vanishes",
    )


@dataclass
class RummlerReport:
    ok: bool
    leaf_margin: float
    offending_block: Optional[tuple] = None


def rummler_check(base_or_pres, alphas: Sequence[BigradedForm], grid: int = 16) -> RummlerReport:
    """Leafwise volume criterion for the wedge of the given one-forms.

    gamma = alpha_1 ^ ... ^ alpha_q must restrict nowhere zero to the leaves
    (grid margin on its purely leafwise block) and d gamma must vanish
    whenever at least q arguments are leafwise, i.e. the (0, q+1) and (1, q)
    blocks of d gamma are exactly zero.
    """
    base = base_or_pres.base if isinstance(base_or_pres, Presymplectic) else base_or_pres
    q = len(alphas)
    gamma = alphas[0]
    for a in alphas[1:]:
        gamma = gamma.wedge(a)
    leaf_block = gamma.homogeneous_part(0, q)
    if not leaf_block.blocks:
        return RummlerReport(False, 0.0, offending_block=("leaf volume", "zero"))
    if all(f.is_constant() for f in leaf_block.blocks.values()):
        margin = max(abs(complex(f.constant_value())) for f in leaf_block.blocks.values())
    else:
        pts = _grid_points(base.dim, grid)
        vals = np.stack([f.eval_many(pts) for f in leaf_block.blocks.values()])
        margin = float(np.abs(vals).max(axis=0).min())
    if margin <= 1e-12:
        return RummlerReport(False, margin, offending_block=("leaf volume", "vanishes"))
    d = gamma.exterior_d()
    for (T, L) in sorted(d.blocks):
        if len(T) == 0 and len(L) == q + 1:
            return RummlerReport(False, margin, offending_block=(T, L))
        if len(T) == 1 and len(L) == q:
            return RummlerReport(False, margin, offending_block=(T, L))
    return RummlerReport(True, margin)
