"""Extension checks, the Moser field, prolongation, contact and volume checks."""

import numpy as np
import pytest

from folcalc.foliated import BigradedForm
from folcalc.gotay import build_gotay
from folcalc.models import (
    cospower_kernel_form,
    lagrangian_t2_twisted,
    lagrangian_torus,
    t3_infinite_kernel,
    zambon_t4,
)
from folcalc.moser import (
    NotAnExtension,
    NotBasicDifferential,
    contact_model_check,
    convergence_study,
    moser_field,
    prolong,
    rummler_check,
    symplecticity_spot_check,
    verify_extension,
)
from folcalc.trig_algebra import TrigPoly


def t3_setup(npow=2):
    pres = t3_infinite_kernel()
    model = build_gotay(pres)
    beta = cospower_kernel_form(pres, npow)
    # extension: g dt1 + n cos^{n-1}(t2) e^3 keeps the differential basic
    l_ext = TrigPoly.const(3, npow)
    for _ in range(npow - 1):
        l_ext = l_ext * TrigPoly.cosine(3, 1)
    ext = BigradedForm(
        pres.base, {((), (0,)): beta.blocks[((), (0,))], ((2,), ()): l_ext}
    )
    return pres, model, beta, ext


class TestVerifyExtension:
    def test_closed_extension_ok(self):
        pres = lagrangian_torus(2)
        beta = BigradedForm(pres.base, {((), (0,)): TrigPoly.const(2, 1)})
        verify_extension(pres, beta, beta)

    def test_t3_valid_extension(self):
        pres, model, beta, ext = t3_setup(2)
        verify_extension(pres, beta, ext)

    def test_naive_extension_rejected(self):
        # cos(t2) dt1 alone: iota_V d ext = sin(t2) dt2 != 0
        pres = t3_infinite_kernel()
        beta = cospower_kernel_form(pres, 1)
        with pytest.raises(NotBasicDifferential):
            verify_extension(pres, beta, beta)

    def test_wrong_restriction_rejected(self):
        pres = t3_infinite_kernel()
        beta = cospower_kernel_form(pres, 1)
        other = BigradedForm(pres.base, {((), (0,)): TrigPoly.const(3, 1)})
        with pytest.raises(NotAnExtension):
            verify_extension(pres, beta, other)


class TestMoserField:
    def test_lagrangian_constant_field(self):
        pres = lagrangian_torus(2)
        model = build_gotay(pres)
        beta = BigradedForm(pres.base, {((), (0,)): TrigPoly.const(2, 1)})
        for point in ([0.0, 0.0, 0.0, 0.0], [1.0, 2.0, 0.3, -0.2]):
            X = moser_field(model, beta, 0.0, point)
            assert np.allclose(X, [0.0, 0.0, -1.0, 0.0], atol=1e-14)

    def test_zero_extension_zero_field(self):
        pres, model, beta, ext = t3_setup(2)
        zero = BigradedForm.zero(pres.base)
        X = moser_field(model, zero, 0.1, [0.2, 0.4, 0.6, 0.0])
        assert np.allclose(X, 0.0)

    def test_contraction_residual_random_points(self, rng):
        # iota_X omega_t = p* ext to 1e-12 relative at random points
        from folcalc.moser import NumericMoser

        pres, model, beta, ext = t3_setup(2)
        numeric = NumericMoser(model, ext)
        rs = np.random.default_rng(3)
        pts = np.concatenate(
            [rs.uniform(0, 2 * np.pi, (100, 3)), rs.uniform(-0.1, 0.1, (100, 1))], axis=1
        )
        for t in (0.0, 0.05, 0.1):
            X = numeric.field(t, pts)
            M = numeric.omega_matrices(pts[:, :3], pts[:, 3:], t)
            b = numeric.rhs(pts[:, :3])
            resid = np.abs(np.einsum("pa,pab->pb", X, M) - b).max()
            assert resid < 1e-12 * (1 + np.abs(b).max())


class TestProlong:
    def test_lagrangian_closed_form(self):
        pres = lagrangian_torus(2)
        model = build_gotay(pres)
        beta = BigradedForm(pres.base, {((), (0,)): TrigPoly.const(2, 1)})
        path = prolong(model, beta, beta, t_max=0.1, steps=100, grid=8, n_samples=6)
        assert path.max_initial_section() <= 1e-10
        for t, u in zip(path.times, path.sections):
            assert np.abs(u - np.array([t, 0.0])).max() < 1e-8
        assert path.deriv_residual < 1e-10

    def test_zero_deformation(self):
        pres = lagrangian_torus(2)
        model = build_gotay(pres)
        zero = BigradedForm.zero(pres.base)
        path = prolong(model, zero, zero, t_max=0.05, steps=20, grid=4, n_samples=3)
        for u in path.sections:
            assert np.abs(u).max() < 1e-12

    def test_t3_end_to_end(self):
        pres, model, beta, ext = t3_setup(2)
        path = prolong(model, beta, ext, t_max=0.1, steps=100, grid=8, n_samples=4)
        assert path.max_initial_section() <= 1e-10
        assert path.deriv_residual < 5 * path.dt
        assert all(d["rank_margin"] > 0.5 * path.initial_margin for d in path.diagnostics)
        assert max(path.fit_residuals) < 1e-8
        assert path.fit_power_defect < 1e-8

    def test_convergence_ratios_t3(self):
        # grid 8: multiples of pi/2 alone would sit exactly where the path
        # curvature vanishes and the residual degenerates to zero
        pres, model, beta, ext = t3_setup(2)
        residuals = convergence_study(model, beta, ext, t_max=0.1, base_steps=50, grid=8, halvings=3)
        for a, b in zip(residuals, residuals[1:]):
            assert a / b >= 1.8

    def test_lagrangian_residuals_at_floor(self):
        # Lagrangian flows are exact vertical translations: residuals vanish
        for pres in (lagrangian_torus(2), lagrangian_t2_twisted()):
            model = build_gotay(pres)
            blocks = {((), (0,)): TrigPoly.const(2, 1)}
            if pres.base.fields[1][0].is_zero():
                beta = BigradedForm(pres.base, blocks)
            else:
                blocks[((), (1,))] = TrigPoly.cosine(2, 0)
                beta = BigradedForm(pres.base, blocks)
            residuals = convergence_study(model, beta, beta, t_max=0.1, base_steps=50, grid=4, halvings=2)
            assert all(r < 1e-9 for r in residuals)

    def test_symplecticity_spot_check(self):
        pres, model, beta, ext = t3_setup(2)
        assert symplecticity_spot_check(model, ext, t=0.05, dt=1e-3) < 1e-6

    def test_singular_time_reported(self):
        # the family's Pfaffian is 1 + 2 t sin(t2): it degenerates at
        # t = 1/2, t2 = 3 pi / 2, and the field solve must fail loudly there
        from folcalc.moser import SingularAtPoint

        pres, model, beta, ext = t3_setup(2)
        with pytest.raises(SingularAtPoint) as err:
            moser_field(model, ext, 0.5, [0.0, 3 * np.pi / 2, 0.0, 0.0])
        assert err.value.t == 0.5


class TestContactSlices:
    def lagrangian_contact_data(self, n=2):
        pres = lagrangian_torus(n)
        alphas = [
            BigradedForm(pres.base, {((), (i,)): TrigPoly.const(n, 1)}) for i in range(n)
        ]
        return pres, alphas

    def test_factor_formula(self):
        pres, alphas = self.lagrangian_contact_data()
        report = contact_model_check(pres, alphas, ["1/8", "-1/16"])
        from folcalc._rational import rat

        assert report.ok
        assert report.factor == rat(1) + rat("1/8") + rat("-1/16")
        assert report.top_margin == 1.0

    def test_zero_slice(self):
        pres, alphas = self.lagrangian_contact_data()
        report = contact_model_check(pres, alphas, [0, 0])
        assert report.ok and report.factor == 1

    def test_degenerate_slice_flagged(self):
        pres, alphas = self.lagrangian_contact_data()
        report = contact_model_check(pres, alphas, ["-1/2", "-1/2"])
        assert not report.ok and report.degenerate

    def test_wrong_primitive_rejected(self):
        pres, alphas = self.lagrangian_contact_data()
        bad = [BigradedForm(pres.base, {((), (0,)): TrigPoly.cosine(2, 1)})] + alphas[1:]
        with pytest.raises(ValueError):
            contact_model_check(pres, bad, [0, 0])


class TestRummler:
    def test_lagrangian_volume(self):
        pres, alphas = TestContactSlices().lagrangian_contact_data()
        report = rummler_check(pres, alphas)
        assert report.ok and report.leaf_margin == 1.0

    def test_contact_type_blocks_vanish_by_bidegree(self):
        # one-forms with d alpha = omega of bidegree (2,0): the offending
        # blocks of d gamma vanish because the transverse factor eats two
        # leafwise slots
        pres = zambon_t4()
        # alpha_i with d alpha_i = omega: t1 dt2-like is not periodic; use the
        # fiberless identity: any alpha with d alpha = omega works only if
        # omega is exact, which dt1^dt2 on T4 is not; test the bidegree logic
        # directly with gamma = e1^e2 + leaf-closed corrections instead.
        gamma_factors = [
            BigradedForm(pres.base, {((), (0,)): TrigPoly.const(4, 1)}),
            BigradedForm(pres.base, {((), (1,)): TrigPoly.const(4, 1)}),
        ]
        report = rummler_check(pres, gamma_factors)
        assert report.ok

    def test_defect_detected(self):
        pres = t3_infinite_kernel()
        # gamma = cos(t3) e1: d gamma has a (1,1) block -> fail with witness
        alpha = BigradedForm(pres.base, {((), (0,)): TrigPoly.cosine(3, 2)})
        report = rummler_check(pres, [alpha])
        assert not report.ok
        assert report.offending_block is not None


class TestRummlerNonClosed:
    def test_f_closed_but_not_closed(self):
        # alpha = (1 + cos(2 t2)/4) dt1 + cos(t2) e3 on the twisted T^3 has
        # d alpha = -sin(t2) e2 ^ e3: nonzero but purely transverse, so the
        # wedge restricts to a nowhere-zero leaf volume with F-closed
        # differential (the honest non-closed taut case)
        from folcalc._rational import CQ

        pres = t3_infinite_kernel()
        g = TrigPoly.const(3, 1) + TrigPoly.cosine(3, 1, 2, "1/4")
        alpha = BigradedForm(
            pres.base, {((), (0,)): g, ((2,), ()): TrigPoly.cosine(3, 1)}
        )
        d = alpha.exterior_d()
        assert d == BigradedForm(pres.base, {((1, 2), ()): -TrigPoly.sine(3, 1)})
        report = rummler_check(pres, [alpha])
        assert report.ok
        assert report.leaf_margin >= 0.74  # 1 + cos(2 t2)/4 in [3/4, 5/4]
