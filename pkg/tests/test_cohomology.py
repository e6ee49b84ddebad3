"""Exactness verdicts, the kernel test, class independence, suspension H1."""

import pytest

from folcalc.cohomology import (
    Unsupported,
    averaging_certificate,
    class_independence,
    dnu_kernel_test,
    exactness_test,
    suspension_h1,
)
from folcalc.foliated import BigradedForm, NotLeafwiseClosed, leafwise_d
from folcalc.models import cospower_kernel_form, t3_infinite_kernel, zambon_t4
from folcalc.trig_algebra import TrigPoly

from .conftest import random_trigpoly


class TestExactness:
    def test_exact_roundtrip_t3(self, rng):
        pres = t3_infinite_kernel()
        solved = 0
        for _ in range(10):
            h = BigradedForm(pres.base, {((), ()): random_trigpoly(rng, 3, max_freq=1)})
            g = leafwise_d(h)
            if g.is_zero():
                continue
            verdict = exactness_test(g)
            assert verdict.status == "ExactWithPrimitive"
            assert leafwise_d(verdict.primitive) == g
            solved += 1
        assert solved >= 5

    def test_zero_form(self):
        pres = t3_infinite_kernel()
        verdict = exactness_test(BigradedForm.zero(pres.base))
        assert verdict.status == "ExactWithPrimitive"
        assert verdict.primitive.is_zero()

    def test_worked_t3_certificate(self):
        # g(t2) (leaf coframe) with g nonzero is never exact; the averaging
        # certificate over the t1, t3 circles is g itself.
        pres = t3_infinite_kernel()
        g2 = TrigPoly.cosine(3, 1) + TrigPoly.const(3, 2)
        g = BigradedForm(pres.base, {((), (0,)): g2})
        verdict = exactness_test(g)
        assert verdict.status == "NotExactCertified"
        assert verdict.certificate == g2

    def test_zambon_lambda2_certificate(self):
        pres = zambon_t4()
        coef = (-TrigPoly.cosine(4, 0) * TrigPoly.sine(4, 1)).scale(2)
        g = BigradedForm(pres.base, {((), (0, 1)): coef})
        verdict = exactness_test(g)
        assert verdict.status == "NotExactCertified"
        assert verdict.certificate == coef

    def test_not_leafwise_closed_rejected(self):
        pres = zambon_t4()
        g = BigradedForm(pres.base, {((), (0,)): TrigPoly.cosine(4, 3)})
        with pytest.raises(NotLeafwiseClosed):
            exactness_test(g)

    def test_certificate_soundness_on_exact_forms(self, rng):
        # the averaging certificate evaluates to exactly zero on 200 random
        # leafwise-exact forms of the worked T^3 geometry
        pres = t3_infinite_kernel()
        checked = 0
        for _ in range(200):
            h = BigradedForm(pres.base, {((), ()): random_trigpoly(rng, 3, max_freq=2)})
            g = leafwise_d(h)
            if g.is_zero():
                continue
            cert, _ = averaging_certificate(g)
            assert cert is None
            checked += 1
        assert checked >= 150

    def test_certificate_soundness_zambon_two_forms(self, rng):
        pres = zambon_t4()
        checked = 0
        for _ in range(100):
            h = BigradedForm(
                pres.base,
                {
                    ((), (0,)): random_trigpoly(rng, 4, max_freq=1),
                    ((), (1,)): random_trigpoly(rng, 4, max_freq=1),
                },
            )
            g = leafwise_d(h)
            if g.is_zero():
                continue
            cert, _ = averaging_certificate(g)
            assert cert is None
            checked += 1
        assert checked >= 60


class TestKernelTest:
    def test_cosine_powers(self):
        for n in range(0, 11):
            g = TrigPoly.const(3, 1)
            for _ in range(n):
                g = g * TrigPoly.cosine(3, 1)
            verdict = dnu_kernel_test(g)
            assert verdict.in_kernel
            want = TrigPoly.const(3, 1)
            for _ in range(max(n - 1, 0)):
                want = want * TrigPoly.cosine(3, 1)
            want = want.scale(-n) if n else TrigPoly.zero(3)
            assert verdict.quotient == want

    def test_constant(self):
        verdict = dnu_kernel_test(TrigPoly.const(3, 1))
        assert verdict.in_kernel and verdict.quotient.is_zero()

    def test_sin_not_in_kernel(self):
        assert not dnu_kernel_test(TrigPoly.sine(3, 1)).in_kernel

    def test_multivariate_rejected(self):
        with pytest.raises(ValueError):
            dnu_kernel_test(TrigPoly.cosine(3, 2))

    def test_cross_validation_with_cochain_route(self, rng):
        # in-kernel g: the cochain representative of the transverse derivative
        # of g (leaf coframe) must be exact in the dual Bott complex; witness
        # the potential directly from the quotient: with l = g'/sin(t2),
        # xi = l e^3 has bott_d_star(xi) = rep (the e^2 component of
        # bott_d_star(l e^3) along the leaf field is -sin(t2) l = -g').
        from folcalc.foliated import ValuedForm, bott_d_star, d_nu_rep

        pres = t3_infinite_kernel()
        for n in range(0, 6):
            g = TrigPoly.const(3, 1)
            for _ in range(n):
                g = g * TrigPoly.cosine(3, 1)
            verdict = dnu_kernel_test(g)
            assert verdict.in_kernel
            rep = d_nu_rep(cospower_kernel_form(pres, n))
            xi = ValuedForm(pres.base, "Gstar", {(2, ()): verdict.quotient})
            assert bott_d_star(xi) == rep


class TestClassIndependence:
    def test_cosine_powers_rank(self):
        gs = []
        g = TrigPoly.const(3, 1)
        for n in range(3):
            gs.append(g)
            g = g * TrigPoly.cosine(3, 1)
        assert class_independence(gs) == 3

    def test_zero(self):
        assert class_independence([TrigPoly.zero(3)]) == 0

    def test_proportional(self):
        c = TrigPoly.cosine(3, 1)
        assert class_independence([c, c.scale(2)]) == 1

    def test_monotone_and_recombination_invariant(self, rng):
        c = TrigPoly.cosine(3, 1)
        gs = [TrigPoly.const(3, 1), c, c * c]
        r = class_independence(gs)
        assert class_independence(gs + [c * c * c]) >= r
        # invertible recombination: g0+g1, g1, g2
        mixed = [gs[0] + gs[1], gs[1], gs[2]]
        assert class_independence(mixed) == r


class TestSuspensionH1:
    def test_worked_eigenvalues(self):
        out = suspension_h1([4.390256, 0.227777], dense_leaves=True)
        assert out.dimension == 1
        assert out.generators == ["restriction of dt"]

    def test_unit_eigenvalue(self):
        assert suspension_h1([1.0], dense_leaves=True).dimension == 2

    def test_generic_eigenvalue(self):
        assert suspension_h1([2.0], dense_leaves=True).dimension == 1

    def test_empty_leaf_part(self):
        assert suspension_h1([], dense_leaves=True).dimension == 1

    def test_non_dense_unsupported(self):
        with pytest.raises(Unsupported):
            suspension_h1([2.0], dense_leaves=False)

    def test_nonpositive_rejected(self):
        with pytest.raises(ValueError):
            suspension_h1([-1.0], dense_leaves=True)


class TestKernelBoxCrossValidation:
    def test_two_routes_on_fixed_set(self):
        # forward: InKernel classes have box-solvable dual-Bott potentials;
        # backward: whenever the box solve succeeds the divisibility test
        # must agree (checked only where the solve succeeds)
        from folcalc.cohomology import bott_dstar_exactness_box
        from folcalc.foliated import bott_d_star, d_nu_rep

        pres = t3_infinite_kernel()
        cos = TrigPoly.cosine(3, 1)
        fixed = [TrigPoly.const(3, 1), cos, cos * cos, cos * cos * cos,
                 TrigPoly.sine(3, 1), TrigPoly.sine(3, 1) * cos]
        for g in fixed:
            verdict = dnu_kernel_test(g)
            beta = BigradedForm(pres.base, {((), (0,)): g})
            rep = d_nu_rep(beta)
            box = 2 * max(g.max_frequency(), 1) + 4
            xi = bott_dstar_exactness_box(rep, box)
            if verdict.in_kernel:
                assert xi is not None
                assert bott_d_star(xi) == rep
            if xi is not None:
                assert verdict.in_kernel
