"""Binary bracket, derived-bracket oracle, and obstruction verdicts."""

import pytest

from folcalc.foliated import BigradedForm, NotLeafwiseClosed
from folcalc.gotay import build_gotay
from folcalc.kuranishi import kuranishi, lambda2, lambda2_oracle
from folcalc.models import cospower_kernel_form, t3_infinite_kernel, zambon_t4
from folcalc.trig_algebra import TrigPoly

from .conftest import random_trigpoly


def zambon_obstructed_beta(pres):
    return BigradedForm(
        pres.base, {((), (0,)): TrigPoly.sine(4, 0), ((), (1,)): TrigPoly.cosine(4, 1)}
    )


def random_one_form(rng, pres):
    base = pres.base
    blocks = {((), (l,)): random_trigpoly(rng, base.dim, 1) for l in range(base.leaf_rank)}
    return BigradedForm(base, blocks)


class TestLambda2:
    def test_single_leg_annihilates(self):
        pres = zambon_t4()
        beta = BigradedForm(pres.base, {((), (0,)): TrigPoly.sine(4, 0)})
        assert lambda2(pres, beta, beta).is_zero()

    def test_constant_flat_is_zero(self):
        pres = zambon_t4()
        beta = BigradedForm(pres.base, {((), (1,)): TrigPoly.const(4, 3)})
        assert lambda2(pres, beta, beta).is_zero()

    def test_worked_value(self):
        pres = zambon_t4()
        beta = zambon_obstructed_beta(pres)
        want = BigradedForm(
            pres.base,
            {((), (0, 1)): (TrigPoly.cosine(4, 0) * TrigPoly.sine(4, 1)).scale(-2)},
        )
        assert lambda2(pres, beta, beta) == want

    def test_symmetry(self, rng):
        pres = zambon_t4()
        for _ in range(15):
            a = random_one_form(rng, pres)
            b = random_one_form(rng, pres)
            assert lambda2(pres, a, b) == lambda2(pres, b, a)

    def test_scaling_quadratic(self, rng):
        pres = zambon_t4()
        beta = random_one_form(rng, pres)
        lam = lambda2(pres, beta, beta)
        assert lambda2(pres, beta.scale(3), beta.scale(3)) == lam.scale(9)


class TestOracleEquivalence:
    def test_zambon_random_pairs(self, rng):
        pres = zambon_t4()
        model = build_gotay(pres)
        for _ in range(50):
            a = random_one_form(rng, pres)
            b = random_one_form(rng, pres)
            assert lambda2_oracle(model, a, b) == lambda2(pres, a, b)

    def test_t3_random_pairs(self, rng):
        pres = t3_infinite_kernel()
        model = build_gotay(pres)
        for _ in range(20):
            a = random_one_form(rng, pres)
            b = random_one_form(rng, pres)
            assert lambda2_oracle(model, a, b) == lambda2(pres, a, b)

    def test_constant_model_constant_fields(self):
        pres = zambon_t4()
        model = build_gotay(pres)
        a = BigradedForm(pres.base, {((), (0,)): TrigPoly.const(4, 2)})
        assert lambda2_oracle(model, a, a).is_zero()


class TestKuranishiVerdicts:
    def test_zero_is_unobstructed(self):
        pres = zambon_t4()
        verdict = kuranishi(pres, BigradedForm.zero(pres.base))
        assert verdict.status == "UnobstructedCertified"
        assert verdict.lambda2_value.is_zero()

    def test_worked_obstructed(self):
        pres = zambon_t4()
        verdict = kuranishi(pres, zambon_obstructed_beta(pres))
        assert verdict.status == "ObstructedCertified"
        cert = verdict.certificate.certificate
        want = (TrigPoly.cosine(4, 0) * TrigPoly.sine(4, 1)).scale(-2)
        assert cert == want

    def test_cospower_family_unobstructed(self):
        pres = t3_infinite_kernel()
        for n in range(0, 11):
            beta = cospower_kernel_form(pres, n)
            verdict = kuranishi(pres, beta)
            assert verdict.status == "UnobstructedCertified"
            assert verdict.kernel_certificate is not None or verdict.lambda2_value.is_zero()

    def test_not_leafwise_closed_rejected(self):
        pres = zambon_t4()
        beta = BigradedForm(pres.base, {((), (0,)): TrigPoly.cosine(4, 3)})
        with pytest.raises(NotLeafwiseClosed):
            kuranishi(pres, beta)

    def test_kernel_family_never_certified_obstructed(self):
        # bracket of a kernel-family deformation with itself is never
        # certified non-exact (it vanishes identically here)
        from folcalc.cohomology import exactness_test

        pres = t3_infinite_kernel()
        for n in range(0, 11):
            beta = cospower_kernel_form(pres, n)
            lam = lambda2(pres, beta, beta)
            verdict = exactness_test(lam)
            assert verdict.status != "NotExactCertified"
