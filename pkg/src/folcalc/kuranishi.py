"""The canonical binary bracket and obstruction verdicts.

Two independent routes compute the bracket of first-order deformations:

* lambda2: the canonical formula
      lambda2(a, b) = -<<(Id (x) flat^{-1})(tau(d10 a)), tau(d10 b)>>
  built entirely from the foliated-calculus primitives; this is the
  production path and works on every supported geometry.
* lambda2_oracle: the derived-bracket expression P([[Pi, X_a], X_b]) through
  the local model's Poisson jet, with X the vertical fiberwise-constant
  fields corresponding to the forms.  It requires the zero-order matrix of
  the model form to be ring-invertible and exists to validate the canonical
  formula, not to replace it.

A first-order deformation beta is judged as follows: a kernel certificate
for the transverse differentiation map (currently the worked T^3 family)
certifies unobstructedness; lambda2(beta, beta) = 0 identically also does;
a non-exactness certificate for lambda2(beta, beta) certifies obstruction;
everything else is inconclusive (the bracket criterion is necessary, not
sufficient, and box-limited solves prove nothing negative).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .cohomology import ExactnessVerdict, KernelVerdict, dnu_kernel_test, exactness_test
from .foliated import (
    BigradedForm,
    NotLeafwiseClosed,
    Presymplectic,
    d10_of_foliated,
    leafwise_d,
    pairing,
    tau,
)
from .gotay import (
    GotayModel,
    PolyTrig,
    PolyTrigMultivector,
    pi_jet,
    schouten_bracket,
    vert_field_from_form,
    form_from_vert_field,
)
from .trig_algebra import TrigPoly


def lambda2(pres: Presymplectic, alpha: BigradedForm, beta: BigradedForm) -> BigradedForm:
    """Canonical binary bracket of two foliated one-forms (a foliated two-form)."""
    for f in (alpha, beta):
        if not f.is_foliated():
            raise ValueError("lambda2 expects foliated one-forms")
        if not f.is_zero() and f.bidegree() != (0, 1):
            raise ValueError("lambda2 expects foliated one-forms")
    if alpha.is_zero() or beta.is_zero():
        return BigradedForm.zero(pres.base)
    left = pres.flat_inv(tau(d10_of_foliated(alpha)))
    right = tau(d10_of_foliated(beta))
    return -pairing(left, right)


def lambda2_oracle(model: GotayModel, alpha: BigradedForm, beta: BigradedForm) -> BigradedForm:
    """Derived-bracket route: vertical projection of [[Pi, X_alpha], X_beta].

    Exact within the order-2 fiber jet of the Poisson bivector (the vertical
    projection restricts to the zero section after two differentiations).
    """
    n, k = model.n, model.k
    Pi = pi_jet(model, order=2)
    Xa = vert_field_from_form(model, alpha)
    Xb = vert_field_from_form(model, beta)
    B = schouten_bracket(schouten_bracket(Pi, Xa), Xb)
    comps = {}
    for legs, f in B.comps.items():
        if all(l >= n for l in legs):
            g = f.at_zero_section()
            if not g.is_zero():
                comps[legs] = PolyTrig.lift(g, k)
    vertical = PolyTrigMultivector(n, k, comps)
    return form_from_vert_field(model, vertical)


@dataclass
class KuranishiVerdict:
    status: str  # UnobstructedCertified | ObstructedCertified | Inconclusive
    lambda2_value: BigradedForm
    certificate: Optional[ExactnessVerdict] = None
    kernel_certificate: Optional[KernelVerdict] = None
    route: str = ""


def _t3_kernel_route(pres: Presymplectic, beta: BigradedForm) -> Optional[KernelVerdict]:
    """Kernel certificate when beta is a g(t2) leaf-coframe class on the worked T^3."""
    from .models import t3_infinite_kernel

    if not pres.base.same_frame(t3_infinite_kernel().base):
        return None
    if set(beta.blocks) - {((), (0,))}:
        return None
    g = beta.blocks.get(((), (0,)), TrigPoly.zero(pres.base.dim))
    if g.support_axes() - {1}:
        return None
    verdict = dnu_kernel_test(g)
    return verdict if verdict.in_kernel else None


def kuranishi(pres: Presymplectic, beta: BigradedForm, box: Optional[int] = None) -> KuranishiVerdict:
    """Obstruction verdict for a leafwise-closed foliated one-form."""
    if not beta.is_zero() and not leafwise_d(beta).is_zero():
        raise NotLeafwiseClosed("first-order deformations must be leafwise closed")
    lam = lambda2(pres, beta, beta)

    kernel = _t3_kernel_route(pres, beta)
    if kernel is not None:
        return KuranishiVerdict(
            "UnobstructedCertified",
            lambda2_value=lam,
            kernel_certificate=kernel,
            route="transverse-kernel certificate",
        )
    if lam.is_zero():
        return KuranishiVerdict(
            "UnobstructedCertified", lambda2_value=lam, route="bracket vanishes identically"
        )
    exact = exactness_test(lam, box=box)
    if exact.status == "NotExactCertified":
        return KuranishiVerdict(
            "ObstructedCertified", lambda2_value=lam, certificate=exact, route="averaging certificate"
        )
    return KuranishiVerdict("Inconclusive", lambda2_value=lam, certificate=exact, route="no certificate")
