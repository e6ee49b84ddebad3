"""Adapted-frame exterior calculus on foliated tori."""

from .forms import BigradedForm, NotLeafwiseClosed, leafwise_d, unit_form
from .frames import FramedTorus, FrameNotUnimodular, NotInvolutive, dual_coframe
from .operators import (
    Presymplectic,
    ValuedForm,
    bott_d,
    bott_d_star,
    d10_of_foliated,
    d_nu_rep,
    pairing,
    phi_map,
    tau,
    tau_inv,
)

__all__ = [
    "BigradedForm",
    "FramedTorus",
    "FrameNotUnimodular",
    "NotInvolutive",
    "NotLeafwiseClosed",
    "Presymplectic",
    "ValuedForm",
    "bott_d",
    "bott_d_star",
    "d10_of_foliated",
    "d_nu_rep",
    "dual_coframe",
    "leafwise_d",
    "pairing",
    "phi_map",
    "tau",
    "tau_inv",
    "unit_form",
]
