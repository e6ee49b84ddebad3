"""Example geometries used by the tests, the bundled manifests, and the CLI.

Frame ordering everywhere: leafwise fields first, then the complement.
"""

from __future__ import annotations

from .foliated import BigradedForm, FramedTorus, Presymplectic
from .trig_algebra import TrigPoly


def _basis_field(n: int, axis: int):
    return [TrigPoly.const(n, 1) if a == axis else TrigPoly.zero(n) for a in range(n)]


def lagrangian_torus(n: int = 2) -> Presymplectic:
    """T^n with the zero presymplectic form; every direction is leafwise."""
    fields = [_basis_field(n, a) for a in range(n)]
    base = FramedTorus(n, n, fields)
    return Presymplectic(base, BigradedForm.zero(base))


def lagrangian_t2_twisted() -> Presymplectic:
    """T^2, leaf rank 2, with a non-coordinate unimodular frame.

    V1 = d/dt1, V2 = cos(t1) d/dt1 + d/dt2.  The zero form is still
    presymplectic; the twisted frame makes the local model genuinely
    fiber-dependent, which exercises the curved branch of the flow pipeline.
    """
    n = 2
    v1 = _basis_field(n, 0)
    v2 = [TrigPoly.cosine(n, 0), TrigPoly.const(n, 1)]
    base = FramedTorus(n, 2, [v1, v2])
    return Presymplectic(base, BigradedForm.zero(base))


def zambon_t4() -> Presymplectic:
    """T^4 with omega = dt1 ^ dt2 and leaves spanned by d/dt3, d/dt4.

    Frame: V1 = d/dt3, V2 = d/dt4, Y1 = d/dt1, Y2 = d/dt2; the coframe is
    e1 = dt3, e2 = dt4, e3 = dt1, e4 = dt2 and omega = e3 ^ e4.
    """
    n = 4
    fields = [_basis_field(n, 2), _basis_field(n, 3), _basis_field(n, 0), _basis_field(n, 1)]
    base = FramedTorus(n, 2, fields)
    omega = BigradedForm(base, {((2, 3), ()): TrigPoly.const(n, 1)})
    return Presymplectic(base, omega)


def t3_infinite_kernel() -> Presymplectic:
    """T^3 with omega = dt2 ^ (dt3 - cos(t2) dt1).

    The single leaf field is V1 = d/dt1 + cos(t2) d/dt3; complement
    Y1 = d/dt2, Y2 = d/dt3.  Coframe: e1 = dt1, e2 = dt2,
    e3 = dt3 - cos(t2) dt1, and omega = e2 ^ e3.
    """
    n = 3
    v1 = [TrigPoly.const(n, 1), TrigPoly.zero(n), TrigPoly.cosine(n, 1)]
    base = FramedTorus(n, 1, [v1, _basis_field(n, 1), _basis_field(n, 2)])
    omega = BigradedForm(base, {((1, 2), ()): TrigPoly.const(n, 1)})
    return Presymplectic(base, omega)


def t3_noninvolutive_frame() -> FramedTorus:
    """T^3 frame whose complement is not involutive.

    Leaf: V1 = d/dt1; complement Y1 = d/dt2, Y2 = d/dt3 + sin(t2) d/dt1,
    so pr_G is well defined but [Y1, Y2] = cos(t2) d/dt1 leaves G.
    """
    n = 3
    y2 = [TrigPoly.sine(n, 1), TrigPoly.zero(n), TrigPoly.const(n, 1)]
    return FramedTorus(n, 1, [_basis_field(n, 0), _basis_field(n, 1), y2])


def cospower_kernel_form(pres: Presymplectic, npow: int) -> BigradedForm:
    """cos^n(t2) times the leaf coframe element on the T^3 geometry."""
    n = pres.base.dim
    g = TrigPoly.const(n, 1)
    for _ in range(npow):
        g = g * TrigPoly.cosine(n, 1)
    return BigradedForm(pres.base, {((), (0,)): g})
