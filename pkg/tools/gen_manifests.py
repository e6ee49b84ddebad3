#!/usr/bin/env python3
"""Regenerate the bundled example manifests from the model builders.

Run from the repository root:  python tools/gen_manifests.py
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from folcalc.foliated import BigradedForm
from folcalc.manifests import form_to_json, geometry_to_json, trigpoly_to_json
from folcalc.models import (
    cospower_kernel_form,
    lagrangian_torus,
    t3_infinite_kernel,
    zambon_t4,
)
from folcalc.trig_algebra import TrigPoly

OUT = Path(__file__).resolve().parent.parent / "src" / "folcalc" / "data" / "manifests"

SL4 = [[3, 1, 1, 1], [1, 2, 1, 0], [1, 1, 1, 0], [1, 0, 0, 1]]


def t3_cos2_extension(pres):
    beta = cospower_kernel_form(pres, 2)
    ext = BigradedForm(
        pres.base,
        {((), (0,)): beta.blocks[((), (0,))], ((2,), ()): TrigPoly.cosine(3, 1, 1, 2)},
    )
    return beta, ext


def manifests():
    z4 = zambon_t4()
    t3 = t3_infinite_kernel()
    lag = lagrangian_torus(2)

    obstructed_beta = BigradedForm(
        z4.base,
        {((), (0,)): TrigPoly.sine(4, 0), ((), (1,)): TrigPoly.cosine(4, 1)},
    )
    beta_t3, ext_t3 = t3_cos2_extension(t3)
    cos2 = cospower_kernel_form(t3, 2).blocks[((), (0,))]
    lag_beta = BigradedForm(lag.base, {((), (0,)): TrigPoly.const(2, 1)})
    lag_alphas = [
        BigradedForm(lag.base, {((), (i,)): TrigPoly.const(2, 1)}) for i in range(2)
    ]

    yield "zambon-t4-kuranishi.json", {
        "version": "1",
        "scenario": "kuranishi",
        "description": "obstructed first-order deformation on the flat T^4 product model",
        "geometry": geometry_to_json(z4),
        "inputs": {"beta": form_to_json(obstructed_beta)},
    }
    yield "t3-coskernel.json", {
        "version": "1",
        "scenario": "dnu-kernel",
        "description": "cos^2 class lies in the transverse-derivative kernel on the twisted T^3",
        "geometry": geometry_to_json(t3),
        "inputs": {"g": trigpoly_to_json(cos2)},
    }
    yield "t3-kuranishi-cospower.json", {
        "version": "1",
        "scenario": "kuranishi",
        "description": "kernel-certified unobstructed deformation on the twisted T^3",
        "geometry": geometry_to_json(t3),
        "inputs": {"beta": form_to_json(beta_t3)},
    }
    yield "zambon-t4-coisotropic.json", {
        "version": "1",
        "scenario": "coisotropic-check",
        "description": "graph of the obstructed section fails the wedge-power rank criterion",
        "geometry": geometry_to_json(z4),
        "inputs": {
            "section": [
                trigpoly_to_json(TrigPoly.sine(4, 0)),
                trigpoly_to_json(TrigPoly.cosine(4, 1)),
            ]
        },
        "numerics": {"grid": 8},
    }
    yield "lagrangian-t2-moser.json", {
        "version": "1",
        "scenario": "moser-prolong",
        "description": "closed-form prolongation on the Lagrangian 2-torus (sigma_t = t dtheta_1)",
        "geometry": geometry_to_json(lag),
        "inputs": {"beta": form_to_json(lag_beta), "beta_ext": form_to_json(lag_beta)},
        "numerics": {"grid": 8, "dt": 0.0025, "t_max": 0.05, "samples": 4},
    }
    yield "t3-moser-cos2.json", {
        "version": "1",
        "scenario": "moser-prolong",
        "description": "prolongation of the cos^2 kernel class on the twisted T^3",
        "geometry": geometry_to_json(t3),
        "inputs": {"beta": form_to_json(beta_t3), "beta_ext": form_to_json(ext_t3)},
        "numerics": {"grid": 8, "dt": 0.0025, "t_max": 0.05, "samples": 4},
    }
    yield "lagrangian-contact-slices.json", {
        "version": "1",
        "scenario": "contact-slices",
        "description": "n-contact slices of the Lagrangian torus scale the form by 1 + sum(h)",
        "geometry": geometry_to_json(lag),
        "inputs": {"alphas": [form_to_json(a) for a in lag_alphas], "h": ["1/8", "-1/16"]},
        "numerics": {"grid": 8},
    }
    yield "anosov-sl4.json", {
        "version": "1",
        "scenario": "anosov-check",
        "description": "SL(4,Z) symplectic matrix: exact certificates and suspension form",
        "inputs": {"matrix": SL4, "leaf_indices": [0, 3]},
    }
    yield "anosov-suspension-h1.json", {
        "version": "1",
        "scenario": "suspension-h1",
        "description": "first leafwise cohomology of the suspension foliation is spanned by dt",
        "inputs": {"matrix": SL4, "leaf_indices": [0, 3], "dense_leaves": True},
    }


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, data in manifests():
        path = OUT / name
        with open(path, "w") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
