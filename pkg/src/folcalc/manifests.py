"""Manifest schema, geometry (de)serialization, and report writing.

Manifests are JSON with exact rationals as "p/q" strings so coefficient
tables round-trip bit-exactly.  Unknown fields are rejected; every numeric
default is echoed back into the report for reproducibility, and reports are
written with sorted keys so equal runs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

import jsonschema

from ._rational import rat, rat_str
from .foliated import BigradedForm, FramedTorus, Presymplectic
from .trig_algebra import TrigPoly

SCENARIOS = (
    "coisotropic-check",
    "dnu-kernel",
    "kuranishi",
    "moser-prolong",
    "contact-slices",
    "anosov-check",
    "suspension-h1",
)

_TRIGPOLY_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {
            "k": {"type": "array", "items": {"type": "integer"}},
            "re": {"type": ["string", "integer"]},
            "im": {"type": ["string", "integer"]},
        },
        "required": ["k"],
        "additionalProperties": False,
    },
}

_FORM_BLOCKS_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {
            "transverse": {"type": "array", "items": {"type": "integer"}},
            "leaf": {"type": "array", "items": {"type": "integer"}},
            "coeff": _TRIGPOLY_SCHEMA,
        },
        "required": ["coeff"],
        "additionalProperties": False,
    },
}

_GEOMETRY_SCHEMA = {
    "type": "object",
    "properties": {
        "torus_dim": {"type": "integer", "minimum": 1},
        "leaf_rank": {"type": "integer", "minimum": 1},
        "frame": {"type": "array", "items": {"type": "array", "items": _TRIGPOLY_SCHEMA}},
        "omega": _FORM_BLOCKS_SCHEMA,
    },
    "required": ["torus_dim", "leaf_rank", "frame", "omega"],
    "additionalProperties": False,
}

_NUMERICS_SCHEMA = {
    "type": "object",
    "properties": {
        "grid": {"type": "integer", "minimum": 2},
        "dt": {"type": "number", "exclusiveMinimum": 0},
        "t_max": {"type": "number", "exclusiveMinimum": 0},
        "samples": {"type": "integer", "minimum": 2},
        "newton_tol": {"type": "number", "exclusiveMinimum": 0},
        "seed": {"type": "integer"},
        "box": {"type": ["integer", "null"]},
    },
    "additionalProperties": False,
}

MANIFEST_SCHEMA = {
    "type": "object",
    "properties": {
        "version": {"type": "string", "enum": ["1"]},
        "scenario": {"type": "string", "enum": list(SCENARIOS)},
        "description": {"type": "string"},
        "geometry": _GEOMETRY_SCHEMA,
        "inputs": {
            "type": "object",
            "properties": {
                "section": {"type": "array", "items": _TRIGPOLY_SCHEMA},
                "g": _TRIGPOLY_SCHEMA,
                "beta": _FORM_BLOCKS_SCHEMA,
                "beta_ext": _FORM_BLOCKS_SCHEMA,
                "alphas": {"type": "array", "items": _FORM_BLOCKS_SCHEMA},
                "h": {"type": "array", "items": {"type": ["string", "integer"]}},
                "matrix": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "integer"}},
                },
                "leaf_indices": {"type": "array", "items": {"type": "integer"}},
                "dense_leaves": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
        "numerics": _NUMERICS_SCHEMA,
    },
    "required": ["version", "scenario", "inputs"],
    "additionalProperties": False,
}

_SCENARIO_GEOMETRY = {
    "coisotropic-check": True,
    "dnu-kernel": True,
    "kuranishi": True,
    "moser-prolong": True,
    "contact-slices": True,
    "anosov-check": False,
    "suspension-h1": False,
}

NUMERIC_DEFAULTS = {
    "grid": 32,
    "dt": 1e-3,
    "t_max": 0.1,
    "samples": 6,
    "newton_tol": 1e-10,
    "seed": 0,
    "box": None,
}


class ManifestError(ValueError):
    pass


def load_manifest(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as e:
        raise ManifestError(f"cannot read manifest: {e}")
    except json.JSONDecodeError as e:
        raise ManifestError(f"manifest is not valid JSON: {e}")
    try:
        jsonschema.validate(data, MANIFEST_SCHEMA)
    except jsonschema.ValidationError as e:
        raise ManifestError(f"schema violation at {e.json_path}: {e.message}")
    if _SCENARIO_GEOMETRY[data["scenario"]] and "geometry" not in data:
        raise ManifestError(f"scenario {data['scenario']} requires a geometry block")
    return data


def resolve_numerics(manifest: dict, overrides: Optional[dict] = None) -> dict:
    out = dict(NUMERIC_DEFAULTS)
    base = manifest.get("numerics", {})
    dim = manifest.get("geometry", {}).get("torus_dim")
    if dim is not None and dim >= 4 and "grid" not in base:
        out["grid"] = 16
    out.update(base)
    if overrides:
        out.update({k: v for k, v in overrides.items() if v is not None})
    return out


# -- geometry and forms --------------------------------------------------------------


def trigpoly_from_json(dim: int, records: list) -> TrigPoly:
    return TrigPoly.from_records(dim, records)


def trigpoly_to_json(f: TrigPoly) -> list:
    return f.to_records()


def geometry_from_json(geo: dict) -> Presymplectic:
    n = geo["torus_dim"]
    k = geo["leaf_rank"]
    frame = geo["frame"]
    if len(frame) != n or any(len(f) != n for f in frame):
        raise ManifestError("frame must be a torus_dim x torus_dim table of coefficient tables")
    fields = [[trigpoly_from_json(n, comp) for comp in field] for field in frame]
    base = FramedTorus(n, k, fields)
    omega = form_from_json(base, geo["omega"])
    return Presymplectic(base, omega)


def geometry_to_json(pres: Presymplectic) -> dict:
    base = pres.base
    return {
        "torus_dim": base.dim,
        "leaf_rank": base.leaf_rank,
        "frame": [[trigpoly_to_json(c) for c in field] for field in base.fields],
        "omega": form_to_json(pres.omega),
    }


def form_from_json(base: FramedTorus, blocks: list) -> BigradedForm:
    table = {}
    for b in blocks:
        T = tuple(b.get("transverse", []))
        L = tuple(b.get("leaf", []))
        f = trigpoly_from_json(base.dim, b["coeff"])
        if not f.is_zero():
            table[(T, L)] = table.get((T, L), TrigPoly.zero(base.dim)) + f
    return BigradedForm(base, table)


def form_to_json(form: BigradedForm) -> list:
    return [
        {"transverse": list(T), "leaf": list(L), "coeff": trigpoly_to_json(f)}
        for (T, L), f in sorted(form.blocks.items())
    ]


def rationals_from_json(values: list) -> list:
    return [rat(v) for v in values]


def write_report(path: Path, report: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
        fh.write("\n")


def qty(value: float, tol: float, kind: str = "abs") -> dict:
    """A number together with the tolerance it was checked against."""
    return {"value": float(value), "tol": float(tol), "tol_kind": kind}


def exact(value) -> dict:
    """An exactly computed rational, serialized as a string."""
    return {"value": rat_str(rat(value)), "exact": True}
