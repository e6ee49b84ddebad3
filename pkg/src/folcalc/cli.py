"""Manifest-driven command-line front end.

    folcalc run <manifest.json> [--out DIR] [--grid N] [--dt X] [--seed S] [--json]
    folcalc examples [--json]

Exit codes: 0 all certified claims pass, 2 certified failure (e.g. an
obstructed deformation or a non-coisotropic section), 3 inconclusive,
1 input or usage error.  Reports are deterministic for a fixed manifest and
seed; every reported number carries the tolerance it was checked against.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .cohomology import Unsupported, dnu_kernel_test
from .foliated import NotLeafwiseClosed
from .gotay import Section, build_gotay, coisotropic_check, section_pullback
from .kuranishi import kuranishi, lambda2_oracle
from .manifests import (
    ManifestError,
    exact,
    form_from_json,
    form_to_json,
    geometry_from_json,
    load_manifest,
    qty,
    resolve_numerics,
    trigpoly_from_json,
    trigpoly_to_json,
    write_report,
)
from .mapping_torus import analyze_matrix, build_suspension_form, suspension_h1_report
from .moser import (
    NewtonDivergence,
    NotAnExtension,
    NotBasicDifferential,
    SingularAtPoint,
    contact_model_check,
    prolong,
    rummler_check,
    symplecticity_spot_check,
    verify_extension,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CERTIFIED_FAIL = 2
EXIT_INCONCLUSIVE = 3


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="folcalc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a manifest scenario")
    run_p.add_argument("manifest", help="path to the manifest JSON")
    run_p.add_argument("--out", default=None, help="output directory (default: alongside manifest)")
    run_p.add_argument("--grid", type=int, default=None, help="override grid resolution")
    run_p.add_argument("--dt", type=float, default=None, help="override integrator step")
    run_p.add_argument("--seed", type=int, default=None, help="override RNG seed")
    run_p.add_argument("--json", action="store_true", help="also print report.json to stdout")

    ex_p = sub.add_parser("examples", help="list the bundled example manifests")
    ex_p.add_argument("--json", action="store_true", help="machine-readable catalog")

    args = parser.parse_args(argv)
    try:
        if args.command == "examples":
            return _cmd_examples(args)
        return _cmd_run(args)
    except ManifestError as e:
        print(f"folcalc: manifest error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (Unsupported, NotAnExtension, NotBasicDifferential, NotLeafwiseClosed, ValueError) as e:
        print(f"folcalc: input error: {e}", file=sys.stderr)
        return EXIT_USAGE


# -- examples -------------------------------------------------------------------


def _bundled_manifests():
    try:
        root = resources.files("folcalc").joinpath("data/manifests")
        entries = sorted(p.name for p in root.iterdir() if p.name.endswith(".json"))
    except (FileNotFoundError, NotADirectoryError):
        return None, None
    catalog = []
    for name in entries:
        data = json.loads(root.joinpath(name).read_text())
        catalog.append(
            {
                "name": name,
                "scenario": data.get("scenario"),
                "description": data.get("description", ""),
            }
        )
    return root, catalog


def _cmd_examples(args) -> int:
    root, catalog = _bundled_manifests()
    if catalog is None:
        print("folcalc: bundled manifest directory is missing", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps({"manifests": catalog, "root": str(root)}, indent=2, sort_keys=True))
    else:
        for entry in catalog:
            print(f"{entry['name']:36s} [{entry['scenario']}] {entry['description']}")
        print(f"\nlocation: {root}")
    return EXIT_OK


def bundled_manifest_path(name: str) -> Path:
    root, _ = _bundled_manifests()
    if root is None:
        raise ManifestError("bundled manifest directory is missing")
    return Path(str(root.joinpath(name)))


# -- run ------------------------------------------------------------------------


_SCENARIOS = {}


def _scenario(name):
    def deco(fn):
        _SCENARIOS[name] = fn
        return fn

    return deco


def _cmd_run(args) -> int:
    manifest_path = Path(args.manifest)
    manifest = load_manifest(manifest_path)
    out_dir = Path(args.out) if args.out else manifest_path.parent / (manifest_path.stem + ".out")
    numerics = resolve_numerics(
        manifest, {"grid": args.grid, "dt": args.dt, "seed": args.seed}
    )
    handler = _SCENARIOS[manifest["scenario"]]
    report, code = handler(manifest, numerics, out_dir)
    report["scenario"] = manifest["scenario"]
    report["tool_version"] = __version__
    report["numerics"] = {k: v for k, v in numerics.items()}
    report["exit_code"] = code
    write_report(out_dir / "report.json", report)
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    return code


@_scenario("coisotropic-check")
def _run_coisotropic(manifest, numerics, out_dir):
    pres = geometry_from_json(manifest["geometry"])
    n, k = pres.base.dim, pres.base.leaf_rank
    model = build_gotay(pres)
    section = Section(
        tuple(trigpoly_from_json(n, rec) for rec in manifest["inputs"]["section"])
    )
    pulled = section_pullback(model, section)
    # base C = T^n sits in a 2m-model, 2m = n + k
    report_obj = coisotropic_check(
        pulled, k=n, n=(n + k) // 2, grid=numerics["grid"], collect_rows=True
    )
    _write_grid_csv(out_dir / "diagnostics.csv", report_obj.rows)
    report = {
        "status": "Coisotropic" if report_obj.coisotropic else "NotCoisotropic",
        "pullback": form_to_json(pulled),
        "power_vanishes": report_obj.power_vanishes,
        "margin": qty(report_obj.margin or 0.0, 1e-12, "grid-min"),
        "witness": report_obj.witness,
    }
    return report, EXIT_OK if report_obj.coisotropic else EXIT_CERTIFIED_FAIL


def _write_grid_csv(path, rows):
    if rows is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        dim = len(rows[0]["point"]) if rows else 0
        writer.writerow([f"theta_{i}" for i in range(dim)] + ["margin", "rank"])
        for row in rows:
            writer.writerow([repr(x) for x in row["point"]] + [repr(row["margin"]), row["rank"]])


@_scenario("dnu-kernel")
def _run_dnu_kernel(manifest, numerics, out_dir):
    from .models import t3_infinite_kernel

    pres = geometry_from_json(manifest["geometry"])
    if not pres.base.same_frame(t3_infinite_kernel().base):
        raise ManifestError("dnu-kernel requires the worked T^3 geometry")
    g = trigpoly_from_json(pres.base.dim, manifest["inputs"]["g"])
    verdict = dnu_kernel_test(g)
    report = {
        "status": "InKernel" if verdict.in_kernel else "NotInKernel",
        "g": trigpoly_to_json(g),
        "quotient": trigpoly_to_json(verdict.quotient) if verdict.quotient is not None else None,
    }
    return report, EXIT_OK if verdict.in_kernel else EXIT_CERTIFIED_FAIL


@_scenario("kuranishi")
def _run_kuranishi(manifest, numerics, out_dir):
    pres = geometry_from_json(manifest["geometry"])
    beta = form_from_json(pres.base, manifest["inputs"]["beta"])
    verdict = kuranishi(pres, beta, box=numerics.get("box"))
    report = {
        "status": verdict.status,
        "route": verdict.route,
        "lambda2": form_to_json(verdict.lambda2_value),
        "certificate": None,
        "kernel_quotient": None,
        "lambda2_oracle": None,
    }
    if verdict.certificate is not None and verdict.certificate.certificate is not None:
        report["certificate"] = trigpoly_to_json(verdict.certificate.certificate)
    if verdict.kernel_certificate is not None and verdict.kernel_certificate.quotient is not None:
        report["kernel_quotient"] = trigpoly_to_json(verdict.kernel_certificate.quotient)
    try:
        model = build_gotay(pres)
        oracle = lambda2_oracle(model, beta, beta)
        report["lambda2_oracle"] = form_to_json(oracle)
        report["oracle_agrees"] = oracle == verdict.lambda2_value
    except Exception:
        report["lambda2_oracle"] = None
    code = {
        "UnobstructedCertified": EXIT_OK,
        "ObstructedCertified": EXIT_CERTIFIED_FAIL,
        "Inconclusive": EXIT_INCONCLUSIVE,
    }[verdict.status]
    return report, code


@_scenario("moser-prolong")
def _run_moser(manifest, numerics, out_dir):
    pres = geometry_from_json(manifest["geometry"])
    beta = form_from_json(pres.base, manifest["inputs"]["beta"])
    beta_ext = form_from_json(pres.base, manifest["inputs"]["beta_ext"])
    model = build_gotay(pres)
    verify_extension(pres, beta, beta_ext)
    t_max = numerics["t_max"]
    dt = numerics["dt"]
    steps = max(1, int(round(t_max / dt)))
    try:
        path = prolong(
            model,
            beta,
            beta_ext,
            t_max=t_max,
            steps=steps,
            grid=numerics["grid"],
            n_samples=numerics["samples"],
            newton_tol=numerics["newton_tol"],
        )
    except (SingularAtPoint, NewtonDivergence) as e:
        report = {
            "status": type(e).__name__,
            "first_failure_time": float(e.t),
            "point": list(map(float, e.point)),
        }
        return report, EXIT_CERTIFIED_FAIL
    sympl = symplecticity_spot_check(
        model, beta_ext, t=path.times[-1], dt=dt, seed=numerics["seed"]
    )
    _write_moser_csv(out_dir / "diagnostics.csv", path)
    _write_plotdata(out_dir / "plotdata", path)
    ok = (
        path.max_initial_section() <= numerics["newton_tol"]
        and all(d["rank_margin"] > 0.5 * path.initial_margin for d in path.diagnostics)
    )
    report = {
        "status": "Prolonged" if ok else "DiagnosticsFailed",
        "times": [float(t) for t in path.times],
        "sigma0_max": qty(path.max_initial_section(), numerics["newton_tol"]),
        "deriv_residual": qty(path.deriv_residual, 5 * dt),
        "initial_margin": qty(path.initial_margin, 0.0, "reference"),
        "min_margin": qty(min(d["rank_margin"] for d in path.diagnostics), 0.5 * path.initial_margin, "lower-bound"),
        "max_rank_excess": qty(max(d["rank_excess"] for d in path.diagnostics), 1e-6),
        "fit_residual": qty(max(path.fit_residuals), 1e-8),
        "fit_power_defect": qty(path.fit_power_defect, 1e-8),
        "symplecticity_defect": qty(sympl, 1e-6),
        "diagnostics": [
            {k: (float(v) if isinstance(v, (int, float)) else v) for k, v in d.items()}
            for d in path.diagnostics
        ],
    }
    return report, EXIT_OK if ok else EXIT_CERTIFIED_FAIL


def _write_moser_csv(path, dpath):
    path.parent.mkdir(parents=True, exist_ok=True)
    n = dpath.grid_points.shape[1]
    k = dpath.sections[0].shape[1]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["t"]
            + [f"theta_{i}" for i in range(n)]
            + [f"fiber_{i}" for i in range(k)]
            + ["rank_margin", "newton_residual"]
        )
        for t, u, diag in zip(dpath.times, dpath.sections, dpath.diagnostics):
            for p, row in zip(dpath.grid_points, u):
                writer.writerow(
                    [repr(float(t))]
                    + [repr(float(x)) for x in p]
                    + [repr(float(x)) for x in row]
                    + [repr(diag["rank_margin"]), repr(diag["newton_residual"])]
                )


def _write_plotdata(out_dir, dpath):
    out_dir.mkdir(parents=True, exist_ok=True)
    series = {
        "margin_vs_time.csv": [(d["t"], d["rank_margin"]) for d in dpath.diagnostics],
        "max_fiber_vs_time.csv": [(d["t"], d["max_fiber"]) for d in dpath.diagnostics],
        "newton_residual_vs_time.csv": [
            (d["t"], d["newton_residual"]) for d in dpath.diagnostics
        ],
    }
    for name, rows in series.items():
        with open(out_dir / name, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", name.split("_vs_")[0]])
            for t, v in rows:
                writer.writerow([repr(float(t)), repr(float(v))])


@_scenario("contact-slices")
def _run_contact(manifest, numerics, out_dir):
    pres = geometry_from_json(manifest["geometry"])
    alphas = [form_from_json(pres.base, blocks) for blocks in manifest["inputs"]["alphas"]]
    h = manifest["inputs"]["h"]
    slice_report = contact_model_check(pres, alphas, h, grid=numerics["grid"])
    volume_report = rummler_check(pres, alphas, grid=numerics["grid"])
    report = {
        "status": "SliceCoisotropic" if slice_report.ok else "DegenerateSlice",
        "factor": exact(slice_report.factor),
        "degenerate": slice_report.degenerate,
        "top_margin": qty(slice_report.top_margin, 1e-12, "grid-min"),
        "leafwise_volume_ok": volume_report.ok,
        "leafwise_volume_margin": qty(volume_report.leaf_margin, 1e-12, "grid-min"),
        "offending_block": repr(volume_report.offending_block)
        if volume_report.offending_block
        else None,
    }
    ok = slice_report.ok and volume_report.ok
    return report, EXIT_OK if ok else EXIT_CERTIFIED_FAIL


@_scenario("anosov-check")
def _run_anosov(manifest, numerics, out_dir):
    A = manifest["inputs"]["matrix"]
    leaf = manifest["inputs"].get("leaf_indices", [])
    mr = analyze_matrix(A, leaf)
    eigvals, eigvecs = np.linalg.eig(np.array(A, dtype=float))
    order = np.argsort(eigvals.real)[::-1]
    frame = eigvecs[:, order].real
    form = build_suspension_form(A, leaf, frame)
    report = {
        "matrix": mr.matrix,
        "det": exact(mr.det),
        "charpoly": mr.charpoly,
        "eigenvalues": [qty(e, 1e-9) for e in mr.eigenvalues],
        "mu": [qty(e, 1e-9) for e in mr.mu],
        "lambda": [qty(e, 1e-9) for e in mr.lambdas],
        "flags": mr.flags,
        "suspension_form": {
            "ok": form.ok,
            "rank": form.rank,
            "kernel_dim": form.kernel_dim,
            "reason": form.reason,
        },
    }
    ok = (
        mr.flags["det_one"]
        and mr.flags["cond1"]
        and mr.flags["cond2_certificate"]["holds"]
        and mr.flags["reciprocity"]
        and form.ok
    )
    report["status"] = "AllChecksPass" if ok else "ChecksFailed"
    return report, EXIT_OK if ok else EXIT_CERTIFIED_FAIL


@_scenario("suspension-h1")
def _run_suspension_h1(manifest, numerics, out_dir):
    A = manifest["inputs"]["matrix"]
    leaf = manifest["inputs"].get("leaf_indices", [])
    dense = manifest["inputs"].get("dense_leaves", True)
    out = suspension_h1_report(A, leaf, dense_leaves=dense)
    report = {
        "status": "Computed",
        "dimension": out.dimension,
        "kernel_multiplicity": out.kernel_multiplicity,
        "generators": out.generators,
    }
    return report, EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
