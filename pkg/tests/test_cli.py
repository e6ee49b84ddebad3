"""Manifest loading, scenario runs, exit codes, and determinism."""

import json

import pytest

from folcalc.cli import bundled_manifest_path, main
from folcalc.manifests import load_manifest

MANIFESTS = [
    ("zambon-t4-kuranishi.json", 2),
    ("t3-coskernel.json", 0),
    ("t3-kuranishi-cospower.json", 0),
    ("zambon-t4-coisotropic.json", 2),
    ("lagrangian-t2-moser.json", 0),
    ("t3-moser-cos2.json", 0),
    ("lagrangian-contact-slices.json", 0),
    ("anosov-sl4.json", 0),
    ("anosov-suspension-h1.json", 0),
]


class TestExamplesCommand:
    def test_catalog_lists_all(self, capsys):
        assert main(["examples"]) == 0
        out = capsys.readouterr().out
        for name, _ in MANIFESTS:
            assert name in out
        assert len(MANIFESTS) >= 7

    def test_json_catalog(self, capsys):
        assert main(["examples", "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert {e["name"] for e in data["manifests"]} == {n for n, _ in MANIFESTS}


class TestRunCommand:
    @pytest.mark.parametrize("name,code", MANIFESTS)
    def test_bundled_exit_codes(self, name, code, tmp_path):
        path = bundled_manifest_path(name)
        assert main(["run", str(path), "--out", str(tmp_path / name)]) == code
        report = json.loads((tmp_path / name / "report.json").read_text())
        assert report["exit_code"] == code
        assert report["scenario"] == load_manifest(path)["scenario"]

    def test_missing_manifest(self, capsys):
        assert main(["run", "/nonexistent/manifest.json"]) == 1
        assert "manifest error" in capsys.readouterr().err

    def test_schema_violation_reports_pointer(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"version": "1", "scenario": "bogus", "inputs": {}}))
        assert main(["run", str(bad)]) == 1
        err = capsys.readouterr().err
        assert "schema violation" in err and "$.scenario" in err

    def test_unknown_field_rejected(self, tmp_path, capsys):
        src = json.loads(bundled_manifest_path("anosov-sl4.json").read_text())
        src["surprise"] = 1
        bad = tmp_path / "extra.json"
        bad.write_text(json.dumps(src))
        assert main(["run", str(bad)]) == 1

    def test_worked_kuranishi_report(self, tmp_path):
        path = bundled_manifest_path("zambon-t4-kuranishi.json")
        main(["run", str(path), "--out", str(tmp_path)])
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["status"] == "ObstructedCertified"
        # certificate is -2 cos t1 sin t2: four +-i/2 modes at (+-1, +-1, 0, 0)
        modes = {tuple(rec["k"]): (rec["re"], rec["im"]) for rec in report["certificate"]}
        assert modes[(1, 1, 0, 0)] == ("0", "1/2")
        assert modes[(1, -1, 0, 0)] == ("0", "-1/2")
        assert report["oracle_agrees"] is True

    def test_coskernel_report_quotient(self, tmp_path):
        path = bundled_manifest_path("t3-coskernel.json")
        assert main(["run", str(path), "--out", str(tmp_path)]) == 0
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["status"] == "InKernel"
        # quotient for cos^2 is -2 cos(t2)
        modes = {tuple(rec["k"]): rec["re"] for rec in report["quotient"]}
        assert modes == {(0, 1, 0): "-1", (0, -1, 0): "-1"}

    def test_anosov_report_values(self, tmp_path):
        path = bundled_manifest_path("anosov-sl4.json")
        assert main(["run", str(path), "--out", str(tmp_path)]) == 0
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["det"] == {"value": "1", "exact": True}
        assert report["charpoly"] == [1, -7, 13, -7, 1]
        assert abs(report["eigenvalues"][0]["value"] - 4.39) < 0.01
        assert report["flags"]["cond2_certificate"]["status"] == "IrreducibleModP"
        assert report["suspension_form"]["rank"] == 2

    def test_suspension_h1_report(self, tmp_path):
        path = bundled_manifest_path("anosov-suspension-h1.json")
        assert main(["run", str(path), "--out", str(tmp_path)]) == 0
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["dimension"] == 1
        assert report["generators"] == ["restriction of dt"]

    def test_moser_outputs(self, tmp_path):
        path = bundled_manifest_path("t3-moser-cos2.json")
        assert main(["run", str(path), "--out", str(tmp_path)]) == 0
        assert (tmp_path / "diagnostics.csv").exists()
        assert (tmp_path / "plotdata" / "margin_vs_time.csv").exists()
        header = (tmp_path / "diagnostics.csv").read_text().splitlines()[0]
        assert header == "t,theta_0,theta_1,theta_2,fiber_0,rank_margin,newton_residual"

    def test_numerics_echoed(self, tmp_path):
        path = bundled_manifest_path("lagrangian-t2-moser.json")
        main(["run", str(path), "--out", str(tmp_path), "--seed", "7"])
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["numerics"]["seed"] == 7
        assert report["numerics"]["newton_tol"] == 1e-10


class TestDeterminism:
    @pytest.mark.parametrize("name,_code", MANIFESTS)
    def test_reports_byte_identical(self, name, _code, tmp_path):
        path = bundled_manifest_path(name)
        main(["run", str(path), "--out", str(tmp_path / "a")])
        main(["run", str(path), "--out", str(tmp_path / "b")])
        ra = (tmp_path / "a" / "report.json").read_bytes()
        rb = (tmp_path / "b" / "report.json").read_bytes()
        assert ra == rb
