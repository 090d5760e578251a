"""Command-line front end tests: file outputs, schema, exit codes,
byte determinism."""

import json
import math

import jsonschema
import numpy as np
import pytest

from hankellab.cli import main

SPECTRAL_SCHEMA = {
    "type": "object",
    "required": ["alpha", "family", "predicted", "steps"],
    "properties": {
        "alpha": {"type": "number"},
        "family": {"type": "object"},
        "predicted": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["lo", "hi", "multiplicity"],
                "properties": {
                    "lo": {"type": "number"},
                    "hi": {"type": "number"},
                    "multiplicity": {"type": "integer"},
                },
            },
        },
        "steps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["R", "N", "max_gap", "outliers", "hausdorff", "hypothesis_ok"],
                "properties": {
                    "R": {"type": "number"},
                    "N": {"type": "integer"},
                    "max_gap": {"type": "number"},
                    "outliers": {"type": "array", "items": {"type": "number"}},
                    "hausdorff": {"type": "number"},
                    "hypothesis_ok": {"type": "boolean"},
                },
            },
        },
    },
}

VERIFICATION_SCHEMA = {
    "type": "object",
    "required": ["checks", "verdict"],
    "properties": {
        "verdict": {"enum": ["pass", "fail"]},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "anchor", "grids", "metrics", "verdict"],
                "properties": {
                    "name": {"type": "string"},
                    "anchor": {"type": "string"},
                    "grids": {"type": "array"},
                    "metrics": {"type": "array"},
                    "verdict": {"enum": ["pass", "fail"]},
                },
            },
        },
    },
}


def read_csv_column(path, column, header=True):
    lines = path.read_text().strip().split("\n")
    if header:
        names = lines[0].split(",")
        idx = names.index(column)
        return np.array([float(l.split(",")[idx]) for l in lines[1:]])
    return np.array([float(l) for l in lines])


class TestSymbolCommand:
    def test_carleman_symbol_table(self, tmp_path):
        assert main(["symbol", "--alpha", "0", "--out", str(tmp_path)]) == 0
        path = tmp_path / "symbol.csv"
        xi = read_csv_column(path, "xi")
        sg = read_csv_column(path, "sigma_gamma")
        diff = read_csv_column(path, "abs_diff")
        row0 = np.argmin(np.abs(xi))
        assert xi[row0] == 0.0
        assert abs(sg[row0] - math.pi) <= 1e-12
        assert diff.max() <= 1e-8
        # evenness in xi
        order = np.argsort(xi)
        assert sg[order] == pytest.approx(sg[order][::-1], rel=1e-12)

    def test_half_alpha_value_one(self, tmp_path):
        assert main(["symbol", "--alpha", "0.5", "--out", str(tmp_path)]) == 0
        xi = read_csv_column(tmp_path / "symbol.csv", "xi")
        sg = read_csv_column(tmp_path / "symbol.csv", "sigma_gamma")
        assert sg[np.argmin(np.abs(xi))] == pytest.approx(1.0, abs=1e-12)


class TestSpectrumCommand:
    def test_carleman_defaults_single_step(self, tmp_path):
        code = main(
            ["spectrum", "--alpha", "0", "--R", "8", "--N", "400", "--out", str(tmp_path)]
        )
        assert code == 0
        eigs = read_csv_column(tmp_path / "eigs_R8_N400.csv", None, header=False)
        assert (np.diff(eigs) >= 0.0).all()
        assert len(eigs) == 400
        report = json.loads((tmp_path / "spectral_report.json").read_text())
        jsonschema.validate(report, SPECTRAL_SCHEMA)
        assert report["alpha"] == 0.0
        assert report["predicted"] == [
            {"lo": 0.0, "hi": pytest.approx(math.pi, abs=1e-12), "multiplicity": 2}
        ]
        step = report["steps"][0]
        assert step["outliers"] == []
        assert step["hypothesis_ok"] is True
        assert step["R"] == 8.0 and step["N"] == 400

    def test_family_with_dropped_end(self, tmp_path):
        code = main(
            [
                "spectrum",
                "--alpha",
                "0",
                "--kernel",
                "rational(0,1,1,1)",
                "--R",
                "6",
                "--N",
                "200",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        report = json.loads((tmp_path / "spectral_report.json").read_text())
        assert len(report["predicted"]) == 1
        assert report["predicted"][0]["hi"] == pytest.approx(math.pi, abs=1e-12)
        assert report["predicted"][0]["multiplicity"] == 1

    def test_sign_change_family_negative_interval(self, tmp_path):
        code = main(
            [
                "spectrum",
                "--alpha",
                "0",
                "--kernel",
                "rational(1,-1,1,1)",
                "--R",
                "8",
                "--N",
                "400",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        report = json.loads((tmp_path / "spectral_report.json").read_text())
        los = sorted(iv["lo"] for iv in report["predicted"])
        assert los[0] == pytest.approx(-math.pi, abs=1e-12)
        eigs = read_csv_column(tmp_path / "eigs_R8_N400.csv", None, header=False)
        assert eigs.min() < -0.5  # negative branch genuinely populated


class TestVerifyCommand:
    def test_defaults_pass(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"ladder": [[6, 200], [8, 400]]}))
        code = main(["verify", "--config", str(config), "--out", str(tmp_path)])
        assert code == 0
        report = json.loads((tmp_path / "verification_report.json").read_text())
        jsonschema.validate(report, VERIFICATION_SCHEMA)
        assert report["verdict"] == "pass"
        assert {c["name"] for c in report["checks"]} == {
            "C1",
            "C2",
            "C3",
            "C4",
            "C5",
            "C6",
            "C7",
            "C8",
        }
        for check in report["checks"]:
            assert set(check) == {"name", "anchor", "grids", "metrics", "verdict", "rule"}

    def test_subset_of_checks(self, tmp_path):
        code = main(
            [
                "verify",
                "--alpha",
                "0.5",
                "--R",
                "6",
                "--N",
                "200",
                "--checks",
                "C2,C5",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        report = json.loads((tmp_path / "verification_report.json").read_text())
        assert [c["name"] for c in report["checks"]] == ["C2", "C5"]

    def test_byte_determinism(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        args = ["verify", "--alpha", "0", "--R", "6", "--N", "200", "--checks", "C2,C4,C6"]
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        b1 = (out1 / "verification_report.json").read_bytes()
        b2 = (out2 / "verification_report.json").read_bytes()
        assert b1 == b2

    def test_single_coarse_step_deterministic(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        args = ["verify", "--alpha", "0", "--R", "4", "--N", "50", "--checks", "C1"]
        c1 = main(args + ["--out", str(out1)])
        c2 = main(args + ["--out", str(out2)])
        assert c1 == c2
        assert (out1 / "verification_report.json").read_bytes() == (
            out2 / "verification_report.json"
        ).read_bytes()


class TestConfigValidation:
    def test_alpha_at_boundary_rejected(self, tmp_path):
        assert main(["verify", "--alpha", "-0.5", "--out", str(tmp_path)]) == 2

    def test_unknown_kernel_rejected(self, tmp_path):
        assert main(["spectrum", "--kernel", "mystery", "--out", str(tmp_path)]) == 2

    def test_carleman_requires_alpha_zero(self, tmp_path):
        assert main(
            ["spectrum", "--alpha", "0.5", "--kernel", "carleman", "--out", str(tmp_path)]
        ) == 2

    def test_odd_N_rejected(self, tmp_path):
        assert main(
            ["spectrum", "--R", "6", "--N", "201", "--out", str(tmp_path)]
        ) == 2

    def test_R_without_N_rejected(self, tmp_path):
        assert main(["spectrum", "--R", "6", "--out", str(tmp_path)]) == 2

    def test_unknown_config_key_rejected(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"laddr": [[6, 200]]}))
        assert main(["verify", "--config", str(config), "--out", str(tmp_path)]) == 2

    def test_bad_json_rejected(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text("{not json")
        assert main(["verify", "--config", str(config), "--out", str(tmp_path)]) == 2

    def test_weight_override(self, tmp_path):
        code = main(
            [
                "spectrum",
                "--alpha",
                "0",
                "--kernel",
                "power",
                "--weight",
                "rational(1,2)",
                "--R",
                "6",
                "--N",
                "200",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        report = json.loads((tmp_path / "spectral_report.json").read_text())
        assert report["family"]["b_inf"] == 2.0
