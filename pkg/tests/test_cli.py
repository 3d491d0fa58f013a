import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from thermal_casimir.cli import main
from thermal_casimir.optical import OpticalTable
from thermal_casimir.response import DrudeParams, RelaxationModel


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_pressure_single_row(capsys):
    assert main(["pressure", "--material", "au-drude", "--a", "0.5", "--T", "300"]) == 0
    out, err = capsys.readouterr()
    r = rows(out)
    assert len(r) == 1
    p, pa = float(r[0]["pressure_eV_um3"]), float(r[0]["pressure_Pa"])
    assert pa == pytest.approx(p * 0.1602177, rel=1e-15)
    man = json.loads(err.strip().splitlines()[-1])["manifest"]
    assert man["config"]["command"] == "pressure"
    assert man["version"]


def test_curve_figure_one(tmp_path):
    out = tmp_path / "fig1.csv"
    assert main(["curve", "--quantity", "relative-thermal-correction", "--materials",
                 "au-drude,au-plasma", "--a", "0.5:6.5:61", "--T", "300", "-o", str(out)]) == 0
    r = rows(out.read_text())
    assert len(r) == 61 and list(r[0]) == ["a_um", "au-drude", "au-plasma"]
    assert float(r[0]["au-drude"]) == pytest.approx(-0.0646, abs=5e-4)
    assert (tmp_path / "fig1.csv.manifest.json").exists()


def test_manifest_rerun_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["thermal-correction", "--materials", "au-drude,silica", "--a", "0.5,1", "--T", "300"]
    assert main(base + ["-o", str(a)]) == 0
    assert main(["thermal-correction", "--config", str(a) + ".manifest.json", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_threads_do_not_change_output(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    base = ["curve", "--quantity", "pressure", "--materials", "au-drude,au-plasma", "--a", "0.3:3:12",
            "--T", "300", "--format", "json"]
    assert main(base + ["-o", str(a)]) == 0
    assert main(base + ["--threads", "4", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["schema_version"] == 1


def test_entropy_classification(capsys):
    assert main(["entropy", "--material", "au-drude-perfect", "--a", "1", "--T", "1:50:50"]) == 0
    r = rows(capsys.readouterr().out)
    assert len(r) == 50
    assert {x["classification"] for x in r} == {"negative_violation"}


def test_config_error_exit_code(capsys):
    assert main(["pressure", "--material", "unobtainium", "--a", "1", "--T", "300"]) == 2
    rec = json.loads(capsys.readouterr().err)["error"]
    assert rec["kind"] == "config" and "au-drude" in rec["message"]


def test_numeric_error_exit_code(capsys):
    code = main(["entropy", "--material", "au-plasma", "--a", "1", "--T", "2e-5,4e-5",
                 "--entropy-step", "1e-5"])
    assert code == 3
    assert json.loads(capsys.readouterr().err)["error"]["kind"] == "numeric"


def test_io_error_exit_code(capsys, tmp_path):
    assert main(["kk-transform", "--table", str(tmp_path / "missing.csv"), "--xi", "1"]) == 4
    assert json.loads(capsys.readouterr().err)["error"]["kind"] == "io"


def test_kk_transform(tmp_path, capsys):
    au = DrudeParams(9.0, RelaxationModel.constant(0.035))
    w = np.geomspace(0.125, 1e4, 600)
    (tmp_path / "au.csv").write_text(OpticalTable.from_permittivity(w, au.eps_real(w, 300)).to_csv())
    assert main(["kk-transform", "--table", str(tmp_path / "au.csv"), "--xi", "0.1,1,10",
                 "--gamma", "0.035"]) == 0
    r = rows(capsys.readouterr().out)
    expected = au.eps_imag(np.array([0.1, 1, 10]), 300)
    np.testing.assert_allclose([float(x["eps_imag_axis"]) for x in r], expected, rtol=1e-3)


def test_compare_command(tmp_path, capsys):
    data = tmp_path / "d.csv"
    data.write_text("separation_um,value,total_error\n0.5,-0.096,0.001\n0.7,-0.024,0.001\n")
    assert main(["compare", "--materials", "au-drude", "--data", str(data), "--T", "300",
                 "--a", "0.4:0.8:9"]) == 0
    r = rows(capsys.readouterr().out)
    assert len(r) == 2 and r[0]["verdict"] in ("consistent", "excluded")


def test_diff_force(capsys):
    assert main(["diff-force", "--state-a", "au-drude", "--state-b", "au-drude", "--a", "0.5,1",
                 "--T", "300", "--R", "100"]) == 0
    assert all(float(x["force_difference_eV_um"]) == 0 for x in rows(capsys.readouterr().out))


def test_validate_warnings(capsys):
    assert main(["validate", "gradient", "--material", "au-drude", "--a", "1", "--T", "300",
                 "--R", "200"]) == 0
    assert json.loads(capsys.readouterr().out)["warnings"] == []
    assert main(["validate", "gradient", "--material", "au-drude", "--a", "1", "--T", "300",
                 "--R", "20"]) == 0
    assert "a/R" in json.loads(capsys.readouterr().out)["warnings"][0]


def test_validate_unknown_material(capsys):
    assert main(["validate", "--material", "nope", "--a", "1", "--T", "300"]) == 2
    assert "available" in capsys.readouterr().err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "thermal_casimir", "pressure", "--material", "ideal-metal",
                          "--a", "1", "--T", "0"], capture_output=True, text=True)
    assert res.returncode == 0
    assert float(rows(res.stdout)[0]["pressure_eV_um3"]) == pytest.approx(-8.1148e-3, rel=1e-4)
