import json
import subprocess
import sys

import pytest

from shortescape.cli import main

FAST = ["--dt-min", "1e-6", "--dt-max", "1e-4", "--points", "4", "--mesh-size", "256"]


def run(args, capsys=None):
    code = main(args)
    return code


def body(path):
    return [line for line in path.read_text().splitlines() if not line.startswith("#")]


def summary(path):
    out = {}
    for line in path.read_text().splitlines():
        if line.startswith("# summary "):
            key, value = line[len("# summary "):].split(" = ")
            out[key] = float(value)
    return out


def test_escape_scan_csv(tmp_path):
    out = tmp_path / "run.csv"
    assert main(["escape-scan", "--state", "kinked-sine", *FAST, "--out", str(out)]) == 0
    lines = body(out)
    assert lines[0] == "dt,escape_right,escape_left,escape_total,analytic_prediction,ratio,est_error"
    assert len(lines) == 5
    text = out.read_text()
    assert text.startswith("# shortescape escape-scan\n")
    assert "# mesh_size = 256" in text and "# convention = paper" in text
    # kinked escape: exponent 1.5
    assert summary(out)["dt_exponent"] == pytest.approx(1.5, abs=0.02)


def test_numbers_have_twelve_digits(tmp_path):
    out = tmp_path / "run.csv"
    main(["escape-scan", *FAST, "--out", str(out)])
    first = body(out)[1].split(",")
    assert first[0] == "1e-06"
    assert all(len(v.split("e")[0].replace(".", "").replace("-", "").lstrip("0")) <= 12
               for v in first)


def test_json_mirrors_csv(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.json"
    main(["escape-scan", *FAST, "--out", str(a)])
    main(["escape-scan", *FAST, "--out", str(b), "--format", "json"])
    doc = json.loads(b.read_text())
    assert set(doc) == {"config", "records", "summary"}
    assert len(doc["records"]) == 4
    rows = body(a)
    assert list(doc["records"][0]) == rows[0].split(",")
    assert doc["records"][2]["escape_total"] == float(rows[3].split(",")[3])
    assert doc["summary"]["dt_exponent"] == pytest.approx(summary(a)["dt_exponent"], rel=1e-11)


def test_fit_rereads_report(tmp_path, capsys):
    out = tmp_path / "run.csv"
    main(["escape-scan", *FAST, "--out", str(out)])
    capsys.readouterr()
    fit_out = tmp_path / "fit.csv"
    assert main(["fit", "--input", str(out), "--x-col", "dt", "--y-col", "escape_total",
                 "--out", str(fit_out)]) == 0
    line = capsys.readouterr().out.strip()
    assert line.startswith("exponent ")
    assert float(line.split()[1]) == pytest.approx(summary(out)["dt_exponent"], rel=1e-9)


def test_offset_scan(tmp_path):
    out = tmp_path / "off.csv"
    assert main(["offset-scan", "--state", "uniform-jump", "--dt-min", "1e-6", "--dt-max", "1e-6",
                 "--points", "1", "--delta-min", "0.05", "--delta-max", "0.8",
                 "--delta-points", "5", "--mesh-size", "64", "--out", str(out)]) == 0
    assert len(body(out)) == 6
    # two edges at distances delta and 1 + delta give a fit between -1 and -0.5
    assert -1.0 < summary(out)["delta_at_dt=1e-06_exponent"] < -0.7


def test_zeno(tmp_path):
    out = tmp_path / "z.csv"
    assert main(["zeno", "--state", "kinked-sine", "--T", "0.001", "--N", "4,2,1",
                 "--mesh-size", "128", "--out", str(out)]) == 0
    rows = body(out)
    assert rows[0].startswith("N,dt,total_detection")
    assert [r.split(",")[0] for r in rows[1:]] == ["1", "2", "4"]


def test_planar(tmp_path):
    out = tmp_path / "p.csv"
    assert main(["planar", "--state-x", "kinked-sine", "--state-y", "kinked-sine", *FAST,
                 "--out", str(out)]) == 0
    s = summary(out)
    assert s["p_B_exponent"] == pytest.approx(1.5, abs=0.03)
    assert s["p_C_exponent"] == pytest.approx(3.0, abs=0.05)


@pytest.mark.parametrize("args", [
    ["escape-scan", "--points", "0"],
    ["escape-scan", "--dt-min", "1e-3", "--dt-max", "1e-4"],
    ["escape-scan", "--dt-min", "-1"],
    ["escape-scan", "--delta", "-0.1"],
    ["escape-scan", "--format", "xml"],
    ["escape-scan", "--state", "nope"],
    ["escape-scan", "--mesh-size", "4"],
    ["zeno", "--N", "a,b"],
    ["zeno", "--T", "0"],
    ["fit"],
    ["frobnicate"],
])
def test_config_errors_exit_2(args, capsys):
    assert main(args) == 2
    assert "configuration error" in capsys.readouterr().err


def test_unreadable_input_exit_4(tmp_path, capsys):
    assert main(["fit", "--input", str(tmp_path / "missing.csv")]) == 4
    assert "I/O error" in capsys.readouterr().err


def test_unwritable_output_exit_4(tmp_path):
    assert main(["escape-scan", *FAST, "--out", str(tmp_path / "no" / "such" / "f.csv")]) == 4


def test_numerical_failure_exit_3(tmp_path, capsys):
    # a Zeno step far below the mesh resolution of custom sizes cannot be refined
    assert main(["zeno", "--T", "1e-14", "--N", "100", "--mesh-size", "16",
                 "--out", str(tmp_path / "z.csv")]) == 3
    assert "numerical failure" in capsys.readouterr().err


def test_config_file_and_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nstate = uniform-jump\npoints = 4\nmesh-size = 64\n"
                   "dt_min = 1e-6\ndt_max = 1e-5\n")
    out = tmp_path / "run.csv"
    assert main(["escape-scan", "--config", str(cfg), "--points", "5", "--out", str(out)]) == 0
    text = out.read_text()
    assert "# state = uniform-jump" in text
    assert "# points = 5" in text
    assert len(body(out)) == 6


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("colour = blue\n")
    assert main(["escape-scan", "--config", str(cfg)]) == 2
    assert "unknown key" in capsys.readouterr().err


def test_config_missing_file(tmp_path):
    assert main(["escape-scan", "--config", str(tmp_path / "none.cfg")]) == 4


def test_module_entry_point(tmp_path):
    out = tmp_path / "m.csv"
    proc = subprocess.run([sys.executable, "-m", "shortescape", "escape-scan", *FAST,
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
