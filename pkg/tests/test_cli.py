import csv
import io
import json
import subprocess
import sys

from spinwave import cli, verification
from spinwave.cli import EXIT_ACCURACY, EXIT_INPUT, EXIT_OK, run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_expect_regularized(capsys):
    code, out, _ = call(capsys, "expect", "1/2", "1", "1/2", "--weight", "cos")
    assert code == EXIT_OK
    assert "2/3" in out and "path=regularized" in out


def test_expect_analytic_for_surd(capsys):
    code, out, _ = call(capsys, "--json", "expect", "1", "smax", "1", "--weight", "p1")
    rec = json.loads(out)
    assert code == EXIT_OK
    assert rec["path"] == "analytic"
    assert rec["outputs"]["value"]["exact"] == "sqrt(2)/2"


def test_expect_integer_offset_uses_analytic(capsys):
    code, out, _ = call(capsys, "expect", "1", "2", "1")
    assert code == EXIT_OK and "<cos> = 1 " in out and "path=analytic" in out


def test_expect_decimal_input(capsys):
    code, out, _ = call(capsys, "expect", "0.5", "1", "0.5")
    assert code == EXIT_OK and "2/3" in out


def test_cg_negative_projection(capsys):
    code, out, _ = call(capsys, "cg", "1/2", "1/2", "1/2", "-1/2", "1")
    assert code == EXIT_OK and "sqrt(2)/2" in out


def test_cg_internal(capsys):
    code, out, _ = call(capsys, "--json", "cg", "--internal", "1", "sqrt2", "2")
    rec = json.loads(out)
    assert abs(rec["outputs"]["value"]["float"] - (8 / 5) ** 0.5) < 1e-15


def test_gfactor(capsys):
    code, out, _ = call(capsys, "gfactor", "1/2", "smax")
    assert code == EXIT_OK and out.strip() == "g = 2"
    code, out, _ = call(capsys, "gfactor", "--invert", "3/2", "2/3")
    assert "imaginary" in out


def test_input_errors(capsys):
    assert call(capsys, "gfactor", "0", "1")[0] == EXIT_INPUT
    assert call(capsys, "expect", "x", "1", "1")[0] == EXIT_INPUT
    assert call(capsys, "rms", "nope")[0] == EXIT_INPUT
    assert call(capsys, "react", "Z -> graviton + graviton")[0] == EXIT_INPUT
    assert call(capsys, "dfunc", "1", "0", "2")[0] == EXIT_INPUT


def test_rms(capsys):
    code, out, _ = call(capsys, "--json", "rms", "0,0<-1,1")
    rec = json.loads(out)
    assert code == EXIT_OK and abs(rec["outputs"]["rms"] - 1) < 1e-10


def test_react_inline_and_file(capsys, tmp_path):
    code, out, _ = call(capsys, "react", "H0 -> Z + Z")
    assert "ALLOWED" in out
    f = tmp_path / "decays.txt"
    f.write_text("# table\nZ -> photon + photon\nH0 -> photon + photon\n")
    code, out, _ = call(capsys, "--json", "react", str(f))
    rec = json.loads(out)
    assert [r["verdict"] for r in rec["outputs"]] == ["FORBIDDEN", "ALLOWED"]


def test_react_unknown(capsys):
    code, out, _ = call(capsys, "react", "W+ -> e+ + nu_e", "--unknown", "nu_e")
    assert "sqrt(3)/2" in out


def test_react_particles_option(capsys, tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("S 0 zero\nV 2 zero\n")
    code, out, _ = call(capsys, "--particles", str(f), "react", "S -> V + V")
    assert code == EXIT_OK and "ALLOWED" in out


def test_quasiprob_csv_json_agree(capsys, tmp_path):
    c_path, j_path = tmp_path / "c.csv", tmp_path / "c.json"
    assert run(["quasiprob", "w", "--samples", "101", "--output", str(c_path)]) == EXIT_OK
    assert run(["quasiprob", "w", "--samples", "101", "--out", "json",
                "--output", str(j_path)]) == EXIT_OK
    raw = c_path.read_bytes()
    assert b"\r\n" not in raw
    rows = list(csv.reader(io.StringIO(raw.decode())))
    assert rows[0] == ["x", "density"]
    data = json.loads(j_path.read_text())
    xs = [float(r[0]) for r in rows[1:]]
    ys = [float(r[1]) for r in rows[1:]]
    assert xs == data["x"] and ys == data["density"]
    assert len(xs) == 101


def test_dfunc_and_inner(capsys):
    code, out, _ = call(capsys, "dfunc", "1/2", "1", "1/2", "--theta", "0.3")
    assert code == EXIT_OK and "value at" in out
    code, out, _ = call(capsys, "--json", "inner", "1/2", "1", "1/2", "1/2", "1", "1/2")
    rec = json.loads(out)
    assert rec["outputs"]["total"]["exact"] == "6*pi**3"


def test_verify_exit_codes(capsys, monkeypatch):
    ok = verification.CheckResult(1, "a", True, "")
    bad = verification.CheckResult(2, "b", False, "")
    monkeypatch.setattr(cli.verification, "run_all", lambda: [ok, ok])
    assert call(capsys, "verify")[0] == EXIT_OK
    monkeypatch.setattr(cli.verification, "run_all", lambda: [ok, bad])
    code, out, _ = call(capsys, "verify")
    assert code == EXIT_ACCURACY and "FAIL" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "spinwave", "gfactor", "1", "0"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "g = 1"
