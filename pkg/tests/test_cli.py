import csv
import io
import json
import math

import pytest

from jcdress.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_resonant_coeffs(capsys):
    code, out, err = run(capsys, "coeffs", "--resonant", "--k-max", "3", "--units", "g")
    assert code == 0 and err == ""
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["k", "C_k_minus", "C_k_plus", "precision_bits"]
    expected = [-1.0, 2 - math.sqrt(2), -(3 - 3 * math.sqrt(2) + math.sqrt(3))]
    for row, k, val in zip(rows, (1, 2, 3), expected):
        assert int(row["k"]) == k and float(row["C_k_minus"]) == pytest.approx(val, rel=1e-15)


def test_units_scale(capsys):
    _, raw, _ = run(capsys, "coeffs", "--delta", "1", "--g", "2", "--k-max", "2")
    _, scaled, _ = run(capsys, "coeffs", "--delta", "1", "--g", "2", "--k-max", "2", "--units", "gamma", "--gamma-scale", "4")
    a = list(csv.DictReader(io.StringIO(raw)))
    b = list(csv.DictReader(io.StringIO(scaled)))
    assert float(a[1]["C_k_minus"]) == pytest.approx(4 * float(b[1]["C_k_minus"]))
    code, _, err = run(capsys, "coeffs", "--units", "gamma")
    assert code == 2 and "gamma-scale" in err


def test_verify_text_and_json(capsys):
    code, out, _ = run(capsys, "verify", "--g", "1", "--delta", "0.5", "--n-max", "20")
    assert code == 0 and "offdiag_residual_relative" in out
    code, out, _ = run(capsys, "verify", "--g", "1", "--delta", "0.5", "--n-max", "20", "--report", "json")
    rep = json.loads(out)
    assert rep["n_max"] == 20 and rep["offdiag_residual_relative"] < 1e-12


def test_twosite_free_superfluid(capsys):
    code, out, _ = run(capsys, "twosite", "--g", "0", "--hop-j", "1")
    assert code == 0
    assert json.loads(out)["overlap_photonic_sf"] == pytest.approx(1.0, abs=1e-12)
    code, out, _ = run(capsys, "twosite", "--g", "0", "--hop-j", "1", "--report", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1 and float(rows[0]["overlap_photonic_sf"]) == pytest.approx(1.0)


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--omega-c", "10", "--delta", "2", "--g", "1", "--n-max", "3")
    assert code == 0
    rows = {(r["n"], r["branch"]): r for r in csv.DictReader(io.StringIO(out))}
    assert float(rows[("3", "-")]["energy_closed_form"]) == pytest.approx(23.0)
    assert float(rows[("3", "-")]["energy_numerical"]) == pytest.approx(23.0)


def test_exit_codes(capsys):
    code, out, err = run(capsys, "coeffs", "--dispersive", "--lambda", "0.4", "--k-max", "3")
    assert code == 1 and "lambda" in err and out == ""
    assert run(capsys, "coeffs", "--no-such-flag")[0] == 2
    assert run(capsys, "coeffs", "--delta", "1", "--lambda", "1")[0] == 2
    code, _, err = run(capsys, "verify", "--delta", "0")
    assert code == 2 and "approach" in err
    assert run(capsys, "verify", "--delta", "0", "--approach", "below", "--n-max", "3")[0] == 0
    assert run(capsys, "twosite", "--hop-j", "-1")[0] == 1


def test_config_and_out(tmp_path, capsys):
    cfg = tmp_path / "site.cfg"
    cfg.write_text("omega_c = 10\ndelta = 2\ng = 1\n")
    out_file = tmp_path / "spec.csv"
    code, out, _ = run(capsys, "spectrum", "--config", str(cfg), "--n-max", "3", "--out", str(out_file))
    assert code == 0 and out == ""
    assert "23" in out_file.read_text()
    cfg.write_text("unknown = 1\n")
    assert run(capsys, "spectrum", "--config", str(cfg))[0] == 2


def test_sweep_command(tmp_path, capsys):
    cfg = tmp_path / "grid.cfg"
    cfg.write_text("axis1.count = 3\naxis2.count = 2\noutputs = variance\n")
    code, out, _ = run(capsys, "sweep", "--config", str(cfg))
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "lambda,j_over_g,variance,error" and len(lines) == 7
    code, out, _ = run(capsys, "sweep", "--config", str(cfg), "--format", "json")
    assert len(json.loads(out)["rows"]) == 6


def test_precision_env(monkeypatch, capsys):
    monkeypatch.setenv("JCDRESS_PRECISION_BITS", "1000")
    _, out, _ = run(capsys, "coeffs", "--delta", "1", "--k-max", "1")
    assert int(list(csv.DictReader(io.StringIO(out)))[0]["precision_bits"]) >= 1000
