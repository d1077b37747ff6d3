import csv
import io
import json
import math

import pytest

from cone_ab import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture(autouse=True)
def serial(monkeypatch):
    monkeypatch.setenv("CONE_AB_THREADS", "1")


def test_phase_shifts_flat(capsys):
    code, out, _ = run(capsys, "phase-shifts", "--alpha", "1", "--flux", "0", "--m", "0", "1")
    assert code == 0
    assert [float(r["delta_total"]) for r in rows_csv(out)] == [0.0, 0.0]


def test_phase_shifts_cone(capsys):
    code, out, _ = run(capsys, "phase-shifts", "--alpha", "0.8", "--flux", "0.25", "--m", "1")
    (row,) = rows_csv(out)
    assert float(row["delta_total"]) == pytest.approx(-0.811839, abs=1e-6)


def test_unsupported_channel_warns(capsys):
    code, out, err = run(capsys, "phase-shifts", "--alpha", "0.5", "--flux", "0", "--m", "0")
    assert code == 0
    (row,) = rows_csv(out)
    assert row["status"] == "unsupported"
    assert "warnings=1" in err and "unsupported_channel" in err


def test_smatrix(capsys):
    code, out, _ = run(capsys, "smatrix", "--alpha", "1", "--flux", "0.5", "--m", "0")
    (row,) = rows_csv(out)
    assert complex(float(row["re"]), float(row["im"])) == pytest.approx(-1j, abs=1e-15)
    code, out, _ = run(capsys, "smatrix", "--alpha", "1", "--flux", "0", "--m-max", "3")
    assert all(float(r["re"]) == 1.0 and float(r["im"]) == 0.0 for r in rows_csv(out))
    code, out, _ = run(capsys, "smatrix", "--alpha", "0.7", "0.9", "--flux", "0.3", "--rho", "-2",
                       "--k", "0.5", "3", "--m-max", "4")
    assert all(abs(float(r["abs"]) - 1.0) < 1e-12 for r in rows_csv(out) if r["status"] == "ok")


def test_amplitude(capsys):
    code, out, _ = run(capsys, "amplitude", "--alpha", "1", "--flux", "0", "--theta", "45", "90", "180",
                       "--degrees", "--k", "0.5", "2")
    assert code == 0
    rows = rows_csv(out)
    assert len(rows) == 6 and all(float(r["abs"]) == 0.0 for r in rows)
    assert [float(r["theta"]) for r in rows[:3]] == [45.0, 90.0, 180.0]
    code, out, _ = run(capsys, "amplitude", "--alpha", "0.8", "--flux", "0.25", "--k", "1", "4",
                       "--theta", "1.5707963267948966")
    a, b = rows_csv(out)
    assert abs(float(a["abs"]) - float(b["abs"])) > float(a["spread"]) + float(b["spread"])
    assert all(float(r["spread"]) < 1e-3 for r in (a, b))


def test_amplitude_non_convergence_exit_code(capsys):
    code, out, err = run(capsys, "amplitude", "--alpha", "0.8", "--flux", "0.25", "--theta", "0.8")
    assert code == cli.EXIT_COMPUTATION
    assert rows_csv(out)[0]["status"] == "not_converged"
    assert "not_converged" in err


def test_bound_states(capsys):
    code, out, _ = run(capsys, "bound-states", "--alpha", "1", "--flux", "0.5", "--rho", "-1", "--m", "0")
    (row,) = rows_csv(out)
    assert float(row["kappa"]) == pytest.approx(1.0, abs=1e-10)
    assert row["oracle_confirmed"] == "true"
    for rho in ("1", "zero"):
        code, out, _ = run(capsys, "bound-states", "--alpha", "1", "--flux", "0.5", "--rho", rho, "--m", "0")
        assert code == 0 and out == ""


def test_verify_single_channel(capsys):
    code, out, err = run(capsys, "verify", "--m", "0", "--alpha", "0.8", "--flux", "0.25")
    # m = 0 at alpha 0.8, flux 0.25 has J^2 < 0: skipped with a warning, nothing fails.
    assert code == 0 and "unsupported_channel" in err
    code, out, _ = run(capsys, "verify", "--m", "-1", "--alpha", "0.8", "--flux", "0.25", "--k", "1")
    rows = rows_csv(out)
    assert code == 0 and len(rows) == 2 and all(r["passed"] == "true" for r in rows)


def test_verify_corrupted_tolerance(capsys):
    code, out, err = run(capsys, "verify", "--m", "-1", "--alpha", "0.8", "--flux", "0.25", "--k", "1",
                         "--tolerance", "1e-14")
    assert code == cli.EXIT_VERIFY
    assert all(r["passed"] == "false" for r in rows_csv(out))
    assert "verification_failed" in err


def test_json_output_and_determinism(capsys, tmp_path):
    args = ["phase-shifts", "--alpha", "0.8", "0.5", "--flux", "0.25", "--m-max", "2", "--format", "json"]
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["meta"]["version"] == "0.1.0"
    assert doc["meta"]["config"]["alpha"] == [0.8, 0.5]
    assert doc["meta"]["warnings"] == len(doc["meta"]["diagnostics"]) > 0
    assert len(doc["rows"]) == 10
    target = tmp_path / "out.json"
    run(capsys, *args, "--output", str(target))
    assert json.loads(target.read_text())["rows"] == doc["rows"]


def test_pool_matches_serial(capsys, monkeypatch):
    args = ["amplitude", "--alpha", "0.9", "1", "--flux", "0.3", "--k", "0.5", "2", "--theta", "2", "3"]
    _, serial_out, _ = run(capsys, *args)
    monkeypatch.setenv("CONE_AB_THREADS", "2")
    _, pooled_out, _ = run(capsys, *args)
    assert serial_out == pooled_out


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text('alpha = [0.9]\nflux = 0.3\nrho = "inf"\nm = [0, 1]\n\n[rho_m]\n"1" = -0.5\n')
    code, out, _ = run(capsys, "phase-shifts", "--config", str(cfg), "--flux", "0.1")
    rows = rows_csv(out)
    assert code == 0
    assert {r["flux"] for r in rows} == {"0.10000000000000001"}
    assert [r["rho"] for r in rows] == ["inf", "-0.5"]


@pytest.mark.parametrize("argv", [
    ["phase-shifts", "--alpha", "1.5"],
    ["phase-shifts", "--k", "-1"],
    ["phase-shifts", "--rho", "banana"],
    ["amplitude", "--theta", "0"],
    ["phase-shifts", "--m-max", "0"],
    ["amplitude", "--eta-schedule", "0.01"],
])
def test_validation_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == cli.EXIT_VALIDATION
    assert "config error" in err


def test_bad_config_file(capsys, tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("alpha = [0.5,\n")
    code, _, err = run(capsys, "phase-shifts", "--config", str(bad))
    assert code == cli.EXIT_VALIDATION and "bad.toml" in err
    unknown = tmp_path / "unknown.toml"
    unknown.write_text("alfa = 0.5\n")
    code, _, err = run(capsys, "phase-shifts", "--config", str(unknown))
    assert code == cli.EXIT_VALIDATION and "alfa" in err


def test_float_format():
    assert cli.fmt_float(0.1) == "0.10000000000000001"
    assert cli.to_json({"x": [1.5, math.inf]}) == '{\n  "x": [\n    1.5,\n    null\n  ]\n}'
