"""End-to-end checks of the command-line front end."""

import csv
import json
import subprocess
import sys

import pytest

from hmpseries import HIGH_SNR_NOTE
from hmpseries.cli import main

MODEL = {
    "s": 2,
    "M": [["4/5", "1/5"], ["1/5", "4/5"]],
    "R": [["1", "0"], ["0", "1"]],
}


@pytest.fixture
def model_file(tmp_path):
    path = tmp_path / "model.json"
    path.write_text(json.dumps(MODEL))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    return list(csv.reader(text.splitlines()))


def test_validate_ok(capsys, model_file):
    code, out, err = run_cli(capsys, "validate", "--model", model_file)
    assert code == 0 and err == ""
    rows = parse_csv(out)
    assert rows[0] == ["s", "strictly_positive", "stationary"]
    assert rows[1] == ["2", "True", "1/2 1/2"]


def test_validate_bad_rows_exit_1(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "s": 2,
        "M": [["0.49", "0.5"], ["1/2", "1/2"]],
        "R": [["1", "0"], ["0", "1"]],
    }))
    code, out, err = run_cli(capsys, "validate", "--model", str(bad))
    assert code == 1
    assert out == ""
    assert "RowSumViolation" in err
    assert "row 0" in err


def test_missing_file_exit_2(capsys, tmp_path):
    code, out, err = run_cli(capsys, "validate", "--model", str(tmp_path / "nope.json"))
    assert code == 2 and out == ""


def test_entropy_exact_renders(capsys, model_file):
    code, out, err = run_cli(capsys, "entropy", "--model", model_file, "--n", "1,2")
    assert code == 0
    rows = parse_csv(out)
    assert rows[0][:3] == ["n", "entropy", "entropy_float"]
    assert rows[1][1] == "log(2)"
    assert rows[1][5] == ""  # no lower bound at n = 1
    assert rows[2][1] == "-3/5·log(2) + log(5)"
    assert rows[2][3] == "-8/5·log(2) + log(5)"
    assert float(rows[2][4]) == pytest.approx(0.5004024235381879, rel=1e-12)


def test_entropy_depth_cap_exit_1(capsys, model_file):
    code, _, err = run_cli(capsys, "entropy", "--model", model_file, "--n", "15")
    assert code == 1 and "DepthCapExceeded" in err


def test_entropy_bigfloat_backend(capsys, model_file):
    code, out, _ = run_cli(capsys, "entropy", "--model", model_file,
                           "--n", "1", "--backend", "bigfloat:120")
    assert code == 0
    rows = parse_csv(out)
    assert rows[1][1].startswith("0.6931471805599453094172321214581765")


def test_unknown_backend_exit_2(capsys, model_file):
    code, _, _ = run_cli(capsys, "entropy", "--model", model_file,
                         "--n", "1", "--backend", "decimal")
    assert code == 2


def test_bounds_columns(capsys, model_file):
    code, out, _ = run_cli(capsys, "bounds", "--model", model_file, "--n", "2,3")
    assert code == 0
    rows = parse_csv(out)
    assert rows[0][0] == "n" and rows[0][1] == "lower"
    for row in rows[1:]:
        assert float(row[2]) <= float(row[4]) + 1e-12


def test_expand_reference_rows(capsys):
    code, out, _ = run_cli(capsys, "expand", "--regime", "am", "--mu", "1",
                           "--order", "13")
    assert code == 0
    rows = parse_csv(out)
    assert rows[0] == ["k", "n_used", "value", "value_float", "note"]
    table = {r[0]: r for r in rows[1:]}
    assert table["2"][2] == "-2" and table["2"][1] == "3"
    assert table["4"][2] == "-4/3"
    assert table["6"][2] == "-32/15"
    assert table["13"][1] == "8"
    assert all(r[4] == "" for r in rows[1:])  # no note in this regime


def test_expand_json_payload(capsys):
    code, out, _ = run_cli(capsys, "expand", "--regime", "am", "--mu", "1",
                           "--order", "6", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["command"] == "expand"
    assert payload["regime"] == "almost-memoryless"
    assert payload["rows"][4]["value"] == "-4/3"
    assert payload["rows"][4]["value_float"] == pytest.approx(-4 / 3)


def test_expand_high_snr_carries_note(capsys):
    code, out, _ = run_cli(capsys, "expand", "--regime", "high-snr", "--p", "1/5",
                           "--order", "2")
    assert code == 0
    rows = parse_csv(out)
    assert rows[1][4] == HIGH_SNR_NOTE


def test_settle_verdict(capsys):
    code, out, _ = run_cli(capsys, "settle", "--regime", "am", "--mu", "3/5",
                           "--k", "2", "--n", "3,4,5")
    assert code == 0
    rows = parse_csv(out)
    assert rows[1][2] == "-162/625"
    assert rows[1][7] == "settled at N=3 (theorem threshold 3)"
    assert [r[4] for r in rows[1:]] == ["True", "True", "True"]


def test_radius_report(capsys):
    code, out, _ = run_cli(capsys, "radius", "--regime", "am", "--mu", "1",
                           "--order", "13")
    assert code == 0
    rows = parse_csv(out)
    assert [r[0] for r in rows[1:]] == ["ratio", "cauchy-hadamard", "domb-sykes"]
    for row in rows[1:]:
        assert row[2] == "False"
        assert float(row[1]) > 0


def test_radius_indeterminate_family(capsys):
    code, out, _ = run_cli(capsys, "radius", "--regime", "am", "--mu", "0",
                           "--order", "13")
    assert code == 0
    rows = parse_csv(out)
    for row in rows[1:]:
        assert row[1] == "" and row[2] == "True"


def test_scan_schema_and_determinism(capsys):
    argv = ["scan", "--regime", "am", "--mu", "3/5", "--grid", "1/100:1/10:4",
            "--orders", "4,6"]
    code, out, _ = run_cli(capsys, *argv)
    assert code == 0
    rows = parse_csv(out)
    assert rows[0] == ["grid_value", "order", "partial_sum", "lower_bound",
                       "upper_bound", "inside_flag"]
    assert len(rows) == 1 + 4 * 2
    assert all(r[5] == "True" for r in rows[1:])
    code2, out2, _ = run_cli(capsys, *argv)
    assert code2 == 0 and out2 == out


def test_scan_bad_grid_exit_2(capsys):
    code, _, _ = run_cli(capsys, "scan", "--regime", "am", "--mu", "3/5",
                         "--grid", "1/100:1/10", "--orders", "4")
    assert code == 2


def test_sample_roundtrip(capsys, model_file, tmp_path):
    argv = ["sample", "--model", model_file, "--n", "12", "--seed", "5"]
    code, out, _ = run_cli(capsys, *argv)
    assert code == 0
    rows = parse_csv(out)
    assert rows[0] == ["t", "x", "y"]
    assert len(rows) == 13
    assert [r[0] for r in rows[1:]] == [str(t) for t in range(12)]

    path = tmp_path / "path.csv"
    code, silent, _ = run_cli(capsys, *argv, "--out", str(path))
    assert code == 0 and silent == ""
    assert path.read_text() == out


def test_builtin_family_requires_its_parameter(capsys):
    code, _, err = run_cli(capsys, "expand", "--regime", "am", "--order", "4")
    assert code == 2 and "--mu" in err
    code, _, err = run_cli(capsys, "expand", "--regime", "high-snr", "--order", "4")
    assert code == 2 and "--p" in err


def test_parameter_with_regime_file_is_rejected(capsys, tmp_path):
    path = tmp_path / "regime.json"
    path.write_text(json.dumps({
        "regime": "almost-memoryless",
        "s": 2,
        "R": [["4/5", "1/5"], ["1/5", "4/5"]],
        "T": [["1", "-1"], ["-1", "1"]],
    }))
    code, out, _ = run_cli(capsys, "expand", "--regime", str(path), "--order", "2")
    assert code == 0
    code, _, err = run_cli(capsys, "expand", "--regime", str(path), "--order", "2",
                           "--mu", "1/2")
    assert code == 2 and "built-in" in err


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["expand", "--regime", "am", "--mu", "1"])  # missing --order
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_module_entry_point_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "hmpseries", "expand", "--regime", "am",
         "--mu", "1/2", "--order", "2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "k,n_used,value,value_float,note"
    proc = subprocess.run(
        [sys.executable, "-m", "hmpseries", "frobnicate"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
