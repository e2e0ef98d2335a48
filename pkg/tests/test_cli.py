"""Command-line surface: formats, exit codes, file outputs."""

import json
import math
import subprocess
import sys

import pytest

from tmoments.cli import SweepSpec, main, sweep_csv, sweep_rows


def run_cli(*argv):
    return main(list(argv))


def parse_plain(captured):
    out = {}
    for line in captured.strip().splitlines():
        key, _, value = line.partition("=")
        try:
            out[key] = float(value)
        except ValueError:
            out[key] = value
    return out


def test_moments_folded_exact_point(capsys):
    assert run_cli("moments", "--dist", "folded", "--mu", "0", "--nu", "4", "--format", "plain") == 0
    fields = parse_plain(capsys.readouterr().out)
    assert fields["mean"] == pytest.approx(1.0, abs=1e-13)
    assert fields["variance"] == pytest.approx(1.0, abs=1e-13)
    assert fields["second_raw"] == pytest.approx(2.0, rel=1e-13)


def test_moments_truncated_symmetry_value(capsys):
    assert run_cli("moments", "--dist", "truncated", "--mu", "0", "--nu", "5") == 0
    fields = parse_plain(capsys.readouterr().out)
    assert fields["second_raw"] == pytest.approx(5.0 / 3.0, rel=1e-12)


def test_moments_json_roundtrip(capsys):
    assert run_cli("moments", "--dist", "truncated", "--mu", "1", "--nu", "5", "--format", "json") == 0
    fields = json.loads(capsys.readouterr().out)
    assert fields["second_raw"] == pytest.approx(2.93509548113533, rel=1e-12)


def test_moments_csv_format(capsys):
    assert run_cli("moments", "--dist", "folded", "--mu", "0", "--nu", "4", "--format", "csv") == 0
    header, row = capsys.readouterr().out.strip().splitlines()
    assert header.split(",") == ["mean", "second_raw", "variance"]
    assert [float(v) for v in row.split(",")] == pytest.approx([1.0, 2.0, 1.0], abs=1e-11)


def test_moments_low_nu_exits_2(capsys):
    assert run_cli("moments", "--dist", "folded", "--mu", "0", "--nu", "0.9") == 2
    err = capsys.readouterr().err
    assert "nu > 1" in err


def test_moments_nu_between_one_and_two_notes_missing_variance(capsys):
    assert run_cli("moments", "--dist", "folded", "--mu", "1", "--nu", "1.5") == 0
    fields = parse_plain(capsys.readouterr().out)
    assert "mean" in fields and "variance" not in fields and "second_raw" not in fields
    assert "nu > 2" in fields["note"]


def test_moments_lower_only_for_truncated(capsys):
    assert run_cli("moments", "--dist", "folded", "--mu", "0", "--nu", "4", "--lower", "1") == 2
    assert "--lower" in capsys.readouterr().err


def test_moments_truncated_with_lower(capsys):
    assert run_cli("moments", "--dist", "truncated", "--mu", "1", "--nu", "5", "--lower", "-2", "--format", "json") == 0
    fields = json.loads(capsys.readouterr().out)
    from tmoments import StudentParams, TruncatedT, mean_truncated

    assert fields["mean"] == pytest.approx(
        mean_truncated(TruncatedT(StudentParams(1.0, 5.0), lower=-2.0)), rel=1e-14
    )


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec("folded", 2.0, 5.0, -5.0, 10)
    with pytest.raises(ValueError):
        SweepSpec("folded", 2.0, 0.0, 1.0, 1)
    with pytest.raises(ValueError):
        SweepSpec("gamma", 2.0, 0.0, 1.0, 10)


def test_sweep_csv_contract(tmp_path):
    out = tmp_path / "sweep.csv"
    assert run_cli(
        "sweep", "--dist", "folded", "--nu", "2", "--mu-min", "0", "--mu-max", "10",
        "--steps", "201", "--out", str(out),
    ) == 0
    raw = out.read_bytes()
    assert b"\r" not in raw  # LF line endings only
    lines = raw.decode().strip().split("\n")
    assert lines[0] == "mu,mean,variance,diag_gap"
    assert len(lines) == 202
    mus, means, gaps = [], [], []
    for line in lines[1:]:
        mu_s, mean_s, var_s, gap_s = line.split(",")
        assert var_s == ""  # no variance column content at nu = 2
        mus.append(float(mu_s))
        means.append(float(mean_s))
        gaps.append(float(gap_s))
    assert mus == sorted(mus)
    for mu, mean, gap in zip(mus, means, gaps):
        assert mean == pytest.approx(math.sqrt(mu * mu + 2.0), abs=1e-10)
        assert gap == pytest.approx(mean - mu, abs=1e-10)
    assert all(g > 0 for g in gaps)
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_sweep_byte_stable(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--dist", "truncated", "--nu", "3", "--mu-min", "-4", "--mu-max", "6",
            "--steps", "11", "--out"]
    assert run_cli(*args, str(a)) == 0
    assert run_cli(*args, str(b)) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep_truncated_centered_row():
    rows = sweep_rows(SweepSpec("truncated", 2.0, 0.0, 10.0, 3))
    mu0, mean0, var0, gap0 = rows[0]
    assert mu0 == 0.0
    assert mean0 == pytest.approx(math.sqrt(2.0), rel=1e-13)
    assert var0 is None
    # 12 significant digits in the rendered CSV
    cell = sweep_csv(rows).splitlines()[1].split(",")[1]
    assert cell == "1.41421356237"


def test_sweep_variance_column_present_above_nu2():
    rows = sweep_rows(SweepSpec("folded", 4.0, -1.0, 1.0, 3))
    assert all(r[2] is not None and r[2] > 0 for r in rows)


def test_sweep_stdout(capsys):
    assert run_cli("sweep", "--dist", "folded", "--nu", "2", "--mu-min", "0", "--mu-max", "1",
                   "--steps", "2", "--out", "-") == 0
    out = capsys.readouterr().out
    assert out.startswith("mu,mean,variance,diag_gap\n")


def test_sweep_unwritable_path_exits_3(capsys):
    rc = run_cli("sweep", "--dist", "folded", "--nu", "2", "--mu-min", "0", "--mu-max", "1",
                 "--steps", "2", "--out", "/nonexistent-dir/sweep.csv")
    assert rc == 3
    assert capsys.readouterr().err.startswith("tmoments:")


def test_sweep_low_nu_exits_2(capsys):
    rc = run_cli("sweep", "--dist", "folded", "--nu", "1", "--mu-min", "0", "--mu-max", "1",
                 "--steps", "2", "--out", "-")
    assert rc == 2
    assert "nu > 1" in capsys.readouterr().err


def test_sweep_ascii_plot(capsys):
    assert run_cli("sweep", "--dist", "folded", "--nu", "2", "--mu-min", "-5", "--mu-max", "10",
                   "--steps", "61", "--out", "-", "--ascii-plot") == 0
    out = capsys.readouterr().out
    chart = out.split("diag_gap\n", 1)[1]
    chart_lines = chart.strip("\n").split("\n")[61 - 1 + 1 :]  # skip CSV rows
    assert len(chart_lines) == 21  # 20 rows + legend
    assert any("*" in line for line in chart_lines)
    assert any("." in line for line in chart_lines)


def test_sweep_renders_figure(tmp_path):
    out = tmp_path / "sweep.csv"
    fig = tmp_path / "sweep.png"
    assert run_cli("sweep", "--dist", "folded", "--nu", "2", "--mu-min", "-5", "--mu-max", "10",
                   "--steps", "31", "--out", str(out), "--plot", str(fig)) == 0
    data = fig.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(data) > 1000


def test_verify_small_grid_passes(capsys):
    rc = run_cli("verify", "--mu-min", "-1", "--mu-max", "1", "--mu-step", "1",
                 "--nu-list", "3,5", "--mc-samples", "20000", "--seed", "42")
    out = capsys.readouterr().out
    assert rc == 0
    assert out.strip().endswith("PASS 30/30")


def test_verify_impossible_tolerance_exits_4(capsys):
    rc = run_cli("verify", "--mu-min", "0", "--mu-max", "0", "--mu-step", "1",
                 "--nu-list", "5", "--quantities", "trunc-mean",
                 "--mc-samples", "20000", "--tol", "1e-16")
    out = capsys.readouterr().out
    assert rc == 4
    assert "FAIL 1/1" in out


def test_verify_quantity_subset_no_skips(capsys):
    rc = run_cli("verify", "--mu-min", "0", "--mu-max", "1", "--mu-step", "0.5",
                 "--nu-list", "2.5", "--quantities", "trunc-second,trunc-var",
                 "--mc-samples", "20000")
    out = capsys.readouterr().out
    assert rc == 0
    assert "skipped" not in out
    assert "PASS 6/6" in out


def test_verify_csv_format_and_stability(capsys):
    args = ("verify", "--mu-min", "0", "--mu-max", "0", "--mu-step", "1",
            "--nu-list", "4", "--quantities", "folded-mean",
            "--mc-samples", "20000", "--format", "csv")
    assert run_cli(*args) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0] == "mu,nu,quantity,closed_form,quadrature,mc_estimate,mc_stderr,rel_err,pass"
    assert lines[1].split(",")[2] == "folded-mean"
    assert lines[-1] == "PASS 1/1"
    assert run_cli(*args) == 0
    assert capsys.readouterr().out == out  # byte-stable for identical flags


def test_verify_json_format(capsys):
    rc = run_cli("verify", "--mu-min", "0", "--mu-max", "0", "--mu-step", "1",
                 "--nu-list", "1.5", "--mc-samples", "20000", "--format", "json")
    raw = capsys.readouterr().out
    assert rc == 0
    payload = json.loads(raw[: raw.rindex("}") + 1])
    assert payload["overall_pass"] is True
    assert len(payload["skipped"]) == 3


def test_verify_bad_step_exits_2(capsys):
    assert run_cli("verify", "--mu-step", "0") == 2
    assert "mu-step" in capsys.readouterr().err


def test_sample_deterministic_output(capsys):
    args = ("sample", "--dist", "truncated", "--mu", "-3", "--nu", "3", "-n", "50", "--seed", "8")
    assert run_cli(*args) == 0
    first = capsys.readouterr().out
    assert run_cli(*args) == 0
    assert capsys.readouterr().out == first
    values = [float(v) for v in first.split()]
    assert len(values) == 50
    assert all(v > 0 for v in values)


def test_sample_respects_lower(capsys):
    assert run_cli("sample", "--dist", "truncated", "--mu", "0", "--nu", "3",
                   "--lower", "1.5", "-n", "25", "--seed", "3") == 0
    values = [float(v) for v in capsys.readouterr().out.split()]
    assert all(v > 1.5 for v in values)


def test_sample_student_and_folded(capsys):
    assert run_cli("sample", "--dist", "student", "--mu", "5", "--nu", "2", "-n", "10", "--seed", "1") == 0
    capsys.readouterr()
    assert run_cli("sample", "--dist", "folded", "--mu", "0", "--nu", "2", "-n", "10", "--seed", "1") == 0
    values = [float(v) for v in capsys.readouterr().out.split()]
    assert all(v >= 0 for v in values)


def test_console_script_usage_error_is_2():
    proc = subprocess.run(
        [sys.executable, "-m", "tmoments.cli", "moments", "--dist", "weibull", "--mu", "0", "--nu", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
    assert "invalid choice" in proc.stderr


def test_console_script_happy_path():
    proc = subprocess.run(
        [sys.executable, "-m", "tmoments.cli", "moments", "--dist", "folded", "--mu", "0", "--nu", "4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "mean=1.0" in proc.stdout
