"""Command-line interface: outputs, exit codes, determinism."""
import math

import pytest

from doubleline.cli import main


def run(capsysbinary, *argv):
    code = main(list(argv))
    out = capsysbinary.readouterr()
    return code, out.out, out.err


def test_classify_single_theta(capsysbinary):
    code, out, _ = run(capsysbinary, "classify", "--alpha", "50", "--beta", "70", "--theta", "90")
    assert code == 0
    assert out == b"FullRange\n"
    code, out, _ = run(capsysbinary, "classify", "--alpha", "50", "--beta", "70", "--theta", "70")
    assert code == 0
    assert out == b"Critical\n"
    code, out, _ = run(capsysbinary, "classify", "--alpha", "50", "--beta", "70", "--theta", "60")
    assert code == 0
    assert out.startswith(b"Finite(M=") and out.endswith(b" deg)\n")


def test_classify_table(capsysbinary):
    code, out, _ = run(capsysbinary, "classify", "--alpha", "50", "--beta", "70", "--grid", "30")
    assert code == 0
    lines = out.decode().splitlines()
    assert lines[0] == "mode,theta_deg,regime,M_deg"
    assert len(lines) == 1 + 4 * 5  # four modes, thetas 30..150
    assert lines[1].startswith("a-I,30,")


def test_modes_count_and_check(capsysbinary):
    code, out, _ = run(capsysbinary, "modes", "--n", "4")
    assert code == 0
    assert out == b"10\n"
    code, out, _ = run(capsysbinary, "modes", "--n", "3", "--sequences", "--check")
    assert code == 0
    lines = out.decode().splitlines()
    assert lines[0] == "4"
    assert lines[1:5] == ["+++---", "++-+--", "++--+-", "+-+-+-"]
    assert lines[5] == "enumeration: 4 (agree)"


def test_gen_analyze_round_trip(tmp_path, capsysbinary):
    path = tmp_path / "single.fold"
    code, out, _ = run(capsysbinary, "gen", "single", "--alpha", "60", "--beta", "80",
                       "--out", str(path))
    assert code == 0
    assert out == b""
    code, out, _ = run(capsysbinary, "analyze", str(path))
    assert code == 0
    text = out.decode()
    assert "vertices: 5" in text
    assert "interior vertices: 1" in text
    assert "flat-foldable deg-4 yes" in text


def test_doubleline_sweep_fold_solve_thicken(tmp_path, capsysbinary):
    single = tmp_path / "single.fold"
    doubled = tmp_path / "dl.fold"
    run(capsysbinary, "gen", "single", "--alpha", "60", "--beta", "80", "--out", str(single))
    code, _, _ = run(capsysbinary, "doubleline", str(single), "--theta", "90",
                     "--radii", "0.2,0.2,0.2,0.2", "--mode", "a-I", "--out", str(doubled))
    assert code == 0

    code, out, _ = run(capsysbinary, "sweep", str(doubled), "--samples", "9")
    assert code == 0
    lines = out.decode().splitlines()
    assert lines[0].startswith("t,rho_0,") and lines[0].endswith(",residual")
    assert len(lines) == 10
    assert all(float(ln.split(",")[-1]) < 1e-9 for ln in lines[1:])

    code, out, _ = run(capsysbinary, "fold", str(doubled), "--t", "0.5", "--format", "obj")
    assert code == 0
    assert out.startswith(b"# doubleline folded state")

    code, out, _ = run(capsysbinary, "solve", str(doubled), "--driver", "0",
                       "--target", "25")
    assert code == 0
    lines = out.decode().splitlines()
    assert lines[0] == "crease,rho_deg"
    assert abs(float(lines[1].split(",")[1]) - 25.0) < 1e-8

    code, out, _ = run(capsysbinary, "thicken", str(doubled), "--tau", "0.01",
                       "--samples", "8")
    assert code == 0
    assert out.startswith(b"# doubleline thick panels")

    code, out, _ = run(capsysbinary, "thicken", str(doubled), "--tau", "0.01",
                       "--samples", "8", "--format", "csv")
    assert code == 0
    lines = out.decode().splitlines()
    assert lines[0] == "t,min_clearance,pair"
    assert len(lines) == 9
    assert all(float(ln.split(",")[1]) >= 0.0 for ln in lines[1:])


def test_export_svg(tmp_path, capsysbinary):
    path = tmp_path / "dlm.fold"
    run(capsysbinary, "gen", "dl-miura", "--rows", "2", "--cols", "2", "--angle", "60",
        "--theta", "90", "--out", str(path))
    code, out, _ = run(capsysbinary, "export", str(path))
    assert code == 0
    assert b"<svg" in out and b"path" in out
    code, _, err = run(capsysbinary, "export", str(path), "--format", "csv")
    assert code == 1
    assert b"sweep subcommand" in err


def test_domain_error_exit_code(tmp_path, capsysbinary):
    bad = tmp_path / "empty.fold"
    bad.write_bytes(b"")
    code, out, err = run(capsysbinary, "sweep", str(bad))
    assert code == 1
    assert out == b""
    assert err.startswith(b"error:")


def test_usage_error_exit_code(tmp_path, capsysbinary):
    code, _, err = run(capsysbinary, "gen", "miura", "--rows", "2", "--cols", "2")
    assert code == 2
    assert b"--angle" in err
    code, _, _ = run(capsysbinary, "modes")
    assert code == 2


def test_missing_file_is_domain_error(capsysbinary):
    code, _, err = run(capsysbinary, "analyze", "/nonexistent/nowhere.fold")
    assert code == 1
    assert err.startswith(b"error:")


def test_determinism(tmp_path, capsysbinary):
    args = ("gen", "dl-miura", "--rows", "2", "--cols", "2", "--angle", "60", "--theta", "90")
    _, first, _ = run(capsysbinary, *args)
    _, second, _ = run(capsysbinary, *args)
    assert first == second

    path = tmp_path / "dlm.fold"
    path.write_bytes(first)
    _, s1, _ = run(capsysbinary, "sweep", str(path), "--samples", "7")
    _, s2, _ = run(capsysbinary, "sweep", str(path), "--samples", "7")
    assert s1 == s2
