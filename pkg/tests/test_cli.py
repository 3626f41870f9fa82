"""Command-line front end: parsing, outputs, manifests, determinism."""

import json
import subprocess
import sys

from symsense.cli import main


def run_cli(args):
    return main(args)


def test_qfi_command_prints_value(capsys, tmp_path):
    out = tmp_path / "amps.csv"
    code = run_cli(["qfi", "--g", "21", "--n", "43", "--u", "1.0233", "--s", "21", "--out", str(out)])
    assert code == 0
    captured = capsys.readouterr()
    assert "18963" in captured.out  # g^2 n for (21, 43)
    text = out.read_text().splitlines()
    assert text[0] == "w,amplitude,codeword"
    assert len(text) == 45  # header + 44 lattice points
    manifest = json.loads((tmp_path / "amps.csv.manifest.json").read_text())
    assert manifest["command"] == "qfi"
    assert manifest["outputs"] == [str(out)]


def test_qfi_u_snapping_note(capsys, tmp_path):
    out = tmp_path / "amps.csv"
    run_cli(["qfi", "--g", "21", "--n", "43", "--u", "1.0233", "--s", "21", "--out", str(out)])
    captured = capsys.readouterr()
    assert "u adjusted" in captured.err  # 1.0233 -> 44/43


def test_invalid_config_exit_code():
    assert run_cli(["qfi", "--g", "0", "--n", "3"]) == 2


def test_fi_scan_and_determinism(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    args = ["fi-scan", "--g", "5", "--n", "3", "--steps", "11", "--theta-max", "0.1"]
    run_cli(args + ["--out", str(a)])
    run_cli(args + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_delete_and_ad_commands(tmp_path):
    out = tmp_path / "del.csv"
    assert run_cli(["delete", "--g", "4", "--n", "4", "--s", "2", "--t", "2", "--out", str(out)]) == 0
    assert "qfi_after" in out.read_text().splitlines()[0]
    out2 = tmp_path / "ad.csv"
    assert run_cli(["ad", "--g", "3", "--n", "3", "--steps", "6", "--out", str(out2)]) == 0
    assert len(out2.read_text().splitlines()) == 7


def test_qec_delete_command(capsys):
    assert run_cli(["qec-delete", "--g", "5", "--n", "5", "--u", "6/5", "--s", "4", "--t", "2"]) == 0
    out = capsys.readouterr().out
    assert "ensemble QFI after QEC" in out
    assert "125" in out


def test_protocol1_command(tmp_path, capsys):
    out = tmp_path / "traj.jsonl"
    code = run_cli(
        [
            "protocol1", "--g", "8", "--n", "3", "--u", "22/3", "--s", "12",
            "--r", "6", "--q", "1.2", "--theta", "0.005", "--ndel", "0.002",
            "--trials", "50", "--seed", "3", "--format", "json", "--out", str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 50
    rec = json.loads(lines[0])
    assert set(rec) >= {"flag", "Phi", "dPhi_dtheta", "fisher_information"}


def test_protocol3_command(capsys):
    assert run_cli(["protocol3", "--c1", "0.5", "--k", "2", "--q", "1.5"]) == 0
    out = capsys.readouterr().out
    assert "c_2 = 11/18" in out


def test_polytope_command(capsys, tmp_path):
    out = tmp_path / "poly.csv"
    code = run_cli(["polytope", "--c", "1/2", "--q", "3/2", "--e1", "0", "--e2", "0", "--out", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    assert "alpha* = 7/9" in text
    assert "gamma* = 2/9" in text
    assert "11/9" in text
    assert out.exists()


def test_fqec_scan_command(tmp_path):
    out = tmp_path / "fqec.csv"
    assert run_cli(["fqec-scan", "--q-list", "1.5", "--out", str(out)]) == 0
    assert out.read_text().startswith("q,c,p2_exponent")


def test_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "symsense.cli", "sld", "--g", "4", "--n", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "eigenvalues" in proc.stdout


def test_protocol1_jsonl_deterministic(tmp_path):
    args = [
        "protocol1", "--g", "8", "--n", "3", "--u", "22/3", "--s", "12",
        "--r", "5", "--q", "1.2", "--theta", "0.004", "--ndel", "0.003",
        "--trials", "40", "--seed", "11", "--format", "json",
    ]
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    run_cli(args + ["--out", str(a)])
    run_cli(args + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
