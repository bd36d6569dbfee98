import json

import pytest

from hypercnot.cli import load_config, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- truth-table ----------------------------------------------------------


def test_truth_table_ideal(capsys):
    code, out, _ = run_cli(capsys, "truth-table")
    assert code == 0
    assert "16/16 PASS" in out
    assert out.count("PASS") == 17  # 16 rows plus the summary


def test_truth_table_physical_strong_coupling(capsys):
    code, out, _ = run_cli(capsys, "truth-table", "--mode", "physical", "--g", "2.4")
    assert code == 0
    assert "16/16 PASS" in out


def test_truth_table_physical_weak_coupling_reports_fidelity(capsys):
    code, out, _ = run_cli(capsys, "truth-table", "--mode", "physical", "--g", "0.5")
    assert code == 0
    fidelities = [
        float(line.split()[-2]) for line in out.splitlines()[1:17]
    ]
    assert all(f < 1.0 for f in fidelities)


def test_truth_table_physical_requires_g(capsys):
    with pytest.raises(SystemExit) as err:
        main(["truth-table", "--mode", "physical"])
    assert err.value.code == 2


# -- gate -----------------------------------------------------------------


def test_gate_basis_preset(capsys):
    code, out, _ = run_cli(capsys, "gate", "--input", "basis:L,a2,R,b1")
    assert code == 0
    assert "|L,a2,L,b2>" in out
    assert "survival=1.000000000" in out


def test_gate_amplitude_flags_renormalize_with_warning(capsys):
    code, out, err = run_cli(capsys, "gate", "--a-pol", "0.6,0.8001")
    assert code == 0
    assert "renormalized" in err


def test_gate_sampling_is_deterministic(capsys):
    _, out_a, _ = run_cli(capsys, "gate", "--seed", "5")
    _, out_b, _ = run_cli(capsys, "gate", "--seed", "5")
    assert out_a == out_b


def test_gate_physical_reports_branch_fidelities(capsys):
    code, out, _ = run_cli(
        capsys, "gate", "--mode", "physical", "--g", "0.5", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["mode"] == "physical"
    assert len(payload["branches"]) == 4
    assert 0 < payload["survival_probability"] < 1
    for branch in payload["branches"]:
        assert 0 <= branch["fidelity_vs_ideal"] <= 1


# -- cluster / bell-analyze --------------------------------------------------


def test_cluster_command(capsys):
    code, out, _ = run_cli(capsys, "cluster")
    assert code == 0
    assert "cluster state:" in out
    assert out.count("1.000000000") >= 4


def test_bell_analyze_all(capsys):
    code, out, _ = run_cli(capsys, "bell-analyze")
    assert code == 0
    assert "16/16 distinct patterns: PASS" in out


def test_bell_analyze_single(capsys):
    code, out, _ = run_cli(capsys, "bell-analyze", "--pol", "2", "--spatial", "1")
    assert code == 0
    assert "psi+,phi-" in out


# -- paper-check ----------------------------------------------------------------


def test_paper_check_passes_at_default_tolerance(capsys):
    code, out, _ = run_cli(capsys, "paper-check")
    assert code == 0
    assert out.count("PASS") == 4
    assert "all within tolerance" in out


def test_paper_check_fails_at_unrealistic_tolerance(capsys):
    code, out, _ = run_cli(capsys, "paper-check", "--tolerance", "0.0001")
    assert code == 1
    assert "FAIL" in out


def test_paper_check_json_matches_text_values(capsys):
    code, out, _ = run_cli(capsys, "paper-check", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["rows"]) == 4
    assert all(row["ok"] for row in payload["rows"])
    assert abs(payload["rows"][0]["fidelity_computed"] - 0.9431595580655449) < 1e-12


def test_paper_check_simulate_flag(capsys):
    code, out, _ = run_cli(capsys, "paper-check", "--simulate")
    assert code == 0
    assert "circuit-level cross-check" in out
    assert "F_sim" in out


# -- sweep ------------------------------------------------------------------------


def test_sweep_row_count_and_header(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--resolution", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "g_over_kappa,kappa_s_over_kappa,gamma_over_kappa,F,eta"
    assert len(lines) == 1 + 9


def test_sweep_single_point_matches_paper_check(capsys):
    code, out, _ = run_cli(
        capsys,
        "sweep",
        "--g-min", "0.5", "--g-max", "0.5",
        "--kappa-s-min", "0", "--kappa-s-max", "0",
        "--resolution", "1",
    )
    assert code == 0
    row = out.strip().splitlines()[1].split(",")
    assert abs(float(row[3]) - 0.9431595580655449) < 1e-9
    assert abs(float(row[4]) - 0.48860888984641626) < 1e-9


def test_sweep_rerun_is_byte_identical(tmp_path, capsys):
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    assert main(["sweep", "--resolution", "4", "--out", str(out_a)]) == 0
    assert main(["sweep", "--resolution", "4", "--out", str(out_b)]) == 0
    capsys.readouterr()
    assert out_a.read_bytes() == out_b.read_bytes()
    assert b"\r" not in out_a.read_bytes()  # LF endings


def test_sweep_invalid_range_is_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        main(["sweep", "--g-min", "3", "--g-max", "1"])
    assert err.value.code == 2


# -- config file -------------------------------------------------------------------


def test_config_file_supplies_defaults(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("mode = physical\ng = 2.4\n# comment line\nkappa_s = 0.0\n")
    code, out, _ = run_cli(capsys, "truth-table", "--config", str(cfg))
    assert code == 0
    assert "16/16 PASS" in out
    fidelities = [float(line.split()[-2]) for line in out.splitlines()[1:17]]
    assert all(f < 1.0 for f in fidelities)  # physical mode took effect


def test_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("resolution = 3\n")
    code, out, _ = run_cli(capsys, "sweep", "--config", str(cfg), "--resolution", "2")
    assert code == 0
    assert len(out.strip().splitlines()) == 1 + 4


def test_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("bogus = 1\n")
    with pytest.raises(ValueError):
        load_config(str(cfg))
    with pytest.raises(SystemExit) as err:
        main(["truth-table", "--config", str(cfg)])
    assert err.value.code == 2


# -- generic ------------------------------------------------------------------------


def test_unknown_command_is_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "report.txt"
    assert main(["paper-check", "--out", str(target)]) == 0
    capsys.readouterr()
    assert "all within tolerance" in target.read_text()


def test_unwritable_out_path_fails(tmp_path, capsys):
    code = main(["paper-check", "--out", str(tmp_path / "missing" / "x.txt")])
    captured = capsys.readouterr()
    assert code == 1
    assert "error:" in captured.err
