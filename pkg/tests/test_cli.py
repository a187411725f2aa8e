import os

import numpy as np
import pytest

import radstefan as rs
from radstefan.cli import main
from radstefan.errors import ConfigError
from radstefan.tables import read_profile, write_profile
from radstefan.verify import SUITE_NAMES, exit_code, run_verify


def test_parse_config_requires_c():
    with pytest.raises(ConfigError, match="c"):
        rs.parse_config("", command="solve-wave")


def test_parse_config_rejects_negative_speed():
    with pytest.raises(ConfigError, match="no bounded"):
        rs.parse_config("c: -1\ntm: 1\n", command="solve-wave")


def test_parse_config_defaults_and_aliases():
    cfg = rs.parse_config("c: 1\nT_M: 1\n", command="solve-wave")
    assert cfg.c == 1.0 and cfg.tm == 1.0
    assert cfg.tol == 1e-10
    assert cfg.stretch == 1.0
    assert cfg.grid_ymax() == 40.0
    assert cfg.grid_n() == 2000
    cfg2 = rs.parse_config("command: solve-wave\nc: 0.5\ntm: 1\n")
    assert cfg2.command == "solve-wave"
    assert cfg2.grid_ymax() == 80.0


def test_parse_config_unknown_keys_listed():
    with pytest.raises(ConfigError) as err:
        rs.parse_config("c: 1\ntm: 1\nbogus: 2\nworse: 3\n",
                        command="solve-wave")
    assert "bogus" in str(err.value) and "worse" in str(err.value)


def test_parse_config_range_checks():
    with pytest.raises(ConfigError, match="tol"):
        rs.parse_config("c: 1\ntm: 1\ntol: 0.5\n", command="solve-wave")
    with pytest.raises(ConfigError, match="n ="):
        rs.parse_config("c: 1\ntm: 1\nn: 400000\n", command="solve-wave")


def _small_profile():
    grid = rs.build_grid(5.0, 64, 1.0)
    rng = np.random.default_rng(7)
    values = np.exp(-grid.nodes) * (1.0 + 1e-3 * rng.standard_normal(65))
    residual = np.abs(rng.standard_normal(65)) * 1e-11
    return rs.Profile(grid=grid, values=values, boundary_value=float(values[0]),
                      residual=residual)


def test_profile_round_trip_bits(tmp_path):
    prof = _small_profile()
    path = tmp_path / "p.tsv"
    write_profile(prof, str(path), echo={"c": 1.0, "tm": 1.0})
    header, data = read_profile(str(path))
    assert header.startswith("# radstefan profile")
    assert data.shape == (65, 3)
    assert np.array_equal(data[:, 0], prof.grid.nodes)
    assert np.array_equal(data[:, 1], prof.values)
    assert np.array_equal(data[:, 2], prof.residual)
    with open(path) as fh:
        assert len(fh.read().splitlines()) == 65 + 1    # one header row


def test_residual_column_matches_report(grid12, op12):
    params = rs.WaveParams(c=1.0, t_m=0.25, alpha=1.0)
    profile, report = rs.monotone_iterate(params, grid12, tol=1e-10,
                                          kernel_op=op12)
    assert float(profile.residual.max()) == report.final_residual


def test_cli_solve_wave_writes_outputs(tmp_path):
    out = str(tmp_path / "run")
    code = main(["solve-wave", "--c", "0.15", "--tm", "1.0", "--ymax", "10",
                 "--n", "300", "--out", out])
    assert code == 0
    assert os.path.exists(os.path.join(out, "wave_profile.tsv"))
    assert os.path.exists(os.path.join(out, "wave_profile_report.txt"))
    assert os.path.exists(os.path.join(out, "wave_profile.png"))
    header, data = read_profile(os.path.join(out, "wave_profile.tsv"))
    assert data.shape[0] == 301


def test_cli_no_figures(tmp_path):
    out = str(tmp_path / "nofig")
    code = main(["solve-wave", "--c", "0.15", "--tm", "1.0", "--ymax", "10",
                 "--n", "300", "--out", out, "--no-figures"])
    assert code == 0
    assert not os.path.exists(os.path.join(out, "wave_profile.png"))


def test_cli_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.yaml"
    cfg.write_text("c: 0.15\ntm: 1.0\nymax: 10\nn: 300\n")
    out = str(tmp_path / "cfgrun")
    code = main(["solve-wave", "--config", str(cfg), "--n", "250",
                 "--out", out, "--no-figures"])
    assert code == 0
    header, data = read_profile(os.path.join(out, "wave_profile.tsv"))
    assert "n=250" in header
    assert data.shape[0] == 251


def test_cli_supercritical_fails_cleanly(tmp_path, capsys):
    code = main(["solve-wave", "--c", "1.0", "--tm", "1.0", "--ymax", "10",
                 "--n", "300", "--out", str(tmp_path), "--no-figures"])
    assert code == 1
    assert "supercritical" in capsys.readouterr().err


def test_cli_selfsimilar_and_smalltm(tmp_path):
    out = str(tmp_path / "ss")
    assert main(["selfsimilar", "--tint", "1.0", "--tinf", "0.2",
                 "--alpha", "1.0", "--n", "400", "--out", out,
                 "--no-figures"]) == 0
    assert os.path.exists(os.path.join(out, "selfsimilar_profile.tsv"))
    out2 = str(tmp_path / "sm")
    assert main(["small-tm", "--eps", "0.05", "--c", "1.0", "--n", "500",
                 "--ymax", "20", "--out", out2, "--no-figures"]) == 0
    assert os.path.exists(os.path.join(out2, "smalltm_profile.tsv"))
    assert os.path.exists(os.path.join(out2, "smalltm_report.txt"))


def test_cli_c0(tmp_path):
    out = str(tmp_path / "c0")
    assert main(["c0", "--tm", "1.0", "--ymax", "10", "--n", "300",
                 "--tol", "1e-9", "--out", out, "--no-figures"]) == 0
    header, data = read_profile(os.path.join(out, "c0_profile.tsv"))
    assert data.shape[0] == 301


def test_cli_cmax_reduced_scan(tmp_path):
    out = str(tmp_path / "cm")
    code = main(["cmax", "--tm", "1.0", "--alpha", "1.0", "--latent", "1.0",
                 "--n", "200", "--ymax", "12", "--out", out, "--no-figures"])
    assert code == 0
    psi_path = os.path.join(out, "psi_table.tsv")
    assert os.path.exists(psi_path)
    with open(psi_path) as fh:
        lines = fh.read().splitlines()
    assert lines[0].startswith("# radstefan psi table")
    assert len(lines) > 10


def test_cli_verify_subset_exit_zero(tmp_path, capsys):
    out = str(tmp_path / "v")
    code = main(["verify", "--suite", "kernel", "--out", out])
    assert code == 0
    text = capsys.readouterr().out
    assert "overall: PASS" in text
    assert os.path.exists(os.path.join(out, "verify_report.txt"))


def test_verify_subset_deterministic():
    suites = ["kernel", "selfsimilar", "cli"]
    r1 = run_verify(suites=suites)
    r2 = run_verify(suites=suites)
    assert r1.to_text() == r2.to_text()


def test_verify_fault_injection():
    report = run_verify(suites=["discretization.normalization"],
                        kernel_scale=1.01)
    assert not report.all_passed()
    assert exit_code(report) == 1
    clean = run_verify(suites=["discretization.normalization"])
    assert clean.all_passed()
    assert exit_code(clean) == 0


def test_verify_unknown_suite():
    with pytest.raises(KeyError):
        run_verify(suites=["nope"])


def test_full_verify_report_complete(full_verify_report):
    names = [r.name for r in full_verify_report.results]
    assert names == list(SUITE_NAMES)
    assert len(set(names)) == len(names)       # each suite exactly once
    failing = [r.name for r in full_verify_report.results if not r.passed]
    assert failing == []
    text = full_verify_report.to_text()
    assert text.endswith("overall: PASS\n")
    assert f"suites: {len(SUITE_NAMES)}" in text
