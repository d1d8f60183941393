import json

import pytest

from looptl.cli import (EXIT_CAPACITY, EXIT_CONFIG, EXIT_OK, main,
                        report_bundle)


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_tl_diagrams(capsys):
    code, out, _ = _run(capsys, "tl", "diagrams", "--n", "4")
    assert code == EXIT_OK
    rep = json.loads(out)["results"][0]
    assert rep["count"] == rep["catalan"] == 14


def test_tl_gram_corank(capsys, tmp_path):
    code, out, _ = _run(capsys, "--out", str(tmp_path),
                        "tl", "gram", "--n", "3", "--ell", "2")
    assert code == EXIT_OK
    rep = json.loads((tmp_path / "report.json").read_text())["results"][0]
    assert rep["corank"] == 1


def test_table_fig02(capsys):
    code, out, _ = _run(capsys, "table", "fig02", "--ellmax", "3")
    assert code == EXIT_OK
    assert "even_restriction_rank" in out


def test_lattice_energy_serializes_exact_scalar(capsys):
    code, out, _ = _run(capsys, "lattice", "energy", "--torus", "2x2",
                        "--ell", "2")
    assert code == EXIT_OK
    rep = json.loads(out)["results"][0]
    assert rep["uniform_state_energy_exact"] == "2*delta+3"


def test_gas_exact_carries_flags(capsys):
    code, out, _ = _run(capsys, "gas", "exact", "--torus", "2x2",
                        "--ell", "3")
    assert code == EXIT_OK
    bundle = json.loads(out)
    assert any("5.6" in f for f in bundle.get("flags", []))


def test_gas_sample_deterministic(capsys):
    args = ("gas", "sample", "--torus", "2x2", "--ell", "2",
            "--sweeps", "500", "--seed", "13", "--tv")
    code1, out1, _ = _run(capsys, *args)
    code2, out2, _ = _run(capsys, *args)
    assert code1 == code2 == EXIT_OK
    r1 = json.loads(out1)["results"][0]
    r2 = json.loads(out2)["results"][0]
    assert r1["tv_distance"] == r2["tv_distance"]
    assert r1["mean_loops"] == r2["mean_loops"]


def test_bad_lattice_size_is_config_error(capsys):
    code, _, err = _run(capsys, "lattice", "build", "--torus", "bogus")
    assert code == EXIT_CONFIG
    assert json.loads(err)["error"] == "config"


def test_exact_backend_level_cap(capsys):
    code, _, err = _run(capsys, "lattice", "kernel", "--torus", "2x2",
                        "--ell", "5")
    assert code == EXIT_CONFIG


def test_capacity_error_exit_code(capsys):
    code, _, err = _run(capsys, "gas", "exact", "--torus", "4x3",
                        "--ell", "2")
    assert code == EXIT_CAPACITY
    assert json.loads(err)["error"] == "capacity"


def test_window_does_not_fit_is_config_error(capsys):
    code, _, err = _run(capsys, "lattice", "joint-kernel", "--torus", "3x3",
                        "--ell", "3")
    assert code == EXIT_CONFIG


def test_config_file_with_flag_override(tmp_path, capsys):
    conf = tmp_path / "conf.json"
    conf.write_text(json.dumps({"n": 4}))
    code, out, _ = _run(capsys, "--config", str(conf), "tl", "diagrams")
    assert code == EXIT_OK
    assert json.loads(out)["results"][0]["count"] == 14
    # explicit flag wins over the file
    code, out, _ = _run(capsys, "--config", str(conf), "tl", "diagrams",
                        "--n", "3")
    assert json.loads(out)["results"][0]["count"] == 5


def test_verify_passes(capsys):
    code, out, _ = _run(capsys, "verify")
    assert code == EXIT_OK
    assert json.loads(out)["results"][0]["passed"]


def test_artifacts_written_to_out_dir(tmp_path, capsys):
    code, _, _ = _run(capsys, "--out", str(tmp_path), "table", "fig02",
                      "--ellmax", "2")
    assert code == EXIT_OK
    assert (tmp_path / "levels.csv").exists()
    assert (tmp_path / "report.json").exists()


def test_report_bundle_merges_flags():
    bundle = report_bundle([{"a": 1, "flags": ["note"]}, {"b": 2}], seed=3)
    assert bundle["flags"] == ["note"]
    assert bundle["seed"] == 3
    assert "wall_clock_seconds" not in bundle
