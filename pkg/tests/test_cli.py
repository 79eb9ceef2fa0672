"""End-to-end CLI tests: exit codes, artifacts, deterministic reruns."""

import json
import math
import subprocess
import sys

import pytest

BASE_CONFIG = {
    "model": {
        "field": {"kind": "constant", "matrix": [[1.0]]},
        "sigma": {"kind": "discrete", "atoms": [[[1.0], 1.0], [[-1.0], 1.0]]},
    },
    "sim": {"T": 0.2, "eps": 0.01, "seed": 7, "n_paths": 3, "x0": [0.0]},
    "symbol_eval": {"x_grid": [[0.0]], "xi_grid": [[1.0], [2.5]]},
    "stats": [{"statistic": "empirical_cf", "t": 0.2, "xi": [1.0]}],
}


def run_cli(args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "oslsim.cli", *args],
        cwd=cwd,
        capture_output=True,
        text=True,
    )


def write_config(tmp_path, cfg=None, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg if cfg is not None else BASE_CONFIG))
    return str(path)


def test_validate_ok(tmp_path):
    cfgp = write_config(tmp_path)
    r = run_cli(["validate", "--config", cfgp, "--out", str(tmp_path)], tmp_path)
    assert r.returncode == 0, r.stderr
    payload = json.loads((tmp_path / "validate.json").read_text())
    assert payload["ok"] is True


def test_validate_inadmissible_field_exits_1(tmp_path):
    cfg = json.loads(json.dumps(BASE_CONFIG))
    cfg["model"]["field"]["matrix"] = [[0.4]]  # eigenvalue below 1/2
    cfgp = write_config(tmp_path, cfg)
    r = run_cli(["validate", "--config", cfgp, "--out", str(tmp_path)], tmp_path)
    assert r.returncode == 1


def test_symbol_eval_closed_form_and_rerun_byte_identical(tmp_path):
    cfgp = write_config(tmp_path)
    r = run_cli(["symbol-eval", "--config", cfgp, "--out", str(tmp_path)], tmp_path)
    assert r.returncode == 0, r.stderr
    first = (tmp_path / "symbol_eval.csv").read_bytes()
    rows = first.decode().strip().splitlines()
    assert rows[0] == "x1,xi1,q,err_est"
    for line in rows[1:]:
        x, xi, q, err = (float(c) for c in line.split(","))
        assert abs(q - math.pi * abs(xi)) <= 1e-6
        # 17-significant-digit round trip: reserializing changes nothing
        assert format(q, ".17g") in line
    r2 = run_cli(["symbol-eval", "--config", cfgp, "--out", str(tmp_path)], tmp_path)
    assert r2.returncode == 0
    assert (tmp_path / "symbol_eval.csv").read_bytes() == first


def test_symbol_eval_nonsymmetric_needs_complex_flag(tmp_path):
    cfg = json.loads(json.dumps(BASE_CONFIG))
    cfg["model"]["sigma"]["atoms"] = [[[1.0], 1.0]]
    cfgp = write_config(tmp_path, cfg)
    r = run_cli(["symbol-eval", "--config", cfgp, "--out", str(tmp_path)], tmp_path)
    assert r.returncode == 1
    r2 = run_cli(
        ["symbol-eval", "--config", cfgp, "--out", str(tmp_path), "--complex"], tmp_path
    )
    assert r2.returncode == 0, r2.stderr
    header = (tmp_path / "symbol_eval.csv").read_text().splitlines()[0]
    assert header == "x1,xi1,q_re,q_im"


def test_simulate_rerun_byte_identical_and_seed_override(tmp_path):
    cfgp = write_config(tmp_path)
    out1, out2, out3 = (tmp_path / n for n in ("a", "b", "c"))
    for out in (out1, out2):
        r = run_cli(["simulate", "--config", cfgp, "--out", str(out)], tmp_path)
        assert r.returncode == 0, r.stderr
    assert (out1 / "ensemble.jsonl").read_bytes() == (out2 / "ensemble.jsonl").read_bytes()
    assert (out1 / "manifest.json").read_bytes() == (out2 / "manifest.json").read_bytes()
    r = run_cli(
        ["simulate", "--config", cfgp, "--out", str(out3), "--seed", "8"], tmp_path
    )
    assert r.returncode == 0
    assert (out3 / "ensemble.jsonl").read_bytes() != (out1 / "ensemble.jsonl").read_bytes()
    manifest = json.loads((out3 / "manifest.json").read_text())
    assert manifest["seed"] == 8
    assert manifest["n_paths"] == 3


def test_stats_and_rerun(tmp_path):
    cfgp = write_config(tmp_path)
    r = run_cli(["stats", "--config", cfgp, "--out", str(tmp_path)], tmp_path)
    assert r.returncode == 0, r.stderr
    first = (tmp_path / "stats.json").read_bytes()
    reports = json.loads(first)
    assert reports[0]["statistic"] == "empirical_cf"
    est = reports[0]["estimate"]
    assert est["re"] ** 2 + est["im"] ** 2 <= 1.0 + 1e-12
    r2 = run_cli(["stats", "--config", cfgp, "--out", str(tmp_path)], tmp_path)
    assert r2.returncode == 0
    assert (tmp_path / "stats.json").read_bytes() == first


def test_indices(tmp_path):
    cfgp = write_config(tmp_path)
    r = run_cli(["indices", "--config", cfgp, "--out", str(tmp_path)], tmp_path)
    assert r.returncode == 0, r.stderr
    payload = json.loads((tmp_path / "indices.json").read_text())
    assert payload["beta_infinity"] == pytest.approx(1.0)
    assert payload["delta_infinity"] == pytest.approx(1.0)
    assert payload["beta_zero"] == pytest.approx(1.0)


def test_verify_selected_check(tmp_path):
    cfgp = write_config(
        tmp_path, {"verify": {"checks": ["criterion-13-index-closed-forms"]}}
    )
    r = run_cli(["verify", "--config", cfgp, "--out", str(tmp_path)], tmp_path)
    assert r.returncode == 0, r.stderr
    payload = json.loads((tmp_path / "verify.json").read_text())
    assert payload[0]["check"] == "criterion-13-index-closed-forms"
    assert payload[0]["passed"] is True


def test_config_error_exit_codes(tmp_path):
    # missing --config
    r = run_cli(["simulate", "--out", str(tmp_path)], tmp_path)
    assert r.returncode == 2
    # unreadable config path
    r = run_cli(["simulate", "--config", str(tmp_path / "nope.json")], tmp_path)
    assert r.returncode == 3
    # malformed JSON
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    r = run_cli(["simulate", "--config", str(bad)], tmp_path)
    assert r.returncode == 2
    # unknown statistic
    cfg = json.loads(json.dumps(BASE_CONFIG))
    cfg["stats"] = [{"statistic": "nope"}]
    r = run_cli(["stats", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path)], tmp_path)
    assert r.returncode == 2
    # unknown verify check
    cfg = {"verify": {"checks": ["no-such-check"]}}
    r = run_cli(
        ["verify", "--config", write_config(tmp_path, cfg, "v.json"), "--out", str(tmp_path)],
        tmp_path,
    )
    assert r.returncode == 2
