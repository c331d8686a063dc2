import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from villadsen import cli

SAMPLES = Path(__file__).resolve().parents[1] / "samples"


def run(args, out, env=None):
    proc = subprocess.run([sys.executable, "-m", "villadsen", *args, "--out", str(out)],
                          capture_output=True, text=True, cwd=SAMPLES, env=env)
    return proc.returncode, proc.stdout, proc.stderr


def test_validate_hp_sample(tmp_path):
    code, out, _ = run(["validate", "hp_system.json"], tmp_path)
    assert code == 0 and json.loads(out)["valid"]


def test_ratios_writes_tables(tmp_path):
    code, out, _ = run(["ratios", "two_to_three.json"], tmp_path)
    assert code == 0
    csv = (tmp_path / "ratios.csv").read_text().splitlines()
    assert csv[0] == "stage,vertex,u,u_tilde,r,r_decimal"
    assert csv[1].startswith("1,0,1,1,1,1.000000")
    assert json.loads(out)["verdict"] in {"inconclusive", "consistent-with-rapid-growth"}


def test_zero_level_ratios_is_validation_error(tmp_path):
    code, _, err = run(["ratios", "zero_level.json"], tmp_path)
    assert code == 2 and "at least one level" in err


def test_compare_seed_example(tmp_path):
    code, out, _ = run(["compare", "--a", "uhf_square.json", "--b", "uhf_vee.json"], tmp_path)
    rep = json.loads(out)
    assert code == 0 and rep["summary"] == "invariants differ; rc equal"


def test_rc_output_fields(tmp_path):
    code, out, _ = run(["rc", "two_to_three.json", "--projection", "1:1,1", "--at", "3"], tmp_path)
    assert code == 0
    assert set(json.loads(out)) == {"rc_upper", "rc_lower", "argmax_vertex", "trace_vector"}


def test_witness_pass_and_indeterminate(tmp_path):
    code, out, _ = run(["witness", "uhf_square_fast.json", "--h", "1:0"], tmp_path)
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "pass"
    assert all("/" in iq["rhs"] or iq["rhs"].lstrip("-").isdigit() for iq in rep["inequalities"])
    code, _, err = run(["witness", "uhf_square.json", "--h", "1:1"], tmp_path)
    assert code == 3 and "no witness exists" in err


def test_intertwine_codes(tmp_path):
    code, out, _ = run(["intertwine", "intertwine_feasible.json"], tmp_path)
    assert code == 0 and json.loads(out)["delta"] == [[81, 97], [89, 81]]
    code, out, _ = run(["intertwine", "intertwine_small.json"], tmp_path)
    assert code == 3 and json.loads(out)["violated"] == "multiplicity window empty"


def test_hp_and_uhf_tables(tmp_path):
    code, out, _ = run(["hp", "hp_params_asymmetric.json"], tmp_path)
    assert code == 0 and json.loads(out)["flip"]["verdict"] == "flip obstructed"
    assert (tmp_path / "hp_levels.csv").read_text().startswith("level,c,gap,")
    code, out, _ = run(["uhf", "--seed", "interval-vee-square", "--n", "2,2", "--k", "1,1",
                        "--tail", "certified:1/2"], tmp_path)
    rep = json.loads(out)
    assert code == 0 and rep["tail"] == "certified:1/2"
    assert rep["transitivity"]["verdict"] == "not transitive"
    assert "all:[0,1]^1#0" in (tmp_path / "uhf_stages.csv").read_text()


@pytest.mark.parametrize("args, code", [
    (["validate", "missing.json"], 1),
    (["bogus"], 1),
    (["rc", "two_to_three.json", "--projection", "x", "--at", "2"], 1),
    (["uhf", "--seed", "interval", "--n", "2", "--k", "1", "--tail", "certified:0"], 2),
    (["rc", "zero_level.json", "--projection", "1:1,0", "--at", "1"], 3),
])
def test_exit_codes(tmp_path, args, code):
    assert run(args, tmp_path)[0] == code


def test_out_dir_from_environment(tmp_path):
    env = dict(os.environ, VILLADSEN_OUT=str(tmp_path / "envout"))
    proc = subprocess.run([sys.executable, "-m", "villadsen", "ratios", "two_to_three.json"],
                          capture_output=True, text=True, cwd=SAMPLES, env=env)
    assert proc.returncode == 0 and (tmp_path / "envout" / "ratios.csv").exists()


def test_max_stage_truncates(tmp_path):
    code, out, _ = run(["validate", "hp_system.json", "--max-stage", "2"], tmp_path)
    assert code == 0 and json.loads(out)["stages"] == 2


def test_internal_errors_map_to_exit_4(monkeypatch, tmp_path, capsys):
    def boom(cfg):
        raise RuntimeError("unexpected")
    monkeypatch.setitem(cli.COMMANDS, "validate", boom)
    cfg = cli.RunConfig("validate", {"system": "x"}, tmp_path)
    assert cli.run(cfg) == 4
    assert "internal error" in capsys.readouterr().err
