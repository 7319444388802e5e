import json
import re
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from nagraded.cli import COMMANDS, main

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"
GOLDEN = Path(__file__).resolve().parent / "golden"

SHIPPED = {
    "spectrum": "spectrum_scrambled.json", "vol": "vol.json", "asymptotics": "asymptotics.json",
    "theorem-b": "theorem_b.json", "theorem-c": "theorem_c.json", "okounkov": "okounkov.json",
    "chebyshev": "chebyshev.json", "equidistribution": "equidistribution.json", "fujita": "fujita.json",
}


def write_cfg(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return p


def test_every_command_has_a_shipped_config():
    assert set(SHIPPED) == set(COMMANDS)


@pytest.mark.parametrize("command", sorted(SHIPPED))
def test_shipped_configs_run(command, tmp_path):
    out = tmp_path / "out"
    assert main([command, str(CONFIGS / SHIPPED[command]), "--out", str(out)]) == 0
    man = json.loads((out / "manifest.json").read_text())
    assert man["command"] == command
    assert set(man["versions"]) >= {"nagraded", "python", "gmpy2", "kernels"}
    assert len(man["config_sha256"]) == 64
    for name in man["outputs"]:
        text = (out / name).read_text()
        assert text
        # exact rationals only: no decimal points or exponents in any cell
        assert not re.search(r"\d\.\d|\de-?\d", text), name


def test_spectrum_golden(tmp_path):
    assert main(["spectrum", str(CONFIGS / "spectrum_scrambled.json"), "--out", str(tmp_path)]) == 0
    got = (tmp_path / "spectrum.csv").read_text()
    assert got == (GOLDEN / "spectrum_scrambled.csv").read_text()
    assert all(line.endswith(",True") for line in got.splitlines()[1:])


def test_byte_identical_reruns(tmp_path):
    for d in ("r1", "r2"):
        assert main(["okounkov", str(CONFIGS / "okounkov.json"), "--out", str(tmp_path / d)]) == 0
        assert main(["spectrum", str(CONFIGS / "spectrum_scrambled.json"), "--out", str(tmp_path / d)]) == 0
    for name in ("okounkov.csv", "theta.csv", "spectrum.csv"):
        assert (tmp_path / "r1" / name).read_bytes() == (tmp_path / "r2" / name).read_bytes()


def test_seed_changes_scrambled_output(tmp_path):
    main(["spectrum", str(CONFIGS / "spectrum_scrambled.json"), "--out", str(tmp_path / "a")])
    main(["spectrum", str(CONFIGS / "spectrum_scrambled.json"), "--set", "seed=7", "--out", str(tmp_path / "b")])
    assert (tmp_path / "a" / "spectrum.csv").read_text() != (tmp_path / "b" / "spectrum.csv").read_text()


def test_theorem_b_constant(tmp_path):
    assert main(["theorem-b", str(CONFIGS / "theorem_b.json"), "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "theorem-b.csv").read_text().splitlines()
    assert lines[0] == "m,energy,vol_over_m,gap"
    assert len(lines) == 65
    assert all(line.split(",")[1:] == ["-3/4", "-3/4", "0/1"] for line in lines[1:])


def test_missing_seed_exit_2(tmp_path, capsys):
    p = write_cfg(tmp_path, {"scrambled": {"dims": [2], "count": 1}})
    assert main(["spectrum", str(p), "--out", str(tmp_path / "o")]) == 2
    assert "seed" in capsys.readouterr().err


@pytest.mark.parametrize("seed", [-1, 2 ** 64, "abc"])
def test_bad_seed_exit_2(tmp_path, seed):
    p = write_cfg(tmp_path, {"seed": seed, "scrambled": {"dims": [2], "count": 1}})
    assert main(["spectrum", str(p), "--out", str(tmp_path / "o")]) == 2


def test_bad_json_exit_2(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["spectrum", str(p)]) == 2


def test_bad_spec_names_path(tmp_path, capsys):
    p = write_cfg(tmp_path, {"seed": 1, "a": {"variant": "nope"}, "b": {"variant": "nope"}, "degrees": [1]})
    assert main(["asymptotics", str(p), "--out", str(tmp_path / "o")]) == 2
    assert "a" in capsys.readouterr().err


def test_submultiplicativity_violation_exit_3(tmp_path, capsys):
    bad = {"variant": "monomial_weights", "n": 1, "rule": "table",
           "table": {"1": ["1", "1"], "2": ["0", "0", "0"]}}
    p = write_cfg(tmp_path, {"seed": 1, "a": bad, "b": {"variant": "monomial_weights", "n": 1, "rule": "zero"},
                             "degrees": [1, 2], "audit_degree": 2})
    assert main(["asymptotics", str(p), "--out", str(tmp_path / "o")]) == 3
    err = capsys.readouterr().err
    witness = json.loads(err.strip().splitlines()[-1])["witness"]
    assert witness["w_sum"] == "0/1" and witness["w_alpha"] == "1/1"


def test_spectrum_mismatch_exit_3(tmp_path):
    pair = {"a": {"dim": 1, "weights": ["1"]}, "b": {"dim": 1, "weights": ["0"]}, "expected": ["5"]}
    p = write_cfg(tmp_path, {"seed": 1, "pairs": [pair]})
    assert main(["spectrum", str(p), "--out", str(tmp_path / "o")]) == 3


def test_explicit_pairs(tmp_path):
    pair = {"a": {"dim": 2, "weights": ["1", "1/2"]}, "b": {"dim": 2, "weights": ["0", "0"]},
            "expected": ["1", "1/2"]}
    p = write_cfg(tmp_path, {"seed": 1, "pairs": [pair]})
    assert main(["spectrum", str(p), "--out", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "spectrum.csv").read_text().splitlines()[1] == "0,2,1/1;1/2,3/4,3/4,1/1,True"


def test_jsonl_format(tmp_path):
    assert main(["asymptotics", str(CONFIGS / "asymptotics.json"), "--format", "jsonl", "--out", str(tmp_path)]) == 0
    recs = [json.loads(line) for line in (tmp_path / "asymptotics.jsonl").read_text().splitlines()]
    assert [r["m"] for r in recs] == [8, 16, 32, 64]
    assert all(isinstance(r["vol_over_m"], str) for r in recs)


def test_set_override_degrees(tmp_path):
    assert main(["theorem-b", str(CONFIGS / "theorem_b.json"), "--set", "degrees=[2,3]", "--out", str(tmp_path)]) == 0
    assert len((tmp_path / "theorem-b.csv").read_text().splitlines()) == 3
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["config"]["degrees"] == [2, 3]


def test_bad_override_exit_2(tmp_path):
    assert main(["theorem-b", str(CONFIGS / "theorem_b.json"), "--set", "degrees", "--out", str(tmp_path)]) == 2


def test_console_script(tmp_path):
    exe = shutil.which("nagraded")
    cmd = [exe] if exe else [sys.executable, "-m", "nagraded.cli"]
    r = subprocess.run(cmd + ["vol", str(CONFIGS / "vol.json"), "--out", str(tmp_path)],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert (tmp_path / "vol.csv").exists()


def test_pairs_with_shorthand_basis(tmp_path):
    # basis (e1, u^2 e1 + e2) with weights (0, 1) against the standard lattice norm
    a = {"dim": 2, "weights": ["0", "1"], "basis": [["1", "u^2"], ["0", "1"]]}
    b = {"dim": 2, "weights": ["0", "0"]}
    p = write_cfg(tmp_path, {"seed": 1, "pairs": [{"a": a, "b": b, "expected": ["1", "0"]}]})
    assert main(["vol", str(p), "--out", str(tmp_path / "o")]) == 0
    assert main(["spectrum", str(p), "--out", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "vol.csv").read_text().splitlines()[1] == "0,2,1/2,1/2"
