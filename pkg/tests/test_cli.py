"""Command-line interface: exit codes, JSON output, and determinism."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from pointfree.cli import main

ROOT = Path(__file__).resolve().parents[1]
THY = ROOT / "theories"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out), err


# --- frame ---------------------------------------------------------------------

def test_frame_elements(capsys):
    code, payload, _ = run_json(capsys, "frame", "elements",
                                THY / "cantor1.pres")
    assert code == 0
    assert payload["count"] == 4
    assert len(payload["hasse_edges"]) == 4  # the Boolean diamond


def test_frame_elements_from_theory_file(capsys):
    code, payload, _ = run_json(capsys, "frame", "elements",
                                THY / "cantor.thy", "--truncate", "N=1")
    assert code == 0 and payload["count"] == 4


def test_frame_leq(capsys):
    code, payload, _ = run_json(capsys, "frame", "leq", THY / "cantor1.pres",
                                "z0", "z0 | u0")
    assert code == 0 and payload["leq"] is True
    code, payload, _ = run_json(capsys, "frame", "leq", THY / "cantor1.pres",
                                "top", "z0")
    assert code == 0 and payload["leq"] is False


def test_frame_points(capsys):
    code, payload, _ = run_json(capsys, "frame", "points", THY / "cantor.thy",
                                "--truncate", "N=2")
    assert code == 0 and payload["count"] == 4
    assert ["u0", "u1"] in payload["points"]


def test_frame_hausdorff(capsys):
    code, payload, _ = run_json(capsys, "frame", "hausdorff",
                                THY / "cantor1.pres")
    assert code == 0 and payload["hausdorff"] is True
    code, payload, _ = run_json(capsys, "frame", "hausdorff",
                                THY / "sierpinski.thy")
    assert code == 0 and payload["hausdorff"] is False


def test_frame_overt(capsys):
    code, payload, _ = run_json(capsys, "frame", "overt", THY / "cantor1.pres",
                                "--positive", "top,z0,u0")
    assert code == 0 and payload["certificate_accepted"] is True
    code, payload, _ = run_json(capsys, "frame", "overt", THY / "cantor1.pres",
                                "--positive", "top")
    assert code == 0 and payload["certificate_accepted"] is False


def test_frame_compact(capsys):
    code, payload, _ = run_json(capsys, "frame", "compact",
                                THY / "cantor1.pres")
    assert code == 0 and payload["compact"] is True and payload["verified"]


# --- theory --------------------------------------------------------------------

def test_theory_parse(capsys):
    code, payload, _ = run_json(capsys, "theory", "parse", THY / "surj.thy")
    assert code == 0
    assert any("some" in ax for ax in payload["axioms"])


def test_theory_compile(capsys):
    code, payload, _ = run_json(capsys, "theory", "compile",
                                THY / "cantor.thy", "--truncate", "N=2")
    assert code == 0
    assert sorted(payload["generators"]) == ["u0", "u1", "z0", "z1"]


def test_theory_models_surjection(capsys):
    code, payload, _ = run_json(capsys, "theory", "models", THY / "surj.thy",
                                "--truncate", "n=1,X=2")
    assert code == 0
    assert payload["count"] == 0
    assert payload["frame_nontrivial"] is False
    code, payload, _ = run_json(capsys, "theory", "models", THY / "surj.thy",
                                "--truncate", "n=2,X=2")
    assert code == 0 and payload["count"] == 2


# --- stone ---------------------------------------------------------------------

def test_stone_spectrum(capsys):
    code, payload, _ = run_json(capsys, "stone", "spectrum",
                                THY / "chain3.lat")
    assert code == 0 and payload["count"] == 2
    code, payload, _ = run_json(capsys, "stone", "spectrum", THY / "bool4.lat")
    assert code == 0 and payload["count"] == 2


def test_stone_birkhoff(capsys):
    code, payload, _ = run_json(capsys, "stone", "birkhoff",
                                THY / "chain3.lat")
    assert code == 0
    assert payload["downsets"] == 3 and payload["isomorphism_verified"]


def test_stone_rejects_nondistributive(capsys):
    code, _, err = run(capsys, "stone", "birkhoff", THY / "m3.lat")
    assert code == 1 and "error:" in err


# --- evt -----------------------------------------------------------------------

def test_evt_max(capsys):
    code, payload, _ = run_json(capsys, "evt", "max", "--expr", "x*(1-x)",
                                "--domain", "[0,1]", "--eps", "1/10000")
    assert code == 0
    from fractions import Fraction as F
    assert F(payload["lower"]) <= F(1, 4) <= F(payload["upper"])
    assert F(payload["upper"]) - F(payload["lower"]) <= F(1, 10000)
    assert payload["cover"]


def test_evt_max_decimal_and_trace(capsys):
    code, payload, _ = run_json(capsys, "evt", "max", "--expr", "x*(1-x)",
                                "--domain", "[0,1]", "--eps", "1/100",
                                "--decimal", "4", "--trace")
    assert code == 0
    assert payload["approx_decimal"]["digits"] == 4
    assert payload["trace"]


def test_evt_locate(capsys):
    code, payload, _ = run_json(capsys, "evt", "locate", "--expr", "x*(1-x)",
                                "--domain", "[0,1]", "--p", "1/5",
                                "--q", "1/3")
    assert code == 0 and payload["branch"] == "left"
    code, payload, _ = run_json(capsys, "evt", "locate", "--expr", "x*(1-x)",
                                "--domain", "[0,1]", "--p", "26/100",
                                "--q", "2/5")
    assert code == 0 and payload["branch"] == "right"


def test_evt_validate(capsys):
    code, payload, _ = run_json(capsys, "evt", "validate", "--expr",
                                "min(x, 1-x)", "--domain", "[0,1]",
                                "--eps", "1/100", "--probes", "10")
    assert code == 0 and payload["ok"] and payload["failures"] == []


def test_evt_budget_exhaustion_exit_code(capsys):
    code, payload, _ = run_json(capsys, "evt", "max", "--expr", "x*(1-x)",
                                "--domain", "[0,1]", "--eps", "1/1000000",
                                "--budget", "10")
    assert code == 3
    assert payload["budget_exhausted"] is True
    assert "lower" in payload and "upper" in payload  # partial enclosure


# --- exit codes and error handling ----------------------------------------------

def test_exit_code_parse_errors(capsys, tmp_path):
    bad = tmp_path / "bad.thy"
    bad.write_text("prop a;\naxiom ~a |- false;\n")
    code, _, err = run(capsys, "theory", "parse", bad)
    assert code == 1 and "geometric fragment" in err
    code, _, err = run(capsys, "frame", "elements", tmp_path / "missing.pres")
    assert code == 1
    code, _, err = run(capsys, "evt", "max", "--expr", "sin(x)",
                       "--domain", "[0,1]")
    assert code == 1
    code, _, err = run(capsys, "evt", "locate", "--expr", "x",
                       "--domain", "[0,1]")
    assert code == 1  # missing --p/--q


def test_exit_code_cap_exceeded(capsys, tmp_path):
    big = tmp_path / "big.pres"
    big.write_text("gen " + " ".join(f"g{i}" for i in range(9)) + "\n")
    code, _, err = run(capsys, "frame", "elements", big)
    assert code == 2 and "error:" in err


def test_config_env_overrides_caps(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"generator_cap": 4}))
    monkeypatch.setenv("POINTFREE_CONFIG", str(cfg))
    code, _, err = run(capsys, "frame", "elements", THY / "cantor.thy",
                       "--truncate", "N=3")
    assert code == 2


def test_text_output_mentions_same_numbers(capsys):
    code, payload, _ = run_json(capsys, "evt", "max", "--expr", "x*(1-x)",
                                "--domain", "[0,1]", "--eps", "1/100")
    code2, text, _ = run(capsys, "evt", "max", "--expr", "x*(1-x)",
                         "--domain", "[0,1]", "--eps", "1/100")
    assert code == code2 == 0
    assert f"lower: {payload['lower']}" in text
    assert f"upper: {payload['upper']}" in text


# --- determinism -----------------------------------------------------------------

DETERMINISM_CMDS = [
    ["frame", "points", str(THY / "cantor.thy"), "--truncate", "N=2"],
    ["frame", "hausdorff", str(THY / "cantor1.pres")],
    ["theory", "models", str(THY / "surj.thy"), "--truncate", "n=2,X=2"],
    ["stone", "spectrum", str(THY / "bool4.lat")],
    ["evt", "max", "--expr", "max(abs(x), 1 - x^2)", "--domain", "[-1,2]",
     "--eps", "1/1000", "--trace"],
    ["evt", "validate", "--expr", "x*(1-x)", "--domain", "[0,1]",
     "--eps", "1/100", "--probes", "5"],
]


@pytest.mark.parametrize("cmd", DETERMINISM_CMDS,
                         ids=[" ".join(c[:2]) for c in DETERMINISM_CMDS])
def test_byte_identical_json_across_processes(cmd):
    def once():
        return subprocess.run(
            [sys.executable, "-m", "pointfree.cli"] + cmd + ["--json"],
            capture_output=True, cwd=ROOT)
    a, b = once(), once()
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout
    json.loads(a.stdout)  # well-formed
