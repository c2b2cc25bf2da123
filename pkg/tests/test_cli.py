import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from pclif import cli, corpus_path, encoding as en, lambda_pc as lp, oracle, syntax

GOLDEN = Path(__file__).parent / "golden"
REPX_CIRCUIT = "X@0; X@1; X@2; CNOT@0,3; CNOT@1,3; CNOT@1,4; CNOT@2,4"


def call(*argv):
    out = io.StringIO()
    code = cli.main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def c(name):
    return corpus_path(name)


def test_run_worked_examples():
    assert call("run", c("hadamard.pc"), "hadamard Y") == (0, "<1> Y\n")
    assert call("run", c("cnot.pc"), "cnot_2 (X ** Y)") == (0, "Y ** Z\n")
    assert call("run", c("library.pc")) == (0, "Y ** Z\n")


def test_invert():
    assert call("invert", c("s2.pc"), "S_2", "X") == (0, "<1> Y\n")


def test_check_ok_and_golden():
    code, out = call("check", c("library.pc"))
    assert code == 0
    assert out == (GOLDEN / "library_check.txt").read_text()


def test_check_ill_typed(capsys):
    code, out = call("check", c("ill_typed.pc"))
    assert code == 1
    assert "ill_typed: FAIL" in out and "omega = 0, required 1 at basis Z, X" in out


def test_frame_golden():
    assert call("frame", c("repx.pc"), "repX") == (0, (GOLDEN / "repx_frame.txt").read_text())
    assert call("frame", c("cnot.pc"), "cnot_2") == (0, (GOLDEN / "cnot_frame.txt").read_text())
    code, out = call("frame", c("repx.pc"), "repX", "--json")
    assert code == 0 and json.loads(out) == json.loads((GOLDEN / "repx_frame.json").read_text())


def test_golden_frame_is_the_circuit():
    # the committed fixture itself agrees with the dense unitary
    data = json.loads((GOLDEN / "repx_frame.json").read_text())
    prog = syntax.load(c("repx.pc"))
    frame = en.Frame.from_json(prog.ring, data["frame"])
    u = oracle.build_circuit(prog.ring, oracle.parse_circuit(REPX_CIRCUIT), 5)
    assert oracle.verify_encoding(en.from_frame(frame), u) == []


def test_verify():
    assert call("verify", c("cnot.pc"), "cnot_2", "CNOT")[0] == 0
    assert call("verify", c("cnot.pc"), "cnot_2", "CZ")[0] == 3
    assert call("verify", c("repx.pc"), "repX", "--circuit", REPX_CIRCUIT)[0] == 0
    code, out = call("verify", c("hadamard.pc"), "hadamard", "--json")
    report = json.loads(out)
    assert code == 0 and report["ok"] and set(report["checks"]) == {"symplectic", "star-automorphism", "frame"}
    assert call("verify", c("hadamard.pc"), "hadamard", "CNOT")[0] == 3


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.pc"
    bad.write_text("dim 2;\nx = |^ X")
    assert call("check", bad)[0] == 2
    assert "parse error" in capsys.readouterr().err
    assert call("run", c("hadamard.pc"), "hadamard (X ** X)")[0] == 1
    assert call("frame", c("ill_typed.pc"), "ill_typed")[0] == 1
    assert call("run", tmp_path / "missing.pc", "X")[0] == 2
    assert call("run", c("hadamard.pc"), "nope X")[0] == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "pclif", "run", str(c("hadamard.pc")), "hadamard Y"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout == "<1> Y\n"
