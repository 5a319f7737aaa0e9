import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from nabla.cli import main

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse(capsys):
    code, out, _ = run(capsys, "parse", "--functor", "P", "nab {T}")
    assert code == 0
    assert out.splitlines() == ["nab {T}", "depth: 1", "subformulas: 2"]


def test_parse_tree(capsys):
    code, out, _ = run(capsys, "parse", "--functor", "Const(c)*Id*Id", "nab ('c,T,F)")
    assert code == 0 and "depth: 1" in out and "subformulas: 3" in out


def test_parse_type_error(capsys):
    code, out, err = run(capsys, "parse", "--functor", "P", "nab ('c,T)")
    assert code == 2 and out == "" and err.startswith("error:") and "position" in err


def test_check(capsys):
    frame = str(DATA / "frame.coalg")
    assert run(capsys, "check", frame, "s2", "nab {}")[:2] == (0, "true\n")
    assert run(capsys, "check", frame, "s2", "nab {T}")[:2] == (0, "false\n")
    assert run(capsys, "check", frame, "s1", "T")[:2] == (0, "true\n")
    assert run(capsys, "check", frame, "s9", "T")[0] == 2
    assert run(capsys, "check", str(DATA / "missing.coalg"), "s1", "T")[0] == 2
    props = str(DATA / "kripke_props.coalg")
    assert run(capsys, "check", props, "w0", "dia p")[1] == "true\n"
    assert run(capsys, "check", props, "w0", "box p")[1] == "false\n"
    assert run(capsys, "check", str(DATA / "stream.coalg"), "x", "nab ('c, T)")[1] == "true\n"


def test_valid(capsys):
    code, out, _ = run(capsys, "valid", "--functor", "P", "nab {T} <= \\/{nab {T}, nab {}}")
    assert (code, out) == (0, "VALID\n")
    code, out, _ = run(capsys, "valid", "--functor", "P", "--props", "p,q",
                       "/\\{box p, box q} <= box /\\{p, q}")
    assert (code, out) == (0, "VALID\n")


def test_invalid_prints_countermodel(capsys):
    code, out, _ = run(capsys, "valid", "--functor", "P", "--props", "p", "dia p <= box p")
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == "INVALID"
    assert lines[-1] == "witness: z0"
    # the dump after the verdict loads as a coalgebra
    from nabla import load_coalgebra, model_check, parse_formula
    M = load_coalgebra("\n".join(lines[1:]))
    assert model_check(M, "z0", parse_formula("dia p", M.functor, M.props))
    assert not model_check(M, "z0", parse_formula("box p", M.functor, M.props))


def test_valid_errors(capsys):
    assert run(capsys, "valid", "--functor", "Bag", "nab bag{T:1} <= T")[0] == 2
    assert run(capsys, "valid", "--functor", "P", "nab {T} <=")[0] == 2
    assert run(capsys, "valid", "nab {T} <= T")[0] == 2
    code, _, err = run(capsys, "valid", "--functor", "P", "--max-enum", "3",
                       "nab {nab {nab {T}}} <= T")
    assert code == 2 and "cap" in err


def test_srd_members_nnf_finalseq(capsys):
    assert run(capsys, "srd", "--functor", "P", "{{a},{b}}")[:2] == (0, "{{a,b}}\n")
    assert run(capsys, "srd", "--functor", "P", "{}")[1] == "{}\n{{}}\n"
    assert run(capsys, "members", "--functor", "P", "{{a},{a,b}}")[1] == "{a}\n{a,b}\n"
    assert run(capsys, "members", "--functor", "P", "{a}")[0] == 2
    out = run(capsys, "nnf", "--functor", "P", "nab {p}")[1]
    assert out.splitlines() == ["nab {}", "nab {/\\{~p}}", "nab {T,/\\{~p}}"]
    assert run(capsys, "nnf", "--functor", "P", "T")[0] == 2
    assert run(capsys, "finalseq", "--functor", "P", "3")[1].splitlines() == [
        "level 0: 1", "level 1: 2", "level 2: 4", "level 3: 16"]
    assert run(capsys, "srd", "--functor", "Dist", "{dist{a:1}}")[0] == 2


def test_lift(capsys):
    rel = str(DATA / "spread.rel")
    code, out, _ = run(capsys, "lift", "--functor", "Bag", rel, "bag{x:2}", "bag{y:1,z:1}")
    assert code == 0 and out.splitlines() == ["true", "rho x y 1", "rho x z 1"]
    assert run(capsys, "lift", "--functor", "P", rel, "{x}", "{y}")[1] == "true\n"
    assert run(capsys, "lift", "--functor", "Bag", rel, "bag{x:1}", "bag{y:2}")[1] == "false\n"
    assert run(capsys, "lift", "--functor", "P", rel, "{q}", "{y}")[0] == 2


def test_checkproof(capsys):
    assert run(capsys, "checkproof", str(DATA / "nab1.proof"))[:2] == (0, "OK\n")
    code, out, _ = run(capsys, "checkproof", str(DATA / "nab2_missing.proof"))
    assert code == 1 and out.startswith("FAIL missing-premise at node <root>")
    code, out, _ = run(capsys, "checkproof", "--output", "json", str(DATA / "nab2_missing.proof"))
    payload = json.loads(out)
    assert payload["ok"] is False and payload["path"] == [] and payload["reason"] == "missing-premise"


def test_json_output(capsys):
    code, out, _ = run(capsys, "finalseq", "--functor", "P", "--output", "json", "2")
    assert json.loads(out) == {"sizes": [1, 2, 4]}
    code, out, _ = run(capsys, "valid", "--functor", "P", "--output", "json", "T <= nab {}")
    payload = json.loads(out)
    assert code == 1 and payload["valid"] is False and payload["witness"] == "z0"


def test_env_cap(capsys, monkeypatch):
    monkeypatch.setenv("NABLA_MAX_ENUM", "10")
    assert run(capsys, "finalseq", "--functor", "P", "3")[0] == 2
    monkeypatch.delenv("NABLA_MAX_ENUM")
    assert run(capsys, "finalseq", "--functor", "P", "3")[0] == 0


def test_bad_cap(capsys):
    assert run(capsys, "finalseq", "--functor", "P", "--max-enum", "0", "1")[0] == 2


@pytest.mark.parametrize("argv", [
    ["valid", "--functor", "P", "--props", "p", "dia p <= box p"],
    ["srd", "--functor", "Const(c)*Id*Id", "{('c,y,z)}"],
    ["nnf", "--functor", "P.P", "nab {{p},{}}"],
])
def test_deterministic_subprocess(argv):
    env = dict(os.environ)
    env.pop("NABLA_MAX_ENUM", None)
    outs = [subprocess.run([sys.executable, "-m", "nabla", *argv], capture_output=True, env=env)
            for _ in range(2)]
    assert outs[0].stdout == outs[1].stdout and outs[0].stdout
    assert outs[0].returncode == outs[1].returncode
