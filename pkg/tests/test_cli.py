import json
import subprocess
import sys
from pathlib import Path

import pytest

from ellarr.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
SPEC_FILES = sorted(p.name for p in FIXTURES.glob("*.json"))
SPEC_COMMANDS = ["faces", "model", "homology", "pi1", "check"]


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("command", SPEC_COMMANDS)
def test_commands_on_a2(command, capsys):
    code, out, _ = run([command, str(FIXTURES / "a2.json")], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["schema"] == 1 and report["command"] == command
    assert all(c["passed"] for c in report["certifications"])


def test_reported_values(capsys):
    _, out, _ = run(["homology", str(FIXTURES / "pts2.json")], capsys)
    assert json.loads(out)["homology"]["betti"] == [1, 3, 0]
    _, out, _ = run(["pi1", str(FIXTURES / "a1.json")], capsys)
    doc = json.loads(out)
    assert doc["simplified"] == {"generators": 2, "relators": 0, "text": "gens: g1 g2\n"}
    _, out, _ = run(["check", str(FIXTURES / "det5.json")], capsys)
    assert json.loads(out)["homology"]["torsion"][1] == [5]


def test_an_command(capsys):
    code, out, _ = run(["an", "2"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["counts"] == [1, 3, 2]
    assert doc["presentation"]["generators"] == 9
    assert {c["name"] for c in doc["certifications"]} >= {"geometric isomorphism",
                                                          "relators equal general"}


@pytest.mark.parametrize("name", SPEC_FILES)
@pytest.mark.parametrize("command", SPEC_COMMANDS)
def test_byte_identical_runs(name, command, tmp_path):
    outs = []
    for k, extra in enumerate((["--no-cache"], ["--cache-dir", str(tmp_path / "c")],
                               ["--cache-dir", str(tmp_path / "c")])):
        target = tmp_path / f"run{k}.json"
        assert main([command, str(FIXTURES / name), "--out", str(target)] + extra) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_an_byte_identical(tmp_path):
    for n in ("1", "2", "3"):
        a, b = tmp_path / f"a{n}.json", tmp_path / f"b{n}.json"
        assert main(["an", n, "--out", str(a)]) == 0
        assert main(["an", n, "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


def test_side_outputs(tmp_path):
    out = tmp_path / "pi.json"
    assert main(["pi1", str(FIXTURES / "pts2.json"), "--out", str(out)]) == 0
    assert (tmp_path / "pi.raw.txt").read_text().startswith("gens: g1 g2 g3 g4 g5\n")
    assert (tmp_path / "pi.simplified.txt").read_text() == "gens: g1 g2 g3\n"
    dump = tmp_path / "bd.txt"
    assert main(["homology", str(FIXTURES / "a1.json"), "--dump", str(dump), "--no-cache"]) == 0
    assert dump.read_text().startswith("boundary 1 ")


def test_truncated_homology(capsys):
    code, out, _ = run(["homology", str(FIXTURES / "a2.json"), "--max-dim", "2"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["complete"] is False
    assert doc["homology"]["betti"] == [1, 4]


def test_input_errors(tmp_path, capsys):
    code, _, err = run(["faces", str(tmp_path / "missing.json")], capsys)
    assert code == 2 and "missing.json" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"d": 1,\n "columns": [[1],\n')
    code, _, err = run(["model", str(bad)], capsys)
    assert code == 2 and "bad.json" in err and "line" in err
    flat = tmp_path / "flat.json"
    flat.write_text('{"d": 2, "columns": [[1, 0]], "offsets": ["0"]}')
    code, _, err = run(["faces", str(flat)], capsys)
    assert code == 2 and "essential" in err
    code, _, err = run(["pi1", str(FIXTURES / "a2.json"), "--no-certify"], capsys)
    assert code == 2 and "--no-certify" in err
    code, _, err = run(["an", "x"], capsys)
    assert code == 2
    code, _, err = run(["faces", str(FIXTURES / "a2.json"), "--margin-cap", "0"], capsys)
    assert code == 2


def test_margin_cap_is_reported(capsys):
    code, _, err = run(["faces", str(FIXTURES / "det5.json"), "--margin-cap", "2"], capsys)
    assert code == 2 and "margin cap" in err


def test_corrupt_cache_is_rebuilt(tmp_path, capsys):
    cache = tmp_path / "cache"
    assert main(["faces", str(FIXTURES / "a2.json"), "--cache-dir", str(cache)]) == 0
    first = capsys.readouterr().out
    for p in cache.iterdir():
        p.write_bytes(b"garbage")
    assert main(["faces", str(FIXTURES / "a2.json"), "--cache-dir", str(cache)]) == 0
    assert capsys.readouterr().out == first


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ellarr.cli", "an", "1", "--no-certify"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["objects"] == ["01|", "0|1|"]
