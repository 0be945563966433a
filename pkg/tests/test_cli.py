import json
import os
import random
import re
import subprocess
import sys
from pathlib import Path

import pytest

from liemod.cli import main
from liemod.io import emit, fixture_path, loads
from liemod.randgen import random_gauge
from liemod.repmod import AModule, gauge_conjugate

HERE = Path(__file__).parent
GOLDEN = HERE / "golden"
DATA = HERE / "data"
REGEN = bool(os.environ.get("LIEMOD_REGEN_GOLDEN"))

# argv of every report kept as a golden file
CASES = [
    ["run", "--input", "sl2"],
    ["run", "--input", "heisenberg3"],
    ["run", "--input", "abelian3"],
    ["run", "--input", "sl2", "--format", "markdown"],
    ["check", "sl2"],
    ["cohomology", "trivial@sl2"],
    ["cohomology", "ad@heisenberg3"],
    ["cohomology", "adjoint@abelian3", "--format", "markdown"],
    ["decompose", "twisted@sl2", "--seed", "1", "--seed", "2", "--seed", "3"],
    ["decompose", "cone@heisenberg3", "--seed", "4"],
    ["ops", "--input", "sl2", "--tensor", "standard", "cone", "--dual", "twisted"],
    ["ops", "--input", "abelian3", "--sum", "diagonal", "twisted"],
    ["deform", "--input", "abelian3"],
    ["deform", "--input", "sl2", "-d", "coboundary"],
    ["derived-bracket", "--input", "heisenberg3"],
    ["charclass", "twisted@heisenberg3", "--metric", "random:4", "-k", "1..2"],
    ["charclass", "diagonal@abelian3", "--metric", "doc", "-k", "1"],
]


def golden_name(argv):
    return re.sub(r"[^A-Za-z0-9@.]+", "_", "_".join(argv)).strip("_") + (
        ".md" if "markdown" in argv else ".json"
    )


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv", CASES, ids=[" ".join(a) for a in CASES])
def test_golden_reports(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 0, err
    path = GOLDEN / golden_name(argv)
    if REGEN or not path.exists():
        if not REGEN:
            pytest.fail(f"missing golden file {path.name}; rerun with LIEMOD_REGEN_GOLDEN=1")
        path.write_text(out)
    assert out == path.read_text()
    again = run(argv, capsys)[1]
    assert again == out


def test_markdown_and_json_agree(capsys):
    _, js, _ = run(["cohomology", "trivial@sl2"], capsys)
    _, md, _ = run(["cohomology", "trivial@sl2", "--format", "markdown"], capsys)
    rep = json.loads(js)
    assert rep["betti"] == [1, 0, 0, 1]
    assert "- betti: [1, 0, 0, 1]" in md


@pytest.mark.parametrize("name", ["sl2", "heisenberg3", "abelian3"])
def test_fixture_schema_round_trip(name):
    text = fixture_path(name).read_text()
    assert emit(loads(text)) == text


def test_ops_output_is_a_workspace(tmp_path, capsys):
    out = tmp_path / "ops.json"
    code = main(["ops", "--input", "heisenberg3", "--tensor", "character", "cone", "--output", str(out)])
    assert code == 0
    ws = loads(out.read_text())
    assert emit(ws) == out.read_text()
    assert all(B.is_flat() for B in ws.modules.values())
    code, rep, _ = run(["cohomology", "--input", str(out), "-m", "character*cone"], capsys)
    assert code == 0 and set(json.loads(rep)["betti"]) == {0}


def test_charclass_pair_mode(tmp_path, capsys):
    ws = loads(fixture_path("sl2").read_text())
    B = ws.modules["twisted"]
    u = random_gauge(random.Random(9), ws.algebra, B.generators)
    ws.modules = {"twisted": B, "moved": AModule.from_superconnection(gauge_conjugate(B.to_superconnection(), u))}
    ws.metrics, ws.tasks = {}, []
    path = tmp_path / "pair.json"
    path.write_text(emit(ws))
    code, out, err = run(["charclass", "--input", str(path), "twisted", "moved", "-k", "1..3"], capsys)
    rep = json.loads(out)
    assert code == 0, err
    assert rep["flat"] is True
    assert all(e["agree"] and e["stokes"] for e in rep["pair"].values())


def test_broken_jacobi_exits_one(capsys):
    code, out, _ = run(["check", "--input", str(DATA / "broken_jacobi.json")], capsys)
    rep = json.loads(out)
    assert code == 1
    assert rep["jacobi"]["triple"] == ["x1", "x2", "x3"]
    assert rep["jacobi"]["d_squared_witness"] == "x1"


def test_non_flat_module_exits_one(capsys):
    code, out, _ = run(["check", "--input", str(DATA / "nonflat.json")], capsys)
    rep = json.loads(out)
    assert code == 1
    assert rep["modules"]["wrong"]["q_squared"] == {"ok": False, "witness": "a"}


def test_contract_errors_exit_two(capsys):
    code, _, err = run(["charclass", "wrong", "--input", str(DATA / "nonflat.json")], capsys)
    assert code == 2 and "not flat" in err
    code, _, err = run(["cohomology", "nosuch@sl2"], capsys)
    assert code == 2 and "no module" in err
    code, _, err = run(["charclass", "twisted@sl2", "-k", "0"], capsys)
    assert code == 2


def test_parse_error_reports_line_and_column(capsys):
    code, _, err = run(["check", "--input", str(DATA / "malformed.json")], capsys)
    assert code == 2
    assert "line 4, column 24" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "liemod", "cohomology", "trivial@abelian3"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["betti"] == [1, 3, 3, 1]
