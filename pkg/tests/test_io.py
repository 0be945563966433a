import json
import random

import pytest

from liemod.errors import LiemodError
from liemod.io import SCHEMA, DocumentError, Workspace, emit, fixture_path, load, loads
from liemod.liealg import Metric, abelian, heisenberg3, sl2
from liemod.linalg import Mat
from liemod.randgen import random_metric, random_module

from conftest import ALGEBRAS

FIXTURES = ["sl2", "heisenberg3", "abelian3"]


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_round_trip_is_byte_exact(name):
    text = fixture_path(name).read_text()
    ws = loads(text)
    assert emit(ws) == text
    assert loads(emit(ws)) == ws
    assert all(B.is_flat() for B in ws.modules.values())


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_random_workspace_round_trip(name):
    g = ALGEBRAS[name]()
    g.name = name
    rng = random.Random(7)
    modules = {f"m{i}": random_module(rng, g, 6, (-1, 0, 1)) for i in range(3)}
    metrics = {"m0": random_metric(rng, modules["m0"].generators)}
    ws = Workspace(g, modules, metrics, {"d": [{("e" if name == "sl2" else g.names[0], g.names[1]): {g.names[2]: 1}}]})
    text = emit(ws)
    back = loads(text)
    assert back == ws
    assert emit(back) == text


def minimal(**over):
    doc = {
        "schema": SCHEMA,
        "liealgebra": {"name": "a2", "generators": ["x", "y"], "brackets": {}},
        "modules": {},
    }
    doc.update(over)
    return doc


def test_monomial_order_sign():
    gens = [{"name": "v", "degree": 0}, {"name": "w", "degree": -1}]
    a = loads(json.dumps(minimal(modules={"m": {"generators": gens, "Q": {"x^y": [["0", "0"], ["1", "0"]]}}})))
    b = loads(json.dumps(minimal(modules={"m": {"generators": gens, "Q": {"y^x": [["0", "0"], ["-1", "0"]]}}})))
    assert a == b


def test_declaration_order_is_respected_within_degree():
    doc = minimal(modules={"m": {"generators": [{"name": "q", "degree": 0}, {"name": "p", "degree": 0}],
                                 "Q": {"x": [["1", "0"], ["0", "2"]]}}})
    B = loads(json.dumps(doc)).modules["m"]
    assert B.generators.names == ("q", "p")
    assert B.operator.component((0,)) == Mat.diag([1, 2])


def test_json_syntax_error_has_location():
    text = '{\n  "schema": "liemod.workspace/1",\n  "liealgebra": {,\n}'
    with pytest.raises(DocumentError, match=r"line 3, column 18"):
        loads(text)


@pytest.mark.parametrize(
    "doc, where",
    [
        (minimal(schema="other/1"), "schema"),
        ({"schema": SCHEMA}, "document: missing field 'liealgebra'"),
        (minimal(liealgebra={"generators": ["x", "x"]}), "liealgebra"),
        (minimal(liealgebra={"generators": ["x", "y"], "brackets": {"x,z": {"x": "1"}}}), "liealgebra.brackets.x,z"),
        (minimal(liealgebra={"generators": ["x", "y"], "brackets": {"x,y": {"x": 0.5}}}), "liealgebra.brackets.x,y.x"),
        (minimal(modules={"m": {"generators": [{"name": "v", "degree": 0}], "Q": {"x": [["1", "2"]]}}}), "modules.m.Q.x"),
        (minimal(modules={"m": {"generators": [{"name": "v"}]}}), "modules.m.generators[0]"),
        (minimal(modules={"m": {"generators": [{"name": "v", "degree": 0}], "Q": {"z": [["1"]]}}}), "modules.m.Q"),
        (minimal(modules={"m": {"generators": [{"name": "v", "degree": 0}, {"name": "w", "degree": 0}], "Q": {"": [["0", "1"], ["0", "0"]]}}}), "modules.m"),
        (minimal(metrics={"m": {"0": [["1"]]}}), "metrics.m"),
        (minimal(modules={"m": {"generators": [{"name": "v", "degree": 0}]}}, metrics={"m": {"0": [["-1"]]}}), "metrics.m"),
        (minimal(tasks=[{"module": "m"}]), "tasks"),
        (minimal(deformations={"d": {"x,y": {}}}), "deformations.d"),
    ],
)
def test_schema_errors_name_the_location(doc, where):
    with pytest.raises(DocumentError) as info:
        loads(json.dumps(doc))
    assert str(info.value).startswith(where)
    assert isinstance(info.value, LiemodError)


def test_load_reads_files(tmp_path):
    p = tmp_path / "w.json"
    p.write_text(fixture_path("sl2").read_text())
    assert load(p) == loads(fixture_path("sl2").read_text())
    assert load(p).algebra == sl2()
    assert loads(fixture_path("heisenberg3").read_text()).algebra == heisenberg3()
    assert loads(fixture_path("abelian3").read_text()).algebra == abelian(3)
