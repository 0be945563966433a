"""Workspace documents: JSON encoding of algebras, modules, metrics and deformations.

Layout (schema ``liemod.workspace/1``)::

    {
      "schema": "liemod.workspace/1",
      "liealgebra": {"name": "sl2", "generators": ["e", "f", "h"],
                     "brackets": {"e,f": {"h": "1"}, "h,e": {"e": "2"}}},
      "modules": {"std": {"generators": [{"name": "a", "degree": 0}, ...],
                          "Q": {"e": [["0", "1"], ["0", "0"]], "": ...}}},
      "metrics": {"std": {"0": [["1", "0"], ["0", "1"]]}},
      "deformations": {"name": [{"x,y": {"z": "1"}}, ...]},
      "tasks": [{"verb": "cohomology", "module": "std"}]
    }

``Q`` maps a form monomial (generator names joined by ``^``, ``""`` for the
constant part) to the full matrix of that component, rows and columns in the
order the generators are listed.  Numbers are strings ``"p/q"``.  Emission
is canonical (generators sorted by degree, sorted keys), so an emitted
document re-parses to an equal value and re-emits byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import LiemodError
from .graded import GradedVectorSpace
from .liealg import LieAlgebra, Metric, Monomial
from .linalg import Mat, format_fraction, to_fraction
from .repmod import AModule, OpForm

SCHEMA = "liemod.workspace/1"


class DocumentError(LiemodError, ValueError):
    """Malformed document; the message names the offending location."""


@dataclass
class Workspace:
    algebra: LieAlgebra
    modules: dict[str, AModule] = field(default_factory=dict)
    metrics: dict[str, Metric] = field(default_factory=dict)
    deformations: dict[str, list[dict]] = field(default_factory=dict)
    tasks: list[dict] = field(default_factory=list)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Workspace):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self.algebra.name == other.algebra.name
            and self.modules == other.modules
            and self.metrics == other.metrics
            and _canon_defs(self.deformations) == _canon_defs(other.deformations)
            and self.tasks == other.tasks
        )


def _canon_defs(defs):
    return {k: [_bracket_json(t) for t in v] for k, v in defs.items()}


# -- emission -------------------------------------------------------------------


def _frac(x) -> str:
    return format_fraction(to_fraction(x))


def _mat_json(m: Mat) -> list[list[str]]:
    return [[_frac(x) for x in row] for row in m.rows()]


def _mono_key(g: LieAlgebra, mono: Monomial) -> str:
    return "^".join(g.names[i] for i in mono)


def _bracket_json(table: dict) -> dict:
    out = {}
    for key, val in table.items():
        a, b = key if isinstance(key, tuple) else key.split(",")
        vec = {str(k): _frac(v) for k, v in val.items() if to_fraction(v)}
        if vec:
            out[f"{a},{b}"] = dict(sorted(vec.items()))
    return dict(sorted(out.items()))


def algebra_json(g: LieAlgebra) -> dict:
    brackets = {}
    for (i, j), vec in g.brackets.items():
        brackets[f"{g.names[i]},{g.names[j]}"] = {g.names[k]: _frac(c) for k, c in enumerate(vec) if c}
    return {"name": g.name, "generators": list(g.names), "brackets": brackets}


def module_json(B: AModule) -> dict:
    g = B.g
    gens = [{"name": x, "degree": d} for x, d in B.generators.generators()]
    Q = {_mono_key(g, mono): _mat_json(m) for mono, m in B.operator.comps.items()}
    return {"generators": gens, "Q": Q}


def metric_json(m: Metric) -> dict:
    return {str(d): _mat_json(b) for d, b in sorted(m.blocks.items())}


def workspace_json(ws: Workspace) -> dict:
    doc: dict[str, Any] = {"schema": SCHEMA, "liealgebra": algebra_json(ws.algebra)}
    doc["modules"] = {name: module_json(B) for name, B in ws.modules.items()}
    if ws.metrics:
        doc["metrics"] = {name: metric_json(m) for name, m in ws.metrics.items()}
    if ws.deformations:
        doc["deformations"] = _canon_defs(ws.deformations)
    if ws.tasks:
        doc["tasks"] = ws.tasks
    return doc


def _scalar(x) -> bool:
    return not isinstance(x, (dict, list))


def _write(obj: Any, indent: int) -> str:
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_write(obj[k], indent + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list):
        if all(_scalar(x) for x in obj):
            return "[" + ", ".join(json.dumps(x, ensure_ascii=False) for x in obj) + "]"
        return "[\n" + ",\n".join(pad + _write(x, indent + 1) for x in obj) + "\n" + "  " * indent + "]"
    return json.dumps(obj, ensure_ascii=False)


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, scalar lists on one line."""
    return _write(obj, 0) + "\n"


def emit(ws: Workspace) -> str:
    return dumps(workspace_json(ws))


# -- parsing --------------------------------------------------------------------


def _need(obj, key, where, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise DocumentError(f"{where}: missing field {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise DocumentError(f"{where}.{key}: expected {kind.__name__ if isinstance(kind, type) else kind}")
    return val


def _parse_number(x, where) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise DocumentError(f"{where}: numbers are written as \"p/q\" strings")
    try:
        return to_fraction(x)
    except (ValueError, ZeroDivisionError):
        raise DocumentError(f"{where}: not a rational number: {x!r}") from None


def _parse_matrix(rows, n, m, where) -> list[list[Fraction]]:
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != m for r in rows):
        raise DocumentError(f"{where}: expected a {n}x{m} matrix")
    return [[_parse_number(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)]


def parse_bracket_table(g_names, table, where) -> dict[tuple[str, str], dict[str, Fraction]]:
    if not isinstance(table, dict):
        raise DocumentError(f"{where}: bracket table must be an object")
    out = {}
    for key, val in table.items():
        parts = key.split(",")
        if len(parts) != 2 or any(p not in g_names for p in parts):
            raise DocumentError(f"{where}.{key}: expected \"a,b\" with generator names")
        if not isinstance(val, dict):
            raise DocumentError(f"{where}.{key}: expected an object of coefficients")
        vec = {}
        for k, c in val.items():
            if k not in g_names:
                raise DocumentError(f"{where}.{key}: unknown generator {k!r}")
            vec[k] = _parse_number(c, f"{where}.{key}.{k}")
        out[(parts[0], parts[1])] = vec
    return out


def parse_algebra(obj, where="liealgebra") -> LieAlgebra:
    names = _need(obj, "generators", where, list)
    if not all(isinstance(x, str) and x and "," not in x and "^" not in x for x in names):
        raise DocumentError(f"{where}.generators: names must be nonempty strings without ',' or '^'")
    table = parse_bracket_table(names, obj.get("brackets", {}), f"{where}.brackets")
    try:
        return LieAlgebra(names, table, name=str(obj.get("name", "")))
    except LiemodError as exc:
        raise DocumentError(f"{where}: {exc}") from None


def _parse_mono(g: LieAlgebra, key: str, where) -> tuple[int, Monomial]:
    if key == "":
        return 1, ()
    idx = []
    for part in key.split("^"):
        if part not in g.names:
            raise DocumentError(f"{where}: unknown generator {part!r} in monomial {key!r}")
        idx.append(g.names.index(part))
    if len(set(idx)) != len(idx):
        raise DocumentError(f"{where}: repeated generator in monomial {key!r}")
    inversions = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
    return (-1 if inversions % 2 else 1), tuple(sorted(idx))


def parse_module(g: LieAlgebra, obj, where) -> AModule:
    gens = _need(obj, "generators", where, list)
    listed = []
    for k, item in enumerate(gens):
        name = _need(item, "name", f"{where}.generators[{k}]", str)
        deg = _need(item, "degree", f"{where}.generators[{k}]", int)
        listed.append((name, deg))
    try:
        space = GradedVectorSpace(listed)
    except LiemodError as exc:
        raise DocumentError(f"{where}.generators: {exc}") from None
    perm = [space.index(x) for x, _ in listed]
    r = space.dim
    comps: dict[Monomial, list[list[Fraction]]] = {}
    Q = obj.get("Q", {})
    if not isinstance(Q, dict):
        raise DocumentError(f"{where}.Q: expected an object")
    for key, rows in Q.items():
        sign, mono = _parse_mono(g, key, f"{where}.Q")
        vals = _parse_matrix(rows, r, r, f"{where}.Q.{key or '1'}")
        acc = comps.setdefault(mono, [[Fraction(0)] * r for _ in range(r)])
        for i in range(r):
            for j in range(r):
                if vals[i][j]:
                    acc[perm[i]][perm[j]] += sign * vals[i][j]
    try:
        op = OpForm(g, space, space, 1, {m: Mat(v, r, r) for m, v in comps.items()})
        return AModule(g, space, op)
    except LiemodError as exc:
        raise DocumentError(f"{where}: {exc}") from None


def parse_metric(space: GradedVectorSpace, obj, where) -> Metric:
    if not isinstance(obj, dict):
        raise DocumentError(f"{where}: expected an object keyed by degree")
    blocks = {}
    for key, rows in obj.items():
        try:
            d = int(key)
        except ValueError:
            raise DocumentError(f"{where}: degree key {key!r} is not an integer") from None
        r = space.rank(d)
        blocks[d] = Mat(_parse_matrix(rows, r, r, f"{where}.{key}"), r, r)
    try:
        return Metric(space, blocks)
    except LiemodError as exc:
        raise DocumentError(f"{where}: {exc}") from None


def from_json(doc) -> Workspace:
    if not isinstance(doc, dict):
        raise DocumentError("document root must be an object")
    schema = doc.get("schema")
    if schema != SCHEMA:
        raise DocumentError(f"schema: expected {SCHEMA!r}, found {schema!r}")
    g = parse_algebra(_need(doc, "liealgebra", "document", dict))
    modules = {}
    for name, obj in (doc.get("modules") or {}).items():
        modules[name] = parse_module(g, obj, f"modules.{name}")
    metrics = {}
    for name, obj in (doc.get("metrics") or {}).items():
        if name not in modules:
            raise DocumentError(f"metrics.{name}: no module of that name")
        metrics[name] = parse_metric(modules[name].generators, obj, f"metrics.{name}")
    deformations = {}
    for name, terms in (doc.get("deformations") or {}).items():
        if not isinstance(terms, list):
            raise DocumentError(f"deformations.{name}: expected a list of bracket tables")
        deformations[name] = [
            parse_bracket_table(g.names, t, f"deformations.{name}[{i}]") for i, t in enumerate(terms)
        ]
    tasks = doc.get("tasks") or []
    if not isinstance(tasks, list) or not all(isinstance(t, dict) and "verb" in t for t in tasks):
        raise DocumentError("tasks: expected a list of objects with a 'verb'")
    return Workspace(g, modules, metrics, deformations, tasks)


def loads(text: str) -> Workspace:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_json(doc)


def load(path) -> Workspace:
    return loads(Path(path).read_text())


def fixture_path(name: str) -> Path:
    return Path(__file__).parent / "fixtures" / f"{name}.json"
