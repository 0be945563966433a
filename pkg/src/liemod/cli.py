"""Command-line interface.

Verbs: check, cohomology, decompose, ops, deform, charclass, derived-bracket
and run (execute the tasks listed in a document).  Exit status is 0 when
every check passes, 1 on an invariant violation and 2 on a parse or
precondition error.
"""

from __future__ import annotations

import argparse
import random
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import adjoint as adj
from . import charclass as cc
from .errors import ContractError, InvariantViolation, LiemodError, ShapeError, StructureError
from .io import DocumentError, Workspace, algebra_json, dumps, fixture_path, load, workspace_json
from .liealg import EForm, Form, LieAlgebra, Metric, abelian, ce_differential, jacobi_check, monomials
from .linalg import Mat, format_fraction
from .modops import Cohomology, direct_sum, dual, koszul_swap, tensor
from .randgen import random_gauge, random_metric
from .repmod import (
    AModule,
    check_leibniz,
    compare_decompositions,
    decompose,
    intertwines,
    is_flat,
    representation_module,
    trivial_module,
)

BUILTIN_MODULES = ("trivial", "ad", "adjoint")


class UsageError(LiemodError, ValueError):
    pass


# -- formatting helpers -------------------------------------------------------------


def _f(x) -> str:
    return format_fraction(Fraction(x))


def _mono(g: LieAlgebra, mono) -> str:
    return "^".join(g.names[i] for i in mono) or "1"


def form_json(g: LieAlgebra, alpha: Form) -> dict[str, str]:
    return {_mono(g, m): _f(c) for m, c in sorted(alpha.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))}


def eform_json(g: LieAlgebra, w: EForm) -> dict[str, dict[str, str]]:
    out = {}
    for mono, vec in sorted(w.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
        out[_mono(g, mono)] = {w.space.names[j]: _f(x) for j, x in enumerate(vec) if x}
    return out


def mat_json(m: Mat) -> list[list[str]]:
    return [[_f(x) for x in row] for row in m.rows()]


def components_json(g: LieAlgebra, comps) -> list[dict]:
    return [
        {"form_degree": len(mono), "monomial": _mono(g, mono), "matrix": mat_json(m)}
        for mono, m in comps.items()
    ]


def bracket_json(g: LieAlgebra, table: dict) -> dict[str, dict[str, str]]:
    out = {}
    for (a, b), vec in sorted(table.items()):
        vals = {k: _f(c) for k, c in vec.items() if c}
        if vals:
            out[f"{a},{b}"] = vals
    return out


# -- workspace resolution ------------------------------------------------------------


def resolve_input(spec: str | None) -> Workspace:
    if spec is None:
        raise UsageError("no input: pass --input FILE|sl2|heisenberg3|abelianN or a module@fixture target")
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        if not path.exists():
            raise UsageError(f"input file {spec} not found")
        return load(path)
    fx = fixture_path(spec)
    if fx.exists():
        return load(fx)
    m = re.fullmatch(r"abelian(\d+)", spec)
    if m:
        return Workspace(abelian(int(m.group(1))))
    raise UsageError(f"unknown input {spec!r}")


def builtin_module(g: LieAlgebra, name: str) -> AModule:
    if name == "trivial":
        return trivial_module(g)
    if name == "ad":
        return representation_module(g, [g.ad(i) for i in range(g.n)], [f"v_{x}" for x in g.names])
    if name == "adjoint":
        return adj.adjoint_module(g)
    raise UsageError(f"unknown module {name!r}")


def get_module(ws: Workspace, name: str) -> AModule:
    if name in ws.modules:
        return ws.modules[name]
    if name in BUILTIN_MODULES:
        return builtin_module(ws.algebra, name)
    raise UsageError(f"no module {name!r}; available: {sorted(ws.modules) + list(BUILTIN_MODULES)}")


def parse_k(spec: str | None, default=(1, 2, 3)) -> list[int]:
    if spec is None:
        return list(default)
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*", spec)
    if not m:
        raise UsageError(f"--k expects N or A..B, got {spec!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if lo < 1 or hi < lo:
        raise UsageError(f"empty or invalid k range {spec!r}")
    return list(range(lo, hi + 1))


def get_metric(ws: Workspace, module_name: str, B: AModule, spec: str | None) -> Metric:
    if spec is None or spec == "id":
        return Metric.identity(B.generators)
    if spec == "doc":
        if module_name not in ws.metrics:
            raise UsageError(f"document has no metric for {module_name!r}")
        return ws.metrics[module_name]
    m = re.fullmatch(r"random:(\d+)", spec)
    if m:
        return random_metric(random.Random(int(m.group(1))), B.generators)
    raise UsageError(f"--metric expects id, doc or random:SEED, got {spec!r}")


# -- verbs --------------------------------------------------------------------------


def cmd_check(ws: Workspace, modules: list[str], seed: int) -> dict:
    g = ws.algebra
    rep = jacobi_check(g)
    jac: dict[str, Any] = {"ok": rep.ok}
    if not rep.ok:
        jac["triple"] = list(rep.triple)
        jac["jacobiator"] = {g.names[k]: _f(c) for k, c in enumerate(rep.jacobiator) if c}
        jac["d_squared_witness"] = rep.d_squared_witness
    out: dict[str, Any] = {"verb": "check", "algebra": g.name, "jacobi": jac}
    mods = {}
    ok = rep.ok
    rng = random.Random(seed)
    names = modules or sorted(ws.modules)
    for name in names:
        B = get_module(ws, name)
        witness = B.square_zero_witness()
        D = B.to_superconnection()
        samples = 0
        leib = True
        for _ in range(4):
            p = rng.randint(0, g.n)
            alpha = Form(g.n, {m: Fraction(rng.randint(-2, 2)) for m in monomials(g.n, p)})
            w = EForm(
                g.n,
                B.generators,
                {m: [rng.randint(-2, 2) for _ in range(B.generators.dim)] for m in monomials(g.n) if rng.random() < 0.4},
            )
            leib = leib and check_leibniz(D, alpha, w)
            samples += 1
        entry = {"q_squared": {"ok": witness is None}, "leibniz": {"ok": leib, "samples": samples}}
        if witness is not None:
            entry["q_squared"]["witness"] = witness
        mods[name] = entry
        ok = ok and witness is None and leib
    out["modules"] = mods
    out["ok"] = ok
    return out


def _class_entries(g, H: Cohomology) -> list[dict]:
    rows = []
    for k in sorted(H.groups):
        grp = H.groups[k]
        rows.append(
            {
                "degree": k,
                "betti": grp.betti,
                "representatives": [eform_json(g, c.eform()) for c in grp.classes],
            }
        )
    return rows


def cmd_cohomology(ws: Workspace, name: str) -> dict:
    B = get_module(ws, name)
    H = Cohomology(B)
    return {
        "verb": "cohomology",
        "algebra": ws.algebra.name,
        "module": name,
        "ranks": {str(d): r for d, r in B.generators.ranks().items()},
        "groups": _class_entries(ws.algebra, H),
        "betti": [H.groups[k].betti for k in sorted(H.groups)],
        "degrees": [min(H.groups), max(H.groups)] if H.groups else [],
        "ok": True,
    }


def cmd_decompose(ws: Workspace, name: str, seeds: list[int]) -> dict:
    g = ws.algebra
    B = get_module(ws, name)
    runs = [None] + list(seeds) if seeds else [None]
    decs = [decompose(B, s) for s in runs]
    entries = []
    ok = True
    for s, d in zip(runs, decs):
        D = d.superconnection
        flat = is_flat(D)
        inter = d.intertwines()
        zero = d.zero_section_commutes()
        ok = ok and flat and inter and zero
        entries.append(
            {
                "seed": "coordinate" if s is None else s,
                "support": D.support(),
                "components": components_json(g, D.omega.comps),
                "flat": flat,
                "intertwines": inter,
                "zero_section_commutes": zero,
            }
        )
    comparisons = []
    for i in range(len(decs) - 1):
        u = compare_decompositions(decs[i], decs[i + 1])
        ver = intertwines(u, decs[i].superconnection, decs[i + 1].superconnection)
        ok = ok and ver
        comparisons.append(
            {
                "from": entries[i]["seed"],
                "to": entries[i + 1]["seed"],
                "gauge": components_json(g, u.comps),
                "verified": ver,
            }
        )
    if not ok:
        raise InvariantViolation("decomposition failed its own verification")
    return {
        "verb": "decompose",
        "algebra": g.name,
        "module": name,
        "decompositions": entries,
        "comparisons": comparisons,
        "ok": ok,
    }


def cmd_ops(ws: Workspace, tensors, sums, duals) -> dict:
    g = ws.algebra
    built: dict[str, AModule] = {}
    for a, b in tensors or []:
        A, Bm = get_module(ws, a), get_module(ws, b)
        T = tensor(A, Bm)
        if not koszul_swap(A, Bm, T).is_chain_map():
            raise InvariantViolation(f"Koszul swap on {a} (x) {b} is not a chain map")
        built[f"{a}*{b}"] = T
    for a, b in sums or []:
        built[f"{a}+{b}"] = direct_sum(get_module(ws, a), get_module(ws, b))
    for a in duals or []:
        built[f"{a}^*"] = dual(get_module(ws, a))
    if not built:
        raise UsageError("ops needs at least one of --tensor, --sum, --dual")
    for name, M in built.items():
        if not M.is_flat():
            raise InvariantViolation(f"constructed module {name} has Q^2 != 0")
    return workspace_json(Workspace(g, built))


def _derivation_matrix(g: LieAlgebra, phi: adj.Derivation) -> list[list[str]]:
    """Degree-0 derivation as the matrix of ``xi^k -> sum_i a^k_i xi^i``."""
    return [[_f(phi.images[k].coefficient((i,))) for i in range(g.n)] for k in range(g.n)]


def cmd_deform(ws: Workspace, names: list[str]) -> dict:
    g = ws.algebra
    if not jacobi_check(g):
        raise ContractError("the algebra fails the Jacobi identity")
    H = adj.deformation_cohomology(g)
    out: dict[str, Any] = {
        "verb": "deform",
        "algebra": g.name,
        "center_dimension": adj.center_dimension(g),
        "deformation_betti": [{"degree": k, "betti": H.groups[k].betti} for k in sorted(H.groups)],
    }
    reports = {}
    for name in names or sorted(ws.deformations):
        if name not in ws.deformations:
            raise UsageError(f"no deformation {name!r}")
        terms = [adj.from_bracket(g, t) for t in ws.deformations[name]]
        fd = adj.FormalDeformation(g, terms)
        bad = fd.first_failure()
        if bad is not None:
            raise StructureError(f"deformation {name} is not flat at order {bad}")
        step = adj.deformation_step(fd)
        entry: dict[str, Any] = {
            "terms": len(terms),
            "order": step.order,
            "defect_zero": step.defect.is_zero(),
            "extends": step.extends,
        }
        if step.extends:
            entry["next_term"] = bracket_json(g, adj.to_bracket(step.next_term, g))
        else:
            entry["obstruction"] = [_f(x) for x in step.obstruction.representative]
        if len(terms) == 1:
            phi = adj.trivialize(g, terms[0])
            entry["trivialization"] = None if phi is None else _derivation_matrix(g, phi)
        reports[name] = entry
    out["deformations"] = reports
    out["ok"] = True
    return out


def cmd_charclass(ws: Workspace, names: list[str], ks: list[int], metric_spec: str | None, seed: int) -> dict:
    g = ws.algebra
    out: dict[str, Any] = {"verb": "charclass", "algebra": g.name, "P": {str(k): _f(cc.P(k)) for k in ks}}
    if len(names) == 2:
        B0, B1 = get_module(ws, names[0]), get_module(ws, names[1])
        D0, D1 = B0.to_superconnection(), B1.to_superconnection()
        flat = is_flat(D0) and is_flat(D1)
        pair = {}
        ok = True
        for k in ks:
            cs = cc.transgression(D0, D1, k)
            entry = {"transgression": form_json(g, cs.value)}
            ch_diff = cc.chern_weil(D1, k).value - cc.chern_weil(D0, k).value
            stokes = ce_differential(g, cs.value) == ch_diff
            entry["stokes"] = stokes
            ok = ok and stokes
            if flat:
                closed = cc.closed_form_cs(D0, D1, k)
                entry["closed_form"] = form_json(g, closed.value)
                entry["agree"] = closed.value == cs.value
                ok = ok and entry["agree"]
            pair[str(k)] = entry
        if not ok:
            raise InvariantViolation("transgression identities failed")
        out.update({"modules": names, "flat": flat, "pair": pair, "ok": ok})
        return out
    if len(names) != 1:
        raise UsageError("charclass takes one module (with a metric) or two modules")
    name = names[0]
    B = get_module(ws, name)
    D = B.to_superconnection()
    if not is_flat(D):
        raise ContractError(f"module {name} is not flat")
    metric = get_metric(ws, name, B, metric_spec)
    rng = random.Random(seed)
    other = random_metric(rng, B.generators)
    u = random_gauge(rng, g, B.generators)
    per_k = {}
    ok = True
    for k in ks:
        inv = cc.cs_invariant(D, metric, k)
        m_cert = cc.metric_invariance_certificate(D, metric, other, k)
        g_cert = cc.gauge_invariance_certificate(D, u, metric, k)
        ok = ok and m_cert is not None and g_cert is not None
        per_k[str(k)] = {
            "chern_weil": form_json(g, cc.chern_weil(D, k).value),
            "cs": {str(p): form_json(g, f) for p, f in inv.form.components().items()},
            "classes": {str(p): [_f(x) for x in c.representative] for p, c in inv.classes.items()},
            "metric_change_exact": m_cert is not None,
            "gauge_change_exact": g_cert is not None,
        }
    if not ok:
        raise InvariantViolation("cs class changed under a metric or gauge change")
    out.update({"module": name, "metric": metric_spec or "id", "seed": seed, "degrees": per_k, "ok": ok})
    return out


def cmd_derived_bracket(ws: Workspace, names: list[str]) -> dict:
    g = ws.algebra
    table = adj.derived_bracket_table(adj.d_derivation(g))
    got = {}
    for (i, j), vec in table.items():
        vals = {g.names[k]: _f(c) for k, c in enumerate(vec) if c}
        if vals:
            got[f"{g.names[i]},{g.names[j]}"] = vals
    expected = algebra_json(g)["brackets"]
    out: dict[str, Any] = {
        "verb": "derived-bracket",
        "algebra": g.name,
        "bracket": got,
        "matches_structure_constants": got == expected,
    }
    extra = {}
    for name in names:
        if name not in ws.deformations:
            raise UsageError(f"no deformation {name!r}")
        rows = []
        for t in ws.deformations[name]:
            chi = adj.from_bracket(g, t)
            tab = adj.derived_bracket_table(chi)
            rows.append(
                {
                    f"{g.names[i]},{g.names[j]}": {g.names[k]: _f(c) for k, c in enumerate(v) if c}
                    for (i, j), v in tab.items()
                    if any(v)
                }
            )
        extra[name] = rows
    if extra:
        out["deformations"] = extra
    if not out["matches_structure_constants"]:
        raise InvariantViolation("derived bracket of d_A differs from the structure constants")
    out["ok"] = True
    return out


# -- markdown -----------------------------------------------------------------------


def _md_value(v) -> str:
    if isinstance(v, list) and all(isinstance(r, list) for r in v) and v:
        return "[" + "; ".join(" ".join(str(x) for x in r) for r in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_md_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(_md_value(x) for x in v) + "]"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return "null" if v is None else str(v)


def _is_section(v) -> bool:
    if isinstance(v, dict):
        return any(isinstance(x, dict) or _is_section(x) for x in v.values())
    return isinstance(v, list) and bool(v) and all(isinstance(x, dict) for x in v)


def _heading(level: int, text: str) -> list[str]:
    return ["", "#" * min(level, 6) + " " + text, ""]


def _md_section(obj: dict, level: int) -> list[str]:
    lines = [f"- {k}: {_md_value(obj[k])}" for k in sorted(obj) if not _is_section(obj[k])]
    for k in sorted(obj):
        val = obj[k]
        if not _is_section(val):
            continue
        lines += _heading(level + 1, str(k))
        if isinstance(val, dict):
            lines += _md_section(val, level + 1)
        elif any(_is_section(x) for item in val for x in item.values()):
            for i, item in enumerate(val, 1):
                label = f"{k} {i}"
                if isinstance(item.get("task"), dict) and "verb" in item["task"]:
                    label += f": {item['task']['verb']}"
                lines += _heading(level + 2, label) + _md_section(item, level + 2)
        else:
            lines += ["- " + "; ".join(f"{a}: {_md_value(item[a])}" for a in sorted(item)) for item in val]
    return lines


def to_markdown(report: dict) -> str:
    title = report.get("verb") or report.get("schema") or "report"
    body = _md_section({k: v for k, v in report.items() if k != "verb"}, 1)
    text = "\n".join([f"# {title}", ""] + body)
    return re.sub(r"\n{3,}", "\n\n", text).strip() + "\n"


# -- entry point --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("target", nargs="*", help="module name, module@fixture, or a fixture name")
    common.add_argument("--input", "-i", help="workspace JSON file or builtin fixture (sl2, heisenberg3, abelianN)")
    common.add_argument("--module", "-m", action="append", default=[], help="module name (repeatable)")
    common.add_argument("--seed", "-s", action="append", type=int, default=[], help="random seed (repeatable)")
    common.add_argument("--k", "-k", dest="k", help="degree range, e.g. 1..3")
    common.add_argument("--metric", help="id, doc or random:SEED")
    common.add_argument("--deformation", "-d", action="append", default=[], help="deformation name (repeatable)")
    common.add_argument("--format", "-f", choices=["json", "markdown"], default="json")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="liemod", description="Exact computations with Lie algebra modules.")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in ("check", "cohomology", "decompose", "deform", "charclass", "derived-bracket", "run"):
        sub.add_parser(verb, parents=[common])
    ops = sub.add_parser("ops", parents=[common])
    ops.add_argument("--tensor", nargs=2, action="append", metavar=("A", "B"))
    ops.add_argument("--sum", nargs=2, action="append", metavar=("A", "B"))
    ops.add_argument("--dual", action="append", metavar="A")
    return parser


def _split_targets(args) -> tuple[str | None, list[str]]:
    """Resolve ``module@fixture`` shorthand and bare fixture names."""
    inp = args.input
    mods = list(args.module)
    for t in args.target:
        if "@" in t:
            mod, fix = t.split("@", 1)
            if inp is not None and inp != fix:
                raise UsageError(f"target {t} conflicts with --input {inp}")
            inp = fix
            mods.append(mod)
        elif inp is None and (fixture_path(t).exists() or re.fullmatch(r"abelian\d+", t) or t.endswith(".json")):
            inp = t
        else:
            mods.append(t)
    return inp, mods


def dispatch(verb: str, ws: Workspace, mods: list[str], args) -> dict:
    seed = args.seed[0] if args.seed else 0
    if verb == "check":
        return cmd_check(ws, mods, seed)
    if verb == "cohomology":
        if len(mods) != 1:
            raise UsageError("cohomology takes exactly one module")
        return cmd_cohomology(ws, mods[0])
    if verb == "decompose":
        if len(mods) != 1:
            raise UsageError("decompose takes exactly one module")
        return cmd_decompose(ws, mods[0], args.seed)
    if verb == "ops":
        return cmd_ops(ws, args.tensor, args.sum, args.dual)
    if verb == "deform":
        return cmd_deform(ws, args.deformation)
    if verb == "charclass":
        return cmd_charclass(ws, mods, parse_k(args.k), args.metric, seed)
    if verb == "derived-bracket":
        return cmd_derived_bracket(ws, args.deformation)
    raise UsageError(f"unknown verb {verb}")


def run_tasks(ws: Workspace) -> dict:
    parser = build_parser()
    reports = []
    ok = True
    for task in ws.tasks:
        argv = [task["verb"]]
        for m in task.get("modules", [task["module"]] if "module" in task else []):
            argv += ["--module", m]
        for s in task.get("seeds", []):
            argv += ["--seed", str(s)]
        if "k" in task:
            argv += ["--k", str(task["k"])]
        if "metric" in task:
            argv += ["--metric", task["metric"]]
        for d in task.get("deformations", []):
            argv += ["--deformation", d]
        for a, b in task.get("tensor", []):
            argv += ["--tensor", a, b]
        for a, b in task.get("sum", []):
            argv += ["--sum", a, b]
        for a in task.get("dual", []):
            argv += ["--dual", a]
        args = parser.parse_args(argv)
        rep = dispatch(args.verb, ws, args.module, args)
        ok = ok and rep.get("ok", True)
        reports.append({"task": task, "report": rep})
    return {"verb": "run", "algebra": ws.algebra.name, "tasks": reports, "ok": ok}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        inp, mods = _split_targets(args)
        ws = resolve_input(inp)
        report = run_tasks(ws) if args.verb == "run" else dispatch(args.verb, ws, mods, args)
    except DocumentError as exc:
        print(f"liemod: parse error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"liemod: invariant violation: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ContractError, ShapeError, StructureError) as exc:
        print(f"liemod: {exc}", file=sys.stderr)
        return 2
    text = dumps(report) if args.format == "json" else to_markdown(report)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if report.get("ok", True) else 1


if __name__ == "__main__":
    sys.exit(main())
