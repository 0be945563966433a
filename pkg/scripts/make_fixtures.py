"""Regenerate the shipped workspace fixtures in src/liemod/fixtures.

Run from the repository root: ``python3 scripts/make_fixtures.py``.
"""

import random
from fractions import Fraction
from pathlib import Path

from liemod import adjoint as adj
from liemod.graded import GradedVectorSpace
from liemod.io import Workspace, emit, loads
from liemod.liealg import LieAlgebra, Metric, abelian, heisenberg3, jacobi_check, sl2
from liemod.linalg import Mat
from liemod.randgen import random_flat
from liemod.repmod import AModule, OpForm, representation_module

OUT = Path(__file__).resolve().parent.parent / "src" / "liemod" / "fixtures"


def cone(g, mats, name="c"):
    """``V -> V[-1]`` with the identity as differential; flat since the identity commutes with rho."""
    r = mats[0].nrows
    gens = [(f"{name}{j}", 0) for j in range(r)] + [(f"{name}{j}'", 1) for j in range(r)]
    E = GradedVectorSpace(gens)
    zero = Mat.zeros(r, r)
    ident = Mat.identity(r)
    comps = {(): Mat([[0] * (2 * r)] * r + [list(row) + [0] * r for row in ident.rows()])}
    for i, m in enumerate(mats):
        top = [list(a) + list(b) for a, b in zip(m.rows(), zero.rows())]
        bot = [list(a) + list(b) for a, b in zip(zero.rows(), m.rows())]
        comps[(i,)] = Mat(top + bot)
    B = AModule(g, E, OpForm(g, E, E, 1, comps))
    assert B.is_flat()
    return B


def relabel(B: AModule, prefix: str) -> AModule:
    E = GradedVectorSpace((f"{prefix}{j}", d) for j, d in enumerate(B.generators.degrees))
    op = OpForm(B.g, E, E, 1, B.operator.comps)
    return AModule(B.g, E, op)


def nonexact_cocycle(g):
    H = adj.deformation_cohomology(g)
    grp = H.groups[1]
    return H.complex.to_derivation(1, grp.classes[0].representative) if grp.classes else None


def common_tasks(twisted="twisted"):
    return [
        {"verb": "check"},
        {"verb": "cohomology", "module": "trivial"},
        {"verb": "cohomology", "module": "ad"},
        {"verb": "decompose", "module": twisted, "seeds": [1, 2]},
        {"verb": "deform"},
        {"verb": "derived-bracket"},
        {"verb": "charclass", "module": twisted, "metric": "id", "k": "1..3"},
    ]


def build_sl2():
    g = sl2()
    std = [Mat([[0, 1], [0, 0]]), Mat([[0, 0], [1, 0]]), Mat([[1, 0], [0, -1]])]
    standard = representation_module(g, std, ["a", "b"])
    twisted = relabel(AModule.from_superconnection(random_flat(random.Random(5), g, 5)), "t")
    phi = adj.Derivation.from_coefficients(g.n, 0, {((0,), 2): 1, ((2,), 1): 2})
    chi = adj.d_derivation(g).commutator(phi)
    ws = Workspace(
        g,
        {"standard": standard, "cone": cone(g, std), "twisted": twisted},
        {"standard": Metric(standard.generators, {0: Mat([[2, 1], [1, 1]])})},
        {"coboundary": [adj.to_bracket(chi, g)], "zero": [{}]},
    )
    ws.tasks = common_tasks() + [
        {"verb": "ops", "tensor": [["standard", "standard"]], "dual": ["cone"]},
        {"verb": "cohomology", "module": "adjoint"},
        {"verb": "charclass", "module": "standard", "metric": "doc", "k": "1..3"},
    ]
    return ws


def build_h3():
    g = heisenberg3()
    char = [Mat([[1]]), Mat([[-2]]), Mat([[0]])]
    character = representation_module(g, char, ["w"])
    twisted = relabel(AModule.from_superconnection(random_flat(random.Random(3), g, 5)), "t")
    chi = nonexact_cocycle(g)
    ws = Workspace(
        g,
        {"character": character, "cone": cone(g, char), "twisted": twisted},
        {},
        {"outer": [adj.to_bracket(chi, g)]},
    )
    ws.tasks = common_tasks() + [
        {"verb": "cohomology", "module": "adjoint"},
        {"verb": "ops", "sum": [["character", "cone"]], "dual": ["character"]},
    ]
    return ws


def build_abelian3():
    g = abelian(3)
    diag = [Mat.diag([1, 0]), Mat.diag([0, 2]), Mat.diag([Fraction(1, 2), -1])]
    diagonal = representation_module(g, diag, ["p", "q"])
    twisted = relabel(AModule.from_superconnection(random_flat(random.Random(2), g, 5)), "t")
    broken = {("x1", "x2"): {"x1": 1}, ("x1", "x3"): {"x1": 1, "x2": 1}, ("x2", "x3"): {"x3": 1}}
    assert not jacobi_check(LieAlgebra(g.names, broken))
    ws = Workspace(
        g,
        {"diagonal": diagonal, "twisted": twisted},
        {"diagonal": Metric(diagonal.generators, {0: Mat([[1, 0], [0, 3]])})},
        {"heisenberg": [{("x1", "x2"): {"x3": 1}}], "nonjacobi": [broken]},
    )
    ws.tasks = common_tasks() + [{"verb": "ops", "tensor": [["diagonal", "twisted"]]}]
    return ws


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, build in [("sl2", build_sl2), ("heisenberg3", build_h3), ("abelian3", build_abelian3)]:
        ws = build()
        text = emit(ws)
        assert emit(loads(text)) == text
        (OUT / f"{name}.json").write_text(text)
        print(f"wrote {name}.json")


if __name__ == "__main__":
    main()
