"""Seeded random superconnections, gauge transformations and modules.

Flat superconnections are assembled from pieces whose flatness is known
(representations sitting in one degree, contractible two-term complexes)
and then twisted by a random bundle automorphism and gauge transformation,
which populates the higher components while keeping ``D^2 = 0``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .graded import GradedVectorSpace
from .liealg import LieAlgebra, Metric, monomials
from .linalg import Mat
from .repmod import (
    AModule,
    GaugeTransformation,
    OpForm,
    Superconnection,
    conjugate_by,
    gauge_conjugate,
)


def rational(rng: random.Random, bound: int = 3) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def _sparse(rng: random.Random, density: float, bound: int = 3) -> Fraction:
    return rational(rng, bound) if rng.random() < density else Fraction(0)


def random_space(rng: random.Random, max_rank: int = 4, degrees: Sequence[int] = (0, 1)) -> GradedVectorSpace:
    gens = []
    for d in degrees:
        for j in range(rng.randint(1, max(1, max_rank // len(degrees)))):
            gens.append((f"e{d}_{j}", d))
    return GradedVectorSpace(gens)


def random_gauge(rng: random.Random, g: LieAlgebra, E: GradedVectorSpace, density: float = 0.6) -> GaugeTransformation:
    comps = {}
    for p in range(1, g.n + 1):
        for mono in monomials(g.n, p):
            rows = [
                [_sparse(rng, density) if di - dj == -p else 0 for dj in E.degrees]
                for di in E.degrees
            ]
            comps[mono] = Mat(rows, E.dim, E.dim)
    return GaugeTransformation(g, E, comps)


def random_automorphism(rng: random.Random, g: LieAlgebra, E: GradedVectorSpace, density: float = 0.5) -> OpForm:
    """Even degree-0 automorphism: invertible triangular blocks plus random higher terms."""
    rows = [[Fraction(0)] * E.dim for _ in range(E.dim)]
    for d in E.support():
        idx = E.indices(d)
        for a, i in enumerate(idx):
            for b, j in enumerate(idx):
                if a == b:
                    rows[i][j] = Fraction(rng.choice([1, -1, 2, Fraction(1, 2)]))
                elif b < a:
                    rows[i][j] = _sparse(rng, density)
    base = OpForm(g, E, E, 0, {(): Mat(rows, E.dim, E.dim)})
    return base @ random_gauge(rng, g, E, density).as_opform()


def random_superconnection(
    rng: random.Random, g: LieAlgebra, E: GradedVectorSpace, density: float = 0.5
) -> Superconnection:
    """Homogeneous, generally not flat."""
    comps = {}
    for p in range(0, g.n + 1):
        for mono in monomials(g.n, p):
            rows = [
                [_sparse(rng, density) if di - dj == 1 - p else 0 for dj in E.degrees]
                for di in E.degrees
            ]
            comps[mono] = Mat(rows, E.dim, E.dim)
    return Superconnection(g, E, OpForm(g, E, E, 1, comps))


# -- representations -----------------------------------------------------------


def characters(g: LieAlgebra) -> list[tuple[Fraction, ...]]:
    """Basis of linear functionals vanishing on ``[g, g]``."""
    rows = [list(v) for v in g.brackets.values()]
    if not rows:
        return [g.basis_vector(i) for i in range(g.n)]
    return Mat(rows, len(rows), g.n).nullspace()


def representations(g: LieAlgebra, rng: random.Random | None = None) -> dict[str, list[Mat]]:
    """Some representations known to be flat: trivial, adjoint, a character, sl2's standard one."""
    out = {
        "trivial": [Mat.zeros(1, 1) for _ in range(g.n)],
        "ad": [g.ad(i) for i in range(g.n)],
    }
    chars = characters(g)
    if chars:
        rng = rng or random.Random(0)
        coeffs = [rational(rng) for _ in chars]
        vals = [sum(c * v[i] for c, v in zip(coeffs, chars)) for i in range(g.n)]
        out["character"] = [Mat([[x]]) for x in vals]
    if g.is_abelian() and g.n:
        rng = rng or random.Random(0)
        out["diagonal"] = [Mat.diag([rational(rng) for _ in range(2)]) for _ in range(g.n)]
    if g.names == ("e", "f", "h") and g == _sl2_reference():
        out["standard"] = [Mat([[0, 1], [0, 0]]), Mat([[0, 0], [1, 0]]), Mat([[1, 0], [0, -1]])]
    return out


def _sl2_reference() -> LieAlgebra:
    from .liealg import sl2

    return sl2()


def _piece_rep(g: LieAlgebra, mats: list[Mat], degree: int, tag: str):
    r = mats[0].nrows
    return [(f"{tag}_{j}", degree) for j in range(r)], {(i,): m for i, m in enumerate(mats)}


def random_flat(
    rng: random.Random,
    g: LieAlgebra,
    max_rank: int = 6,
    degrees: Sequence[int] = (0, 1),
    twist: bool = True,
    density: float = 0.5,
) -> Superconnection:
    """Flat homogeneous superconnection of total rank at most ``max_rank``."""
    reps = representations(g, rng)
    gens: list[tuple[str, int]] = []
    blocks: list[dict] = []
    sizes: list[int] = []
    tag = 0
    while True:
        kind = rng.random()
        if kind < 0.35 and len(degrees) > 1:
            d = rng.choice(list(degrees[:-1]))
            names = [(f"c{tag}a", d), (f"c{tag}b", d + 1)]
            comp = {(): Mat([[0, 0], [1, 0]])}
            size = 2
        else:
            name = rng.choice(sorted(reps))
            mats = reps[name]
            d = rng.choice(list(degrees))
            names, comp = _piece_rep(g, mats, d, f"{name[:2]}{tag}")
            size = len(names)
        if sum(sizes) + size > max_rank:
            if sizes:
                break
            continue
        gens += names
        blocks.append(comp)
        sizes.append(size)
        tag += 1
        if sum(sizes) >= max_rank or rng.random() < 0.3:
            break
    E = GradedVectorSpace(gens)
    # generators were listed piece by piece; place each piece's matrix by name
    order = [E.index(x) for x, _ in gens]
    comps: dict = {}
    start = 0
    for comp, size in zip(blocks, sizes):
        for mono, m in comp.items():
            rows = comps.setdefault(mono, [[Fraction(0)] * E.dim for _ in range(E.dim)])
            for a in range(size):
                for b in range(size):
                    x = m[a, b]
                    if x:
                        rows[order[start + a]][order[start + b]] = x
        start += size
    D = Superconnection(g, E, OpForm(g, E, E, 1, {k: Mat(v, E.dim, E.dim) for k, v in comps.items()}))
    if twist:
        D = conjugate_by(D, random_automorphism(rng, g, E, density))
        D = gauge_conjugate(D, random_gauge(rng, g, E, density))
    return D


def random_module(rng: random.Random, g: LieAlgebra, max_rank: int = 6, degrees: Sequence[int] = (0, 1)) -> AModule:
    return AModule.from_superconnection(random_flat(rng, g, max_rank, degrees))


def random_metric(rng: random.Random, E: GradedVectorSpace) -> Metric:
    """``L L^T`` with ``L`` unit lower triangular plus a positive diagonal."""
    blocks = {}
    for d in E.support():
        r = E.rank(d)
        L = Mat(
            [[rational(rng, 2) if j < i else (1 if i == j else 0) for j in range(r)] for i in range(r)], r, r
        )
        Dg = Mat.diag([Fraction(rng.randint(1, 3), rng.randint(1, 2)) for _ in range(r)])
        blocks[d] = L @ Dg @ L.T
    return Metric(E, blocks)


__all__ = [
    "characters",
    "random_automorphism",
    "random_flat",
    "random_gauge",
    "random_metric",
    "random_module",
    "random_space",
    "random_superconnection",
    "rational",
    "representations",
]
