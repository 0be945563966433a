"""Graded vector spaces and graded linear maps.

Sign conventions (fixed for the whole package):

* graded commutator ``[f, g] = f g - (-1)^{|f||g|} g f``;
* tensor of maps ``(f (x) g)(x (x) y) = (-1)^{|g||x|} f(x) (x) g(y)``;
* braiding ``x (x) y -> (-1)^{|x||y|} y (x) x``;
* supertrace ``str f = sum_d (-1)^d tr(f restricted to degree d)``.

Basis vectors are ordered by degree, then by declaration order within a
degree; every matrix in the package is relative to that order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ContractError, ShapeError
from .linalg import Mat


class GradedVectorSpace:
    """Finite-dimensional graded vector space with named basis vectors."""

    __slots__ = ("names", "degrees", "_index", "_hash")

    def __init__(self, generators: Iterable[tuple[str, int]]):
        gens = [(str(n), int(d)) for n, d in generators]
        seen = set()
        for n, _ in gens:
            if n in seen:
                raise ShapeError(f"duplicate basis name {n!r}")
            seen.add(n)
        order = sorted(range(len(gens)), key=lambda i: (gens[i][1], i))
        self.names = tuple(gens[i][0] for i in order)
        self.degrees = tuple(gens[i][1] for i in order)
        self._index = {n: i for i, n in enumerate(self.names)}
        self._hash = hash((self.names, self.degrees))

    @classmethod
    def from_ranks(cls, ranks: Mapping[int, int], prefix: str = "e") -> "GradedVectorSpace":
        gens = []
        for d in sorted(ranks):
            gens += [(f"{prefix}{d}_{i}", d) for i in range(ranks[d])]
        return cls(gens)

    @property
    def dim(self) -> int:
        return len(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def generators(self) -> list[tuple[str, int]]:
        return list(zip(self.names, self.degrees))

    def support(self) -> list[int]:
        return sorted(set(self.degrees))

    def rank(self, d: int) -> int:
        return self.degrees.count(d)

    def ranks(self) -> dict[int, int]:
        return {d: self.rank(d) for d in self.support()}

    def indices(self, d: int) -> list[int]:
        return [i for i, e in enumerate(self.degrees) if e == d]

    def basis_names(self, d: int) -> list[str]:
        return [self.names[i] for i in self.indices(d)]

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ShapeError(f"unknown basis vector {name!r}") from None

    def degree_of(self, name: str) -> int:
        return self.degrees[self.index(name)]

    def parity_signs(self) -> list[int]:
        return [-1 if d % 2 else 1 for d in self.degrees]

    def shifted(self, k: int) -> "GradedVectorSpace":
        return GradedVectorSpace((n, d + k) for n, d in self.generators())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedVectorSpace):
            return NotImplemented
        return self.names == other.names and self.degrees == other.degrees

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"GradedVectorSpace({self.ranks()})"


def _check_blocks(degree, source, target, mat: Mat):
    """Raise if ``mat`` has an entry not of the declared degree."""
    for i, j in mat.nonzero_entries():
        if target.degrees[i] - source.degrees[j] != degree:
            raise ShapeError(
                f"entry ({target.names[i]}, {source.names[j]}) has degree "
                f"{target.degrees[i] - source.degrees[j]}, expected {degree}"
            )


class GradedMap:
    """Homogeneous linear map between graded spaces, stored blockwise.

    ``blocks[d]`` is the matrix from the degree-``d`` part of the source to
    the degree ``d + degree`` part of the target; blocks exist exactly where
    both ranks are nonzero.
    """

    __slots__ = ("degree", "source", "target", "blocks")

    def __init__(self, degree: int, source: GradedVectorSpace, target: GradedVectorSpace, blocks: Mapping[int, Mat]):
        self.degree = degree
        self.source = source
        self.target = target
        full = {}
        for d in source.support():
            rt, rs = target.rank(d + degree), source.rank(d)
            if rt == 0:
                if d in blocks and not blocks[d].is_zero():
                    raise ShapeError(f"block at degree {d} lands in an empty target degree")
                continue
            b = blocks.get(d)
            if b is None:
                b = Mat.zeros(rt, rs)
            elif b.shape != (rt, rs):
                raise ShapeError(f"block at degree {d} has shape {b.shape}, expected {(rt, rs)}")
            full[d] = b
        extra = set(blocks) - set(full)
        for d in extra:
            if not blocks[d].is_zero():
                raise ShapeError(f"block at degree {d} outside the source support")
        self.blocks = full

    @classmethod
    def zero(cls, degree, source, target=None) -> "GradedMap":
        return cls(degree, source, target if target is not None else source, {})

    @classmethod
    def identity(cls, space: GradedVectorSpace) -> "GradedMap":
        return cls(0, space, space, {d: Mat.identity(space.rank(d)) for d in space.support()})

    @classmethod
    def from_matrix(cls, degree: int, source, target, mat: Mat) -> "GradedMap":
        if mat.shape != (target.dim, source.dim):
            raise ShapeError(f"matrix shape {mat.shape} does not match {target.dim}x{source.dim}")
        _check_blocks(degree, source, target, mat)
        blocks = {}
        for d in source.support():
            rows = target.indices(d + degree)
            if rows:
                blocks[d] = mat.submatrix(rows, source.indices(d))
        return cls(degree, source, target, blocks)

    def to_matrix(self) -> Mat:
        rows = [[Fraction(0)] * self.source.dim for _ in range(self.target.dim)]
        for d, b in self.blocks.items():
            ri = self.target.indices(d + self.degree)
            ci = self.source.indices(d)
            for a, row in enumerate(b.rows()):
                for c, x in enumerate(row):
                    rows[ri[a]][ci[c]] = x
        return Mat(rows, self.target.dim, self.source.dim)

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks.values())

    def is_endomorphism(self) -> bool:
        return self.source == self.target

    def _same_shape(self, other: "GradedMap"):
        if (self.degree, self.source, self.target) != (other.degree, other.source, other.target):
            raise ShapeError("graded maps of different degree or spaces")

    def __add__(self, other: "GradedMap") -> "GradedMap":
        self._same_shape(other)
        return GradedMap(self.degree, self.source, self.target, {d: b + other.blocks[d] for d, b in self.blocks.items()})

    def __neg__(self) -> "GradedMap":
        return GradedMap(self.degree, self.source, self.target, {d: -b for d, b in self.blocks.items()})

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return self + (-other)

    def scale(self, c) -> "GradedMap":
        return GradedMap(self.degree, self.source, self.target, {d: b.scale(c) for d, b in self.blocks.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (self.degree, self.source, self.target, self.blocks) == (
            other.degree,
            other.source,
            other.target,
            other.blocks,
        )

    def __repr__(self) -> str:
        return f"GradedMap(degree={self.degree}, blocks={self.blocks})"


def compose(f: GradedMap, g: GradedMap) -> GradedMap:
    """``f o g``; degrees add."""
    if f.source != g.target:
        raise ShapeError("compose: source of f differs from target of g")
    blocks = {}
    for d, gb in g.blocks.items():
        mid = d + g.degree
        fb = f.blocks.get(mid)
        if fb is None:
            continue
        if fb.ncols != gb.nrows:
            raise ShapeError(f"compose: shape mismatch at source degree {d}")
        blocks[d] = fb @ gb
    return GradedMap(f.degree + g.degree, g.source, f.target, blocks)


def graded_commutator(f: GradedMap, g: GradedMap) -> GradedMap:
    if not (f.is_endomorphism() and g.is_endomorphism() and f.source == g.source):
        raise ShapeError("graded_commutator needs endomorphisms of one space")
    sign = -1 if (f.degree * g.degree) % 2 else 1
    return compose(f, g) - compose(g, f).scale(sign)


def supertrace(f: GradedMap) -> Fraction:
    if f.degree != 0 or not f.is_endomorphism():
        raise ContractError("supertrace needs a degree-0 endomorphism")
    total = Fraction(0)
    for d, b in f.blocks.items():
        total += b.trace() if d % 2 == 0 else -b.trace()
    return total


def matrix_supertrace(space: GradedVectorSpace, m: Mat) -> Fraction:
    """Supertrace of a full matrix: degree-0 diagonal, signed by parity."""
    total = 0
    for i, d in enumerate(space.degrees):
        x = m.num[i][i]
        if x:
            total += -x if d % 2 else x
    return Fraction(total, m.den)


def kernel_basis(f: GradedMap) -> dict[int, list[tuple[Fraction, ...]]]:
    """Kernel basis per source degree, in that degree's local coordinates."""
    out = {}
    for d in f.source.support():
        b = f.blocks.get(d)
        if b is None:
            n = f.source.rank(d)
            out[d] = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
        else:
            out[d] = b.nullspace()
    return out


def image_basis(f: GradedMap) -> dict[int, list[tuple[Fraction, ...]]]:
    """Image basis per target degree, in that degree's local coordinates."""
    out = {}
    for d in f.target.support():
        b = f.blocks.get(d - f.degree)
        out[d] = b.column_space() if b is not None else []
    return out


def solve(f: GradedMap, y: Sequence) -> tuple[Fraction, ...]:
    """Some ``x`` with ``f(x) = y`` (full coordinates); raises ``NoSolution``."""
    return f.to_matrix().solve(y)
