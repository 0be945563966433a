"""Lie algebras over a point, A-forms, E-valued forms and t-dependent forms.

Forms live in the exterior algebra on the dual basis ``xi^0 .. xi^{n-1}``.
A basis monomial is a strictly increasing tuple of generator indices and
``xi^I (X_{I_1}, ..., X_{I_p}) = 1`` (determinant normalisation).

The Chevalley-Eilenberg differential is ``d xi^k = -sum_{i<j} c^k_{ij} xi^i xi^j``,
i.e. ``d alpha (X, Y) = -alpha([X, Y])`` on 1-forms, extended as an odd
derivation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import ContractError, ShapeError
from .graded import GradedVectorSpace
from .linalg import Mat, format_fraction, to_fraction

Monomial = tuple[int, ...]


@lru_cache(maxsize=None)
def wedge_monomials(a: Monomial, b: Monomial) -> tuple[int, Monomial]:
    """``xi^a ^ xi^b = sign * xi^c``; returns ``(0, ())`` when they overlap."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    sa = set(a)
    if any(x in sa for x in b):
        return 0, ()
    inversions = 0
    for x in a:
        for y in b:
            if x > y:
                inversions += 1
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


@lru_cache(maxsize=None)
def monomials(n: int, p: int | None = None) -> tuple[Monomial, ...]:
    """Basis monomials of degree ``p`` (all degrees when ``p`` is None)."""
    if p is not None:
        return tuple(combinations(range(n), p)) if 0 <= p <= n else ()
    return tuple(m for q in range(n + 1) for m in combinations(range(n), q))


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


class Form:
    """Element of the exterior algebra on ``n`` generators (possibly nonhomogeneous)."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Monomial, object] | None = None):
        self.n = n
        clean = {}
        for mono, c in (terms or {}).items():
            c = to_fraction(c)
            if c:
                mono = tuple(mono)
                if any(x < 0 or x >= n for x in mono) or list(mono) != sorted(set(mono)):
                    raise ShapeError(f"monomial {mono} is not strictly increasing in range({n})")
                clean[mono] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def one(cls, n: int) -> "Form":
        return cls(n, {(): 1})

    @classmethod
    def generator(cls, n: int, i: int) -> "Form":
        return cls(n, {(i,): 1})

    @classmethod
    def monomial(cls, n: int, mono: Iterable[int], coeff=1) -> "Form":
        """``coeff * xi^{i1} ^ xi^{i2} ^ ...`` for an arbitrary index order."""
        out = cls.one(n).scale(coeff)
        for i in mono:
            out = out.wedge(cls.generator(n, i))
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> list[int]:
        return sorted({len(m) for m in self.terms})

    def degree(self) -> int | None:
        """Degree if homogeneous and nonzero, else None."""
        ds = self.degrees()
        return ds[0] if len(ds) == 1 else None

    def component(self, p: int) -> "Form":
        return Form(self.n, {m: c for m, c in self.terms.items() if len(m) == p})

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def _check(self, other: "Form"):
        if not isinstance(other, Form) or other.n != self.n:
            raise ShapeError("forms over different algebras")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Form(self.n, terms)

    def __neg__(self) -> "Form":
        return Form(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, c) -> "Form":
        c = to_fraction(c)
        return Form(self.n, {m: c * x for m, x in self.terms.items()})

    def wedge(self, other: "Form") -> "Form":
        self._check(other)
        out: dict[Monomial, Fraction] = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                s, m = wedge_monomials(a, b)
                if s:
                    out[m] = out.get(m, 0) + (x * y if s > 0 else -x * y)
        return Form(self.n, out)

    def __mul__(self, other):
        if isinstance(other, Form):
            return self.wedge(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def evaluate(self, vectors: Sequence[Sequence]) -> Fraction:
        """Value of the degree-``len(vectors)`` part on the given vectors."""
        p = len(vectors)
        total = Fraction(0)
        for mono, c in self.terms.items():
            if len(mono) != p:
                continue
            rows = [[to_fraction(v[i]) for v in vectors] for i in mono]
            total += c * (Mat(rows, p, p).det() if p else 1)
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Form({format_form(self)})"


def format_form(alpha: Form, names: Sequence[str] | None = None) -> str:
    if alpha.is_zero():
        return "0"
    names = names or [f"x{i}" for i in range(alpha.n)]
    parts = []
    for mono in sorted(alpha.terms, key=lambda m: (len(m), m)):
        c = alpha.terms[mono]
        label = "^".join(f"d{names[i]}" for i in mono) or "1"
        parts.append(f"{format_fraction(c)}*{label}")
    return " + ".join(parts)


def wedge(alpha: Form, beta: Form) -> Form:
    return alpha.wedge(beta)


class LieAlgebra:
    """Finite-dimensional Lie algebra given by structure constants.

    ``brackets[(i, j)]`` for ``i < j`` is the coordinate vector of ``[X_i, X_j]``.
    """

    def __init__(self, names: Sequence[str], brackets: Mapping | None = None, name: str = ""):
        self.names = tuple(str(x) for x in names)
        if len(set(self.names)) != len(self.names):
            raise ShapeError("duplicate generator names")
        self.name = name
        self.n = len(self.names)
        self._index = {x: i for i, x in enumerate(self.names)}
        table: dict[tuple[int, int], list[Fraction]] = {}
        for (a, b), value in (brackets or {}).items():
            i, j = self.index(a), self.index(b)
            vec = self._vector(value)
            if i == j:
                if any(vec):
                    raise ShapeError(f"[{self.names[i]}, {self.names[i]}] must vanish")
                continue
            if i > j:
                i, j = j, i
                vec = [-x for x in vec]
            if (i, j) in table and table[(i, j)] != vec:
                raise ShapeError(f"inconsistent entries for [{self.names[i]}, {self.names[j]}]")
            table[(i, j)] = vec
        self.brackets = {k: tuple(v) for k, v in sorted(table.items()) if any(v)}
        self._d_cache: dict[Monomial, Form] = {}

    def index(self, x) -> int:
        if isinstance(x, int):
            if not 0 <= x < self.n:
                raise ShapeError(f"generator index {x} out of range")
            return x
        try:
            return self._index[x]
        except KeyError:
            raise ShapeError(f"unknown generator {x!r}") from None

    def _vector(self, value) -> list[Fraction]:
        if isinstance(value, Mapping):
            vec = [Fraction(0)] * self.n
            for k, c in value.items():
                vec[self.index(k)] += to_fraction(c)
            return vec
        vec = [to_fraction(c) for c in value]
        if len(vec) != self.n:
            raise ShapeError("bracket vector of wrong length")
        return vec

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        """``c^k_{ij}``, antisymmetric in ``i, j``."""
        if i == j:
            return Fraction(0)
        if i < j:
            return self.brackets.get((i, j), (Fraction(0),) * self.n)[k]
        return -self.brackets.get((j, i), (Fraction(0),) * self.n)[k]

    def bracket_basis(self, i: int, j: int) -> tuple[Fraction, ...]:
        return tuple(self.structure_constant(i, j, k) for k in range(self.n))

    def bracket(self, x: Sequence, y: Sequence) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.n
        for (i, j), vec in self.brackets.items():
            c = to_fraction(x[i]) * to_fraction(y[j]) - to_fraction(x[j]) * to_fraction(y[i])
            if c:
                for k, v in enumerate(vec):
                    out[k] += c * v
        return tuple(out)

    def basis_vector(self, i: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(k == i)) for k in range(self.n))

    def ad(self, i: int) -> Mat:
        """Matrix of ``ad_{X_i}``."""
        return Mat([[self.structure_constant(i, j, k) for j in range(self.n)] for k in range(self.n)], self.n, self.n)

    def center(self) -> list[tuple[Fraction, ...]]:
        rows = []
        for j in range(self.n):
            for k in range(self.n):
                rows.append([self.structure_constant(i, j, k) for i in range(self.n)])
        if not rows:
            return []
        return Mat(rows, len(rows), self.n).nullspace()

    def with_constant(self, i, j, k, value) -> "LieAlgebra":
        """Copy with ``c^k_{ij}`` replaced (antisymmetry kept)."""
        i, j, k = self.index(i), self.index(j), self.index(k)
        table = {(a, b): list(v) for (a, b), v in self.brackets.items()}
        key, sign = ((i, j), 1) if i < j else ((j, i), -1)
        vec = table.get(key, [Fraction(0)] * self.n)
        vec[k] = sign * to_fraction(value)
        table[key] = vec
        return LieAlgebra(self.names, table, self.name)

    def is_abelian(self) -> bool:
        return not self.brackets

    # -- forms ----------------------------------------------------------
    def zero_form(self) -> Form:
        return Form(self.n)

    def form(self, *gens, coeff=1) -> Form:
        """``coeff * xi^{g1} ^ xi^{g2} ^ ...`` by generator names or indices."""
        return Form.monomial(self.n, [self.index(g) for g in gens], coeff)

    def d_generator(self, k: int) -> Form:
        return Form(self.n, {(i, j): -v[k] for (i, j), v in self.brackets.items() if v[k]})

    def d_monomial(self, mono: Monomial) -> Form:
        cached = self._d_cache.get(mono)
        if cached is not None:
            return cached
        out = Form(self.n)
        for s, i in enumerate(mono):
            left = Form(self.n, {mono[:s]: 1})
            right = Form(self.n, {mono[s + 1 :]: 1})
            term = left.wedge(self.d_generator(i)).wedge(right)
            out = out - term if s % 2 else out + term
        self._d_cache[mono] = out
        return out

    def format_form(self, alpha: Form) -> str:
        return format_form(alpha, self.names)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.names == other.names and self.brackets == other.brackets

    def __hash__(self) -> int:
        return hash((self.names, tuple(self.brackets.items())))

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name or ','.join(self.names)})"


def sl2() -> LieAlgebra:
    return LieAlgebra(
        ["e", "f", "h"],
        {("e", "f"): {"h": 1}, ("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}},
        name="sl2",
    )


def heisenberg3() -> LieAlgebra:
    return LieAlgebra(["x", "y", "z"], {("x", "y"): {"z": 1}}, name="heisenberg3")


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra([f"x{i + 1}" for i in range(n)], {}, name=f"abelian{n}")


def ce_differential(g: LieAlgebra, alpha: Form) -> Form:
    if alpha.n != g.n:
        raise ShapeError("form over a different algebra")
    out: dict[Monomial, Fraction] = {}
    for mono, c in alpha.terms.items():
        for m, x in g.d_monomial(mono).terms.items():
            out[m] = out.get(m, 0) + c * x
    return Form(g.n, out)


@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    triple: tuple[str, str, str] | None = None
    jacobiator: tuple[Fraction, ...] | None = None
    d_squared_witness: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def jacobi_check(g: LieAlgebra) -> JacobiReport:
    """First triple violating the Jacobi identity, or confirmation that d^2 = 0."""
    for i, j, k in combinations(range(g.n), 3):
        x, y, z = g.basis_vector(i), g.basis_vector(j), g.basis_vector(k)
        jac = [
            a + b + c
            for a, b, c in zip(
                g.bracket(g.bracket(x, y), z), g.bracket(g.bracket(y, z), x), g.bracket(g.bracket(z, x), y)
            )
        ]
        if any(jac):
            dd = None
            for m in range(g.n):
                if not ce_differential(g, g.d_generator(m)).is_zero():
                    dd = g.names[m]
                    break
            return JacobiReport(False, (g.names[i], g.names[j], g.names[k]), tuple(jac), dd)
    for m in range(g.n):
        if not ce_differential(g, g.d_generator(m)).is_zero():
            raise AssertionError("Jacobi holds but d^2 != 0")
    return JacobiReport(True)


class EForm:
    """E-valued form: ``sum_I xi^I (x) v_I`` with ``v_I`` a vector of E."""

    __slots__ = ("n", "space", "terms")

    def __init__(self, n: int, space: GradedVectorSpace, terms: Mapping[Monomial, Sequence] | None = None):
        self.n = n
        self.space = space
        clean = {}
        for mono, vec in (terms or {}).items():
            vec = tuple(to_fraction(x) for x in vec)
            if len(vec) != space.dim:
                raise ShapeError("vector length does not match the bundle")
            if any(vec):
                clean[tuple(mono)] = vec
        self.terms = clean

    @classmethod
    def basis(cls, n: int, space: GradedVectorSpace, mono: Monomial, j: int, coeff=1) -> "EForm":
        vec = [0] * space.dim
        vec[j] = coeff
        return cls(n, space, {tuple(mono): vec})

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> list[int]:
        ds = set()
        for mono, vec in self.terms.items():
            for j, x in enumerate(vec):
                if x:
                    ds.add(len(mono) + self.space.degrees[j])
        return sorted(ds)

    def degree(self) -> int | None:
        ds = self.degrees()
        return ds[0] if len(ds) == 1 else None

    def _check(self, other: "EForm"):
        if other.space != self.space or other.n != self.n:
            raise ShapeError("E-valued forms over different bundles")

    def __add__(self, other: "EForm") -> "EForm":
        self._check(other)
        terms = {m: list(v) for m, v in self.terms.items()}
        for m, v in other.terms.items():
            if m in terms:
                terms[m] = [a + b for a, b in zip(terms[m], v)]
            else:
                terms[m] = list(v)
        return EForm(self.n, self.space, terms)

    def __neg__(self) -> "EForm":
        return EForm(self.n, self.space, {m: [-x for x in v] for m, v in self.terms.items()})

    def __sub__(self, other: "EForm") -> "EForm":
        return self + (-other)

    def scale(self, c) -> "EForm":
        c = to_fraction(c)
        return EForm(self.n, self.space, {m: [c * x for x in v] for m, v in self.terms.items()})

    def wedge_left(self, alpha: Form) -> "EForm":
        """``alpha ^ self``."""
        out: dict[Monomial, list[Fraction]] = {}
        for a, x in alpha.terms.items():
            for b, vec in self.terms.items():
                s, m = wedge_monomials(a, b)
                if s:
                    acc = out.setdefault(m, [Fraction(0)] * self.space.dim)
                    c = x if s > 0 else -x
                    for j, v in enumerate(vec):
                        if v:
                            acc[j] += c * v
        return EForm(self.n, self.space, out)

    def coordinates(self, basis: Sequence[tuple[Monomial, int]]) -> list[Fraction]:
        return [self.terms.get(m, ())[j] if m in self.terms else Fraction(0) for m, j in basis]

    def __eq__(self, other) -> bool:
        if not isinstance(other, EForm):
            return NotImplemented
        return self.n == other.n and self.space == other.space and self.terms == other.terms

    def __repr__(self) -> str:
        parts = []
        for m in sorted(self.terms, key=lambda m: (len(m), m)):
            for j, x in enumerate(self.terms[m]):
                if x:
                    parts.append(f"{format_fraction(x)}*xi{list(m)}*{self.space.names[j]}")
        return "EForm(" + (" + ".join(parts) or "0") + ")"


def _poly_trim(coeffs: list, zero) -> tuple:
    while coeffs and coeffs[-1] == zero:
        coeffs.pop()
    return tuple(coeffs)


class TForm:
    """Form on A x TI: ``xi0(t) + tdot * xi1(t)`` with polynomial dependence on t.

    ``xi0[k]`` and ``xi1[k]`` are the coefficients of ``t^k``; ``tdot`` sits to
    the left of ``xi1``.
    """

    __slots__ = ("n", "xi0", "xi1")

    def __init__(self, n: int, xi0: Sequence[Form] = (), xi1: Sequence[Form] = ()):
        self.n = n
        zero = Form(n)
        self.xi0 = _poly_trim(list(xi0), zero)
        self.xi1 = _poly_trim(list(xi1), zero)

    def at(self, t) -> Form:
        """``xi0(t)``."""
        t = to_fraction(t)
        out = Form(self.n)
        for k, c in enumerate(self.xi0):
            out = out + c.scale(t**k)
        return out

    def __add__(self, other: "TForm") -> "TForm":
        def padd(p, q):
            m = max(len(p), len(q))
            z = Form(self.n)
            return [(p[k] if k < len(p) else z) + (q[k] if k < len(q) else z) for k in range(m)]

        return TForm(self.n, padd(self.xi0, other.xi0), padd(self.xi1, other.xi1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TForm):
            return NotImplemented
        return (self.n, self.xi0, self.xi1) == (other.n, other.xi0, other.xi1)

    def __repr__(self) -> str:
        return f"TForm(xi0={list(self.xi0)}, xi1={list(self.xi1)})"


def d_product(g: LieAlgebra, xi: TForm) -> TForm:
    """Differential of A x TI: ``d_A + tdot d/dt`` (tdot placed on the left)."""
    xi0 = [ce_differential(g, c) for c in xi.xi0]
    deriv = [xi.xi0[k].scale(k) for k in range(1, len(xi.xi0))]
    m = max(len(deriv), len(xi.xi1))
    z = Form(g.n)
    xi1 = [
        (deriv[k] if k < len(deriv) else z) - (ce_differential(g, xi.xi1[k]) if k < len(xi.xi1) else z)
        for k in range(m)
    ]
    return TForm(g.n, xi0, xi1)


def berezin_integral(xi: TForm) -> Form:
    """``int_0^1 xi1(t) dt``."""
    out = Form(xi.n)
    for k, c in enumerate(xi.xi1):
        out = out + c.scale(Fraction(1, k + 1))
    return out


class Metric:
    """Positive-definite symmetric form on each degree of a graded space."""

    def __init__(self, space: GradedVectorSpace, blocks: Mapping[int, Mat]):
        self.space = space
        self.blocks = {}
        for d in space.support():
            if d not in blocks:
                raise ContractError(f"metric missing on degree {d}")
            b = blocks[d]
            r = space.rank(d)
            if b.shape != (r, r):
                raise ShapeError(f"metric block on degree {d} has shape {b.shape}")
            if b != b.T:
                raise ContractError(f"metric block on degree {d} is not symmetric")
            for k in range(1, r + 1):
                if b.submatrix(range(k), range(k)).det() <= 0:
                    raise ContractError(f"metric block on degree {d} is not positive-definite (minor {k})")
            self.blocks[d] = b
        extra = set(blocks) - set(self.blocks)
        if extra:
            raise ShapeError(f"metric given on empty degrees {sorted(extra)}")

    @classmethod
    def identity(cls, space: GradedVectorSpace) -> "Metric":
        return cls(space, {d: Mat.identity(space.rank(d)) for d in space.support()})

    def matrix(self) -> Mat:
        rows = [[Fraction(0)] * self.space.dim for _ in range(self.space.dim)]
        for d, b in self.blocks.items():
            idx = self.space.indices(d)
            for a, row in enumerate(b.rows()):
                for c, x in enumerate(row):
                    rows[idx[a]][idx[c]] = x
        return Mat(rows, self.space.dim, self.space.dim)

    def interpolate(self, other: "Metric", r) -> "Metric":
        r = to_fraction(r)
        return Metric(self.space, {d: b.scale(1 - r) + other.blocks[d].scale(r) for d, b in self.blocks.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Metric):
            return NotImplemented
        return self.space == other.space and self.blocks == other.blocks
