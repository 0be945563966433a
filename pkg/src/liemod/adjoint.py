"""Derivations of the Chevalley-Eilenberg algebra and the adjoint module.

A degree-k derivation of ``Lambda g*`` is fixed by its values on the
generators ``xi^i``, which are (k+1)-forms; so derivations of degree k are
``Lambda^{k+1} g* (x) g``.  The graded commutator with ``d_A`` makes them a
complex: the deformation complex, isomorphic to the adjoint module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .errors import ContractError, ShapeError, StructureError
from .graded import GradedVectorSpace
from .liealg import EForm, Form, LieAlgebra, Monomial, ce_differential, monomials
from .linalg import Mat, to_fraction
from .modops import Cohomology, CohomologyClass
from .repmod import AModule


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


class Derivation:
    """Derivation of degree ``k``: ``images[i]`` is the value on ``xi^i``."""

    __slots__ = ("n", "degree", "images")

    def __init__(self, n: int, degree: int, images: Sequence[Form]):
        if len(images) != n:
            raise ShapeError(f"a derivation needs {n} generator images")
        for i, im in enumerate(images):
            if im.n != n:
                raise ShapeError("image over a different algebra")
            if any(len(m) != degree + 1 for m in im.terms):
                raise ShapeError(f"image of xi^{i} is not a {degree + 1}-form")
        self.n = n
        self.degree = degree
        self.images = tuple(images)

    @classmethod
    def zero(cls, n: int, degree: int) -> "Derivation":
        return cls(n, degree, [Form(n)] * n)

    @classmethod
    def from_coefficients(cls, n: int, degree: int, coeffs: Mapping[tuple[Monomial, int], object]) -> "Derivation":
        """From ``{(I, j): c}`` meaning ``c xi^I iota_j``."""
        terms: list[dict] = [{} for _ in range(n)]
        for (mono, j), c in coeffs.items():
            terms[j][tuple(mono)] = terms[j].get(tuple(mono), 0) + to_fraction(c)
        return cls(n, degree, [Form(n, t) for t in terms])

    def coefficients(self) -> dict[tuple[Monomial, int], Fraction]:
        return {(m, j): c for j, im in enumerate(self.images) for m, c in im.terms.items()}

    def __call__(self, alpha: Form) -> Form:
        """Extend as a graded derivation: sign ``(-1)^{k s}`` for the slot ``s``."""
        n, k = self.n, self.degree
        out = Form(n)
        for mono, c in alpha.terms.items():
            for s, i in enumerate(mono):
                left = Form(n, {mono[:s]: c * _sign(k * s)})
                right = Form(n, {mono[s + 1 :]: 1})
                out = out + left.wedge(self.images[i]).wedge(right)
        return out

    def _same(self, other: "Derivation"):
        if self.n != other.n or self.degree != other.degree:
            raise ShapeError("derivations of different degree")

    def __add__(self, other: "Derivation") -> "Derivation":
        self._same(other)
        return Derivation(self.n, self.degree, [a + b for a, b in zip(self.images, other.images)])

    def __neg__(self) -> "Derivation":
        return Derivation(self.n, self.degree, [-a for a in self.images])

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + (-other)

    def scale(self, c) -> "Derivation":
        return Derivation(self.n, self.degree, [a.scale(c) for a in self.images])

    def times(self, alpha: Form) -> "Derivation":
        """Left multiplication ``(alpha chi)(x) = alpha ^ chi(x)`` for homogeneous alpha."""
        p = alpha.degree()
        if p is None:
            if alpha.is_zero():
                return Derivation.zero(self.n, self.degree)
            raise ContractError("multiplier must be homogeneous")
        return Derivation(self.n, self.degree + p, [alpha.wedge(a) for a in self.images])

    def commutator(self, other: "Derivation") -> "Derivation":
        """``[chi, psi] = chi psi - (-1)^{kl} psi chi``."""
        k, l = self.degree, other.degree
        s = _sign(k * l)
        return Derivation(
            self.n,
            k + l,
            [self(other.images[i]) - other(self.images[i]).scale(s) for i in range(self.n)],
        )

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.images)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.n == other.n and self.images == other.images and (self.degree == other.degree or self.is_zero())

    def __hash__(self):
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Derivation(degree={self.degree}, images={list(self.images)})"


def d_derivation(g: LieAlgebra) -> Derivation:
    """``d_A`` itself as a degree-1 derivation."""
    return Derivation(g.n, 1, [g.d_generator(k) for k in range(g.n)])


def from_bracket(g: LieAlgebra, table: Mapping) -> Derivation:
    """Degree-1 derivation ``chi(xi^k) = -sum_{i<j} b^k_{ij} xi^i xi^j`` of a bracket table.

    ``table`` uses the same format as :class:`LieAlgebra` brackets; no Jacobi
    check is made.
    """
    b = LieAlgebra(g.names, table)
    return d_derivation(b)


def to_bracket(chi: Derivation, g: LieAlgebra) -> dict[tuple[str, str], dict[str, Fraction]]:
    if chi.degree != 1:
        raise ContractError("only degree-1 derivations encode a bracket")
    out = {}
    for k, im in enumerate(chi.images):
        for (i, j), c in im.terms.items():
            out.setdefault((g.names[i], g.names[j]), {})[g.names[k]] = -c
    return out


def contraction(g: LieAlgebra, X: Sequence) -> Derivation:
    """``iota_X`` of degree -1: ``iota_X xi^j = X^j``."""
    return Derivation(g.n, -1, [Form(g.n, {(): to_fraction(x)}) for x in X])


def lie_derivative(g: LieAlgebra, X: Sequence) -> Derivation:
    """``L_X = [d_A, iota_X]``."""
    return d_derivation(g).commutator(contraction(g, X))


def derived_bracket(chi: Derivation, vectors: Sequence[Sequence]) -> tuple[Fraction, ...]:
    """``Y`` with ``iota_Y = [[...[chi, iota_X1], ...], iota_X{k+1}]``."""
    k = chi.degree
    if k < 0:
        raise ContractError("derived brackets need a derivation of degree >= 0")
    if len(vectors) != k + 1:
        raise ShapeError(f"a degree-{k} derivation gives a {k + 1}-ary bracket")
    n = chi.n
    cur = chi
    for X in vectors:
        if len(X) != n:
            raise ShapeError("argument of the wrong dimension")
        cur = cur.commutator(Derivation(n, -1, [Form(n, {(): to_fraction(x)}) for x in X]))
    return tuple(im.coefficient(()) for im in cur.images)


def derived_bracket_table(chi: Derivation) -> dict[tuple[int, ...], tuple[Fraction, ...]]:
    """Values on increasing tuples of basis vectors."""
    n, k = chi.n, chi.degree
    basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return {
        idx: derived_bracket(chi, [basis[i] for i in idx])
        for idx in combinations(range(n), k + 1)
    }


# -- the deformation complex ----------------------------------------------------


class DeformationComplex:
    """Derivations of degree ``-1 .. n-1`` with differential ``[d_A, .]``."""

    module = None

    def __init__(self, g: LieAlgebra):
        self.g = g
        n = g.n
        self.dA = d_derivation(g)
        self._basis = {
            k: [(mono, j) for j in range(n) for mono in monomials(n, k + 1)] for k in range(-1, n)
        }
        self._index = {k: {b: i for i, b in enumerate(bs)} for k, bs in self._basis.items()}
        self._diff = {}
        for k in range(-1, n - 1):
            cols = [self.coordinates(k + 1, self.dA.commutator(self.element(k, i))) for i in range(self.dim(k))]
            self._diff[k] = Mat.from_columns(cols, self.dim(k + 1))

    def degrees(self) -> list[int]:
        return sorted(self._basis)

    def dim(self, k: int) -> int:
        return len(self._basis.get(k, ()))

    def basis(self, k: int):
        return list(self._basis.get(k, ()))

    def element(self, k: int, i: int) -> Derivation:
        mono, j = self._basis[k][i]
        return Derivation.from_coefficients(self.g.n, k, {(mono, j): 1})

    def to_derivation(self, k: int, vec: Sequence) -> Derivation:
        return Derivation.from_coefficients(
            self.g.n, k, {b: x for b, x in zip(self._basis[k], vec) if x}
        )

    def coordinates(self, k: int, chi: Derivation) -> list[Fraction]:
        if chi.degree != k and not chi.is_zero():
            raise ShapeError(f"derivation of degree {chi.degree}, expected {k}")
        out = [Fraction(0)] * self.dim(k)
        for b, c in chi.coefficients().items():
            out[self._index[k][b]] = c
        return out

    def differential(self, k: int) -> Mat:
        if k in self._diff:
            return self._diff[k]
        return Mat.zeros(self.dim(k + 1), self.dim(k))

    def check(self) -> int | None:
        for k in self.degrees():
            if self.dim(k + 2) and self.dim(k) and not (self.differential(k + 1) @ self.differential(k)).is_zero():
                return k
        return None


_DEF_CACHE: dict = {}


def deformation_cohomology(g: LieAlgebra) -> Cohomology:
    key = (g.names, tuple(g.brackets.items()))
    if key not in _DEF_CACHE:
        _DEF_CACHE[key] = Cohomology(DeformationComplex(g))
    return _DEF_CACHE[key]


def adjoint_module(g: LieAlgebra) -> AModule:
    """``T(A[1])``: generators ``iota_j`` in degree -1 with ``Q iota_j = L_{X_j}``."""
    n = g.n
    names = [f"i_{x}" for x in g.names]
    space = GradedVectorSpace((x, -1) for x in names)
    action = {}
    for j in range(n):
        L = lie_derivative(g, g.basis_vector(j))
        terms: dict[Monomial, list[Fraction]] = {}
        for k, im in enumerate(L.images):
            for mono, c in im.terms.items():
                terms.setdefault(mono, [Fraction(0)] * n)[space.index(names[k])] = c
        action[names[j]] = EForm(n, space, terms)
    return AModule(g, space, action)


def derivation_to_section(chi: Derivation, B: AModule) -> EForm:
    """``chi = sum_k chi(xi^k) iota_k`` as a section of the adjoint module."""
    terms: dict[Monomial, list[Fraction]] = {}
    for k, im in enumerate(chi.images):
        for mono, c in im.terms.items():
            terms.setdefault(mono, [Fraction(0)] * chi.n)[k] = c
    return EForm(chi.n, B.generators, terms)


def trivialize(g: LieAlgebra, chi: Derivation) -> Derivation | None:
    """``phi`` with ``[d_A, phi] = chi``, or None when the class of ``chi`` is nonzero."""
    dA = d_derivation(g)
    if not dA.commutator(chi).is_zero():
        raise ContractError("only cocycles can be trivialized")
    H = deformation_cohomology(g)
    k = chi.degree
    if k - 1 < -1:
        return None if not chi.is_zero() else Derivation.zero(g.n, k - 1)
    x = H.primitive_vector(k, H.complex.coordinates(k, chi))
    return None if x is None else H.complex.to_derivation(k - 1, x)


@dataclass
class FormalDeformation:
    """``d_A + sum_{i>=1} h^i chi_i`` truncated at the listed terms."""

    g: LieAlgebra
    terms: list[Derivation] = field(default_factory=list)

    def __post_init__(self):
        for i, chi in enumerate(self.terms, 1):
            if chi.n != self.g.n or (chi.degree != 1 and not chi.is_zero()):
                raise ShapeError(f"term {i} is not a degree-1 derivation")

    def _chi(self, i: int) -> Derivation:
        return self.terms[i - 1] if 1 <= i <= len(self.terms) else Derivation.zero(self.g.n, 1)

    def quadratic(self, m: int) -> Derivation:
        """``1/2 sum_{i+j=m, i,j>=1} [chi_i, chi_j]``."""
        out = Derivation.zero(self.g.n, 2)
        for i in range(1, m):
            out = out + self._chi(i).commutator(self._chi(m - i))
        return out.scale(Fraction(1, 2))

    def curvature(self, m: int) -> Derivation:
        """Coefficient of ``h^m`` in ``(d_A + sum chi_i h^i)^2``."""
        return d_derivation(self.g).commutator(self._chi(m)) + self.quadratic(m)

    def first_failure(self, order: int | None = None) -> int | None:
        order = len(self.terms) if order is None else order
        for m in range(1, order + 1):
            if not self.curvature(m).is_zero():
                return m
        return None


@dataclass
class DeformationStep:
    order: int
    defect: Derivation
    next_term: Derivation | None
    obstruction: CohomologyClass | None

    @property
    def extends(self) -> bool:
        return self.next_term is not None


def deformation_step(deformation: FormalDeformation) -> DeformationStep:
    """Next term ``chi_{k+1}`` with ``[d_A, chi_{k+1}] = -defect``, or the obstruction class."""
    g = deformation.g
    k = len(deformation.terms)
    bad = deformation.first_failure()
    if bad is not None:
        raise StructureError(f"deformation is not flat at order {bad}")
    defect = deformation.quadratic(k + 1)
    H = deformation_cohomology(g)
    cx = H.complex
    vec = cx.coordinates(2, defect) if cx.dim(2) else []
    if cx.dim(3) and any(cx.differential(2).apply(vec)):
        raise StructureError("defect is not a cocycle")
    if not cx.dim(2):
        return DeformationStep(k + 1, defect, Derivation.zero(g.n, 1), None)
    x = H.primitive_vector(2, [-v for v in vec])
    if x is None:
        return DeformationStep(k + 1, defect, None, H.class_of(vec, 2))
    return DeformationStep(k + 1, defect, cx.to_derivation(1, x), None)


def center_dimension(g: LieAlgebra) -> int:
    return len(g.center())
