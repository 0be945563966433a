"""Cohomology of modules and the tensor, sum and dual constructions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ContractError, NoSolution, ShapeError, StructureError
from .graded import GradedVectorSpace
from .liealg import EForm, Form, LieAlgebra, Monomial, monomials, wedge_monomials
from .linalg import Mat
from .repmod import AModule, ModuleMorphism, OpForm, apply, trivial_module


def _reduce(vec: list[Fraction], echelon: Sequence[tuple[tuple[Fraction, ...], int]]) -> list[Fraction]:
    """Subtract the echelon rows (pivot normalised to 1) at their pivots."""
    v = list(vec)
    for row, p in echelon:
        c = v[p]
        if c:
            v = [a - c * b for a, b in zip(v, row)]
    return v


class CochainComplex:
    """The complex ``(Gamma(B), Q)`` split by total degree.

    ``basis(k)`` lists pairs ``(I, j)`` meaning ``xi^I (x) generator_j`` with
    ``|I| + deg_j = k``; ``differential(k)`` is the matrix of ``Q: C^k -> C^{k+1}``.
    """

    def __init__(self, module: AModule):
        self.module = module
        self.g = module.g
        gens = module.generators
        n = self.g.n
        self._basis: dict[int, list[tuple[Monomial, int]]] = {}
        for mono in monomials(n):
            for j, d in enumerate(gens.degrees):
                self._basis.setdefault(len(mono) + d, []).append((mono, j))
        for k in self._basis:
            self._basis[k].sort(key=lambda mj: (mj[1], len(mj[0]), mj[0]))
        self._index = {k: {b: i for i, b in enumerate(bs)} for k, bs in self._basis.items()}
        self._diff: dict[int, Mat] = {}
        D = module.to_superconnection()
        self._D = D
        for k in self.degrees():
            cols = [self.coordinates(k + 1, apply(D, self.basis_form(k, i))) for i in range(self.dim(k))]
            self._diff[k] = Mat.from_columns(cols, self.dim(k + 1))

    def degrees(self) -> list[int]:
        return sorted(self._basis)

    def dim(self, k: int) -> int:
        return len(self._basis.get(k, ()))

    def basis(self, k: int) -> list[tuple[Monomial, int]]:
        return list(self._basis.get(k, ()))

    def basis_form(self, k: int, i: int) -> EForm:
        mono, j = self._basis[k][i]
        return EForm.basis(self.g.n, self.module.generators, mono, j)

    def to_eform(self, k: int, vec: Sequence) -> EForm:
        terms: dict[Monomial, list] = {}
        for (mono, j), x in zip(self._basis.get(k, ()), vec):
            if x:
                terms.setdefault(mono, [0] * self.module.generators.dim)[j] = x
        return EForm(self.g.n, self.module.generators, terms)

    def coordinates(self, k: int, w: EForm) -> list[Fraction]:
        """Coordinates of ``w`` in degree ``k``; raises if ``w`` has other degrees."""
        out = [Fraction(0)] * self.dim(k)
        idx = self._index.get(k, {})
        for mono, vec in w.terms.items():
            for j, x in enumerate(vec):
                if x:
                    pos = idx.get((mono, j))
                    if pos is None:
                        raise ShapeError(f"section has a component outside degree {k}")
                    out[pos] = x
        return out

    def differential(self, k: int) -> Mat:
        if k in self._diff:
            return self._diff[k]
        return Mat.zeros(self.dim(k + 1), self.dim(k))

    def check(self) -> int | None:
        """First degree ``k`` with ``Q_{k+1} Q_k != 0``, or None."""
        for k in self.degrees():
            if self.dim(k + 2) and self.dim(k) and not (self.differential(k + 1) @ self.differential(k)).is_zero():
                return k
        return None

    def euler_characteristic(self) -> int:
        return sum((-1) ** (k % 2) * self.dim(k) for k in self.degrees())


@dataclass(frozen=True)
class CohomologyClass:
    """Class of a cocycle; ``representative`` is reduced against the coboundaries, so it is canonical."""

    complex: CochainComplex
    degree: int
    representative: tuple[Fraction, ...]
    coboundaries: tuple[tuple[Fraction, ...], ...]

    def eform(self) -> EForm:
        return self.complex.to_eform(self.degree, self.representative)

    def is_zero(self) -> bool:
        return not any(self.representative)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        return (
            _same_complex(self.complex, other.complex)
            and self.degree == other.degree
            and self.representative == other.representative
        )

    def __hash__(self):
        return hash((self.degree, self.representative))


def _module_of(cx):
    return getattr(cx, "module", None)


def _same_complex(a, b) -> bool:
    if a is b:
        return True
    ma, mb = _module_of(a), _module_of(b)
    return ma is not None and ma == mb


@dataclass(frozen=True)
class CohomologyGroup:
    degree: int
    betti: int
    classes: tuple[CohomologyClass, ...]


def _echelon_basis(vectors: Sequence[Sequence[Fraction]], dim: int) -> list[tuple[tuple[Fraction, ...], int]]:
    if not vectors:
        return []
    rows, pivots = Mat(vectors, len(vectors), dim).echelon()
    return [(tuple(Fraction(x, row[p]) for x in row), p) for row, p in zip(rows, pivots)]


class Cohomology:
    """Exact cohomology of a module, degree by degree."""

    def __init__(self, module):
        cx = CochainComplex(module) if isinstance(module, AModule) else module
        bad = cx.check()
        if bad is not None:
            B = _module_of(cx)
            witness = f", generator {B.square_zero_witness()}" if B is not None else ""
            raise StructureError(f"Q^2 != 0 (degree {bad}{witness})")
        self.complex = cx
        self._image: dict[int, list[tuple[tuple[Fraction, ...], int]]] = {}
        self.groups: dict[int, CohomologyGroup] = {}
        for k in cx.degrees():
            self.groups[k] = self._group(k)

    def image_echelon(self, k: int):
        if k not in self._image:
            prev = self.complex.differential(k - 1)
            cols = prev.column_space() if self.complex.dim(k - 1) else []
            self._image[k] = _echelon_basis(cols, self.complex.dim(k))
        return self._image[k]

    def _group(self, k: int) -> CohomologyGroup:
        cx = self.complex
        dim = cx.dim(k)
        kernel = cx.differential(k).nullspace() if cx.dim(k + 1) else [
            tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)
        ]
        image = self.image_echelon(k)
        span = list(image)
        reps = []
        for z in kernel:
            r = _reduce(list(z), span)
            if any(r):
                p = next(i for i, x in enumerate(r) if x)
                span.append((tuple(x / r[p] for x in r), p))
                span = sorted(span, key=lambda rp: rp[1])
                span = _echelon_basis([row for row, _ in span], dim)
                reps.append(tuple(_reduce(list(z), image)))
        cob = tuple(row for row, _ in image)
        classes = tuple(CohomologyClass(cx, k, rep, cob) for rep in reps)
        return CohomologyGroup(k, len(classes), classes)

    def betti(self) -> dict[int, int]:
        return {k: grp.betti for k, grp in self.groups.items()}

    def betti_range(self, lo: int, hi: int) -> list[int]:
        return [self.groups[k].betti if k in self.groups else 0 for k in range(lo, hi + 1)]

    def class_of(self, w: EForm | Sequence, degree: int | None = None) -> CohomologyClass:
        """Class of a cocycle; ``degree`` is required for coordinate input."""
        cx = self.complex
        if isinstance(w, EForm):
            if degree is None:
                degree = w.degree()
                if degree is None:
                    if w.is_zero():
                        raise ContractError("degree of the zero section is ambiguous")
                    raise ContractError("class of a nonhomogeneous section")
            vec = cx.coordinates(degree, w)
        else:
            vec = [Fraction(x) for x in w]
        if cx.dim(degree + 1) and any(cx.differential(degree).apply(vec)):
            raise ContractError("not a cocycle")
        image = self.image_echelon(degree)
        return CohomologyClass(cx, degree, tuple(_reduce(vec, image)), tuple(row for row, _ in image))

    def class_coordinates(self, c: CohomologyClass) -> tuple[Fraction, ...]:
        """Coordinates of a class in the basis of ``groups[degree].classes``."""
        grp = self.groups.get(c.degree)
        if grp is None or not grp.classes:
            return ()
        basis = [cl.representative for cl in grp.classes]
        m = Mat.from_columns(basis, len(c.representative))
        return m.solve(c.representative)

    def primitive(self, w: EForm, degree: int | None = None) -> EForm | None:
        """Some ``nu`` with ``Q nu = w``, or None when the class is nonzero."""
        cx = self.complex
        if degree is None:
            degree = w.degree()
        if degree is None:
            if w.is_zero():
                return EForm(cx.g.n, cx.module.generators)
            raise ContractError("primitive of a nonhomogeneous section; split it by degree first")
        x = self.primitive_vector(degree, cx.coordinates(degree, w))
        return None if x is None else cx.to_eform(degree - 1, x)

    def primitive_vector(self, degree: int, vec: Sequence) -> tuple[Fraction, ...] | None:
        cx = self.complex
        vec = [Fraction(x) for x in vec]
        if cx.dim(degree + 1) and any(cx.differential(degree).apply(vec)):
            raise ContractError("is_exact needs a cocycle")
        if not any(vec):
            return (Fraction(0),) * cx.dim(degree - 1)
        if not cx.dim(degree - 1):
            return None
        try:
            return cx.differential(degree - 1).solve(vec)
        except NoSolution:
            return None


def cohomology(B: AModule) -> list[CohomologyGroup]:
    """Groups ``H^k(A; B)`` for every degree where the complex is nonzero."""
    H = Cohomology(B)
    return [H.groups[k] for k in sorted(H.groups)]


def betti_numbers(B: AModule) -> dict[int, int]:
    return Cohomology(B).betti()


def is_exact(B: AModule, x: EForm, degree: int | None = None) -> EForm | None:
    """Primitive ``nu`` with ``Q nu = x`` or None; ``x`` must be a cocycle."""
    return Cohomology(B).primitive(x, degree)


# -- forms (trivial coefficients) ---------------------------------------------


_TRIVIAL_CACHE: dict = {}


def _trivial(g: LieAlgebra) -> tuple[AModule, Cohomology]:
    key = (g.names, tuple(g.brackets.items()))
    hit = _TRIVIAL_CACHE.get(key)
    if hit is None:
        B = trivial_module(g)
        hit = (B, Cohomology(B))
        _TRIVIAL_CACHE[key] = hit
    return hit


def _as_section(g: LieAlgebra, alpha: Form) -> EForm:
    B, _ = _trivial(g)
    return EForm(g.n, B.generators, {m: [c] for m, c in alpha.terms.items()})


def form_primitive(g: LieAlgebra, alpha: Form) -> Form | None:
    """``nu`` with ``d_A nu = alpha`` (solved per homogeneous degree), or None."""
    _, H = _trivial(g)
    out = Form(g.n)
    for p in alpha.degrees():
        part = alpha.component(p)
        nu = H.primitive(_as_section(g, part), p)
        if nu is None:
            return None
        out = out + Form(g.n, {m: v[0] for m, v in nu.terms.items()})
    return out


def form_class(g: LieAlgebra, alpha: Form) -> dict[int, CohomologyClass]:
    """Class of each homogeneous component of a closed form."""
    _, H = _trivial(g)
    return {p: H.class_of(_as_section(g, alpha.component(p)), p) for p in alpha.degrees()}


def form_cohomology(g: LieAlgebra) -> Cohomology:
    return _trivial(g)[1]


# -- constructions --------------------------------------------------------------


def _check_base(B1: AModule, B2: AModule):
    if B1.g != B2.g:
        raise ShapeError("modules over different Lie algebras")


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def tensor(B1: AModule, B2: AModule) -> AModule:
    """``Q(b1 (x) b2) = (Q b1) (x) b2 + (-1)^{|b1|} b1 (x) Q b2`` on generators ``a*b``."""
    _check_base(B1, B2)
    g = B1.g
    S1, S2 = B1.generators, B2.generators
    space = GradedVectorSpace(
        (f"{a}*{b}", da + db) for a, da in S1.generators() for b, db in S2.generators()
    )
    idx = {(a, b): space.index(f"{S1.names[a]}*{S2.names[b]}") for a in range(S1.dim) for b in range(S2.dim)}
    op1, op2 = B1.operator, B2.operator
    action = {}
    for a, da in enumerate(S1.degrees):
        for b, db in enumerate(S2.degrees):
            terms: dict[Monomial, list[Fraction]] = {}
            for mono, m in op1.comps.items():
                for a2 in range(S1.dim):
                    x = m[a2, a]
                    if x:
                        terms.setdefault(mono, [Fraction(0)] * space.dim)[idx[(a2, b)]] += x
            for mono, m in op2.comps.items():
                s = _sign(da) * _sign(da * len(mono))
                for b2 in range(S2.dim):
                    x = m[b2, b]
                    if x:
                        terms.setdefault(mono, [Fraction(0)] * space.dim)[idx[(a, b2)]] += s * x
            action[space.names[idx[(a, b)]]] = EForm(g.n, space, terms)
    return AModule(g, space, action)


def koszul_swap(B1: AModule, B2: AModule, T12: AModule | None = None, T21: AModule | None = None) -> ModuleMorphism:
    """``b1 (x) b2 -> (-1)^{|b1||b2|} b2 (x) b1``."""
    T12 = T12 or tensor(B1, B2)
    T21 = T21 or tensor(B2, B1)
    S, T = T12.generators, T21.generators
    rows = [[0] * S.dim for _ in range(T.dim)]
    for a, da in B1.generators.generators():
        for b, db in B2.generators.generators():
            rows[T.index(f"{b}*{a}")][S.index(f"{a}*{b}")] = _sign(da * db)
    return ModuleMorphism(T12, T21, OpForm.constant(B1.g, S, T, Mat(rows)))


@dataclass(frozen=True)
class DirectSum:
    module: AModule
    inclusions: tuple[ModuleMorphism, ModuleMorphism]
    projections: tuple[ModuleMorphism, ModuleMorphism]


def direct_sum_data(B1: AModule, B2: AModule) -> DirectSum:
    _check_base(B1, B2)
    g = B1.g
    n1, n2 = B1.generators.names, B2.generators.names
    clash = set(n1) & set(n2)
    p1, p2 = ("1.", "2.") if clash else ("", "")
    space = GradedVectorSpace(
        [(p1 + x, d) for x, d in B1.generators.generators()] + [(p2 + x, d) for x, d in B2.generators.generators()]
    )

    def embed(B, prefix):
        rows = [[0] * B.generators.dim for _ in range(space.dim)]
        for j, x in enumerate(B.generators.names):
            rows[space.index(prefix + x)][j] = 1
        return Mat(rows, space.dim, B.generators.dim)

    i1, i2 = embed(B1, p1), embed(B2, p2)
    comps = {}
    for mono in set(B1.operator.comps) | set(B2.operator.comps):
        comps[mono] = i1 @ B1.operator.component(mono) @ i1.T + i2 @ B2.operator.component(mono) @ i2.T
    S = AModule(g, space, OpForm(g, space, space, 1, comps))
    incl = (
        ModuleMorphism(B1, S, OpForm.constant(g, B1.generators, space, i1)),
        ModuleMorphism(B2, S, OpForm.constant(g, B2.generators, space, i2)),
    )
    proj = (
        ModuleMorphism(S, B1, OpForm.constant(g, space, B1.generators, i1.T)),
        ModuleMorphism(S, B2, OpForm.constant(g, space, B2.generators, i2.T)),
    )
    return DirectSum(S, incl, proj)


def direct_sum(B1: AModule, B2: AModule) -> AModule:
    """Block-diagonal ``Q``; colliding generator names get ``1.``/``2.`` prefixes."""
    return direct_sum_data(B1, B2).module


def zero_module(g: LieAlgebra) -> AModule:
    space = GradedVectorSpace([])
    return AModule(g, space, OpForm.zero(g, space, space, 1))


def _dual_name(x: str) -> str:
    return f"{x}^*"


def _dual_pairs(Bd: GradedVectorSpace, B: GradedVectorSpace) -> dict[int, int]:
    """Dual generator index -> base generator index."""
    out = {}
    for a, x in enumerate(Bd.names):
        if not x.endswith("^*"):
            raise ShapeError(f"{x!r} is not a dual generator")
        base = B.index(x[:-2])
        if Bd.degrees[a] != -B.degrees[base]:
            raise ShapeError(f"{x!r} does not have the negated degree")
        out[a] = base
    if len(out) != B.dim:
        raise ShapeError("dual generator set does not match")
    return out


def pairing(Bd: GradedVectorSpace, B: GradedVectorSpace, b: EForm, beta: EForm) -> Form:
    """``<alpha e*, beta f> = (-1)^{|e*||beta|} alpha ^ beta <e*, f>`` extended bilinearly."""
    if b.space != Bd or beta.space != B:
        raise ShapeError("pairing arguments live on other bundles")
    pairs = _dual_pairs(Bd, B)
    n = b.n
    out: dict[Monomial, Fraction] = {}
    for ma, va in b.terms.items():
        for mb, vb in beta.terms.items():
            s, m = wedge_monomials(ma, mb)
            if not s:
                continue
            for a, x in enumerate(va):
                if not x:
                    continue
                y = vb[pairs[a]]
                if y:
                    sign = s * _sign(Bd.degrees[a] * len(mb))
                    out[m] = out.get(m, 0) + sign * x * y
    return Form(n, out)


def dual(B: AModule) -> AModule:
    """Generators ``x^*`` in degree ``-deg x``; ``Q*`` is read off from

    ``d_A <b, beta> = <Q* b, beta> + (-1)^{|b|} <b, Q beta>``

    on generator pairs, where ``<b, beta>`` is constant.
    """
    g = B.g
    S = B.generators
    Sd = GradedVectorSpace((_dual_name(x), -d) for x, d in S.generators())
    action = {}
    for a, xa in enumerate(Sd.names):
        da = Sd.degrees[a]
        ea = EForm.basis(g.n, Sd, (), a)
        terms: dict[Monomial, list[Fraction]] = {}
        for j, xj in enumerate(S.names):
            rhs = pairing(Sd, S, ea, B.Q(xj))
            for mono, c in rhs.terms.items():
                terms.setdefault(mono, [Fraction(0)] * Sd.dim)[Sd.index(_dual_name(xj))] = -_sign(da) * c
        action[xa] = EForm(g.n, Sd, terms)
    return AModule(g, Sd, action)


def dual_residual(Bd: AModule, B: AModule, b: EForm, beta: EForm) -> Form:
    """``d_A<b,beta> - <Q*b,beta> - (-1)^{|b|}<b,Q beta>`` for homogeneous ``b``."""
    from .liealg import ce_differential

    p = b.degree()
    if p is None:
        raise ContractError("dual residual needs a homogeneous first argument")
    S, Sd = B.generators, Bd.generators
    lhs = ce_differential(B.g, pairing(Sd, S, b, beta))
    return lhs - pairing(Sd, S, Bd.apply(b), beta) - pairing(Sd, S, b, B.apply(beta)).scale(_sign(p))


def double_dual_map(B: AModule, Bdd: AModule | None = None) -> ModuleMorphism:
    """Canonical ``B -> B**``, ``x -> (-1)^{|x|} x**``."""
    Bdd = Bdd or dual(dual(B))
    S, T = B.generators, Bdd.generators
    rows = [[0] * S.dim for _ in range(T.dim)]
    for j, (x, d) in enumerate(S.generators()):
        rows[T.index(_dual_name(_dual_name(x)))][j] = _sign(d)
    return ModuleMorphism(B, Bdd, OpForm.constant(B.g, S, T, Mat(rows)))


def cohomology_pairing(b: CohomologyClass, beta: CohomologyClass) -> CohomologyClass:
    """Class of ``<b, beta>`` in ``H(A)``; independent of representatives."""
    Bd, B = b.complex.module, beta.complex.module
    if Bd.g != B.g:
        raise ShapeError("classes over different Lie algebras")
    try:
        _dual_pairs(Bd.generators, B.generators)
    except ShapeError as exc:
        raise ShapeError(f"first class must come from the dual module: {exc}") from None
    g = B.g
    val = pairing(Bd.generators, B.generators, b.eform(), beta.eform())
    _, H = _trivial(g)
    deg = b.degree + beta.degree
    if deg < 0 or deg > g.n:
        return H.class_of([Fraction(0)] * H.complex.dim(deg), deg) if H.complex.dim(deg) else _zero_class(H, deg)
    return H.class_of(_as_section(g, val), deg)


def _zero_class(H: Cohomology, deg: int) -> CohomologyClass:
    return CohomologyClass(H.complex, deg, (), ())
