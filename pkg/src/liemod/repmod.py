"""Superconnections, A-modules, gauge transformations and decompositions.

Over a point, ``Omega(A; E) = Lambda g* (x) E``.  An Omega(A)-linear operator
is stored as an :class:`OpForm` ``sum_I xi^I (x) M_I`` and acts by

    (xi^I (x) M)(xi^J (x) v) = (-1)^{|M||J|} xi^I ^ xi^J (x) M v,

where ``|M|`` is the parity of the endomorphism part.  A superconnection is
``d_A + omega`` with ``omega`` an odd OpForm; an A-module with a free
homogeneous generating set is the same data written on its generators.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ContractError, NoSolution, ShapeError
from .graded import GradedMap, GradedVectorSpace, matrix_supertrace
from .liealg import EForm, Form, LieAlgebra, Monomial, ce_differential, monomials, wedge_monomials
from .linalg import Mat


class OpForm:
    """Omega(A)-linear map ``Omega(A; source) -> Omega(A; target)`` of fixed parity."""

    __slots__ = ("g", "source", "target", "parity", "comps", "_hash")

    def __init__(
        self,
        g: LieAlgebra,
        source: GradedVectorSpace,
        target: GradedVectorSpace | None = None,
        parity: int = 0,
        comps: Mapping[Monomial, Mat] | None = None,
        check: bool = True,
    ):
        self.g = g
        self.source = source
        self.target = target if target is not None else source
        self.parity = parity % 2
        clean = {}
        for mono, m in (comps or {}).items():
            mono = tuple(mono)
            if m.shape != (self.target.dim, self.source.dim):
                raise ShapeError(f"component {mono} has shape {m.shape}")
            if m.is_zero():
                continue
            if check:
                want = (self.parity - len(mono)) % 2
                for i, j in m.nonzero_entries():
                    if (self.target.degrees[i] - self.source.degrees[j] - want) % 2:
                        raise ShapeError(
                            f"component {mono} entry ({self.target.names[i]}, {self.source.names[j]}) "
                            f"breaks parity {self.parity}"
                        )
            clean[mono] = m
        self.comps = dict(sorted(clean.items(), key=lambda kv: (len(kv[0]), kv[0])))
        self._hash = None

    @classmethod
    def identity(cls, g: LieAlgebra, space: GradedVectorSpace) -> "OpForm":
        return cls(g, space, space, 0, {(): Mat.identity(space.dim)})

    @classmethod
    def zero(cls, g, source, target=None, parity=0) -> "OpForm":
        return cls(g, source, target, parity, {})

    @classmethod
    def constant(cls, g, source, target, m: Mat, parity=0) -> "OpForm":
        return cls(g, source, target, parity, {(): m})

    # -- structure ------------------------------------------------------
    def is_endomorphism(self) -> bool:
        return self.source == self.target

    def is_zero(self) -> bool:
        return not self.comps

    def component(self, mono: Monomial) -> Mat:
        return self.comps.get(tuple(mono), Mat.zeros(self.target.dim, self.source.dim))

    def form_degree(self, p: int) -> dict[Monomial, Mat]:
        return {m: c for m, c in self.comps.items() if len(m) == p}

    def endo_degrees(self) -> set[int]:
        """Integer degrees ``|I| + deg(target) - deg(source)`` of all nonzero entries."""
        out = set()
        for mono, m in self.comps.items():
            for i, j in m.nonzero_entries():
                out.add(len(mono) + self.target.degrees[i] - self.source.degrees[j])
        return out

    def homogeneous_part(self, total_degree: int) -> "OpForm":
        comps = {}
        for mono, m in self.comps.items():
            rows = m.rows()
            keep = [
                [
                    x if len(mono) + self.target.degrees[i] - self.source.degrees[j] == total_degree else 0
                    for j, x in enumerate(row)
                ]
                for i, row in enumerate(rows)
            ]
            comps[mono] = Mat(keep, m.nrows, m.ncols)
        return OpForm(self.g, self.source, self.target, self.parity, comps, check=False)

    def _same(self, other: "OpForm"):
        if (self.source, self.target) != (other.source, other.target) or self.g.n != other.g.n:
            raise ShapeError("operators between different bundles")
        if self.parity != other.parity:
            raise ShapeError("cannot add operators of different parity")

    # -- linear structure -----------------------------------------------
    def __add__(self, other: "OpForm") -> "OpForm":
        self._same(other)
        comps = dict(self.comps)
        for m, c in other.comps.items():
            comps[m] = comps[m] + c if m in comps else c
        return OpForm(self.g, self.source, self.target, self.parity, comps, check=False)

    def __neg__(self) -> "OpForm":
        return OpForm(self.g, self.source, self.target, self.parity, {m: -c for m, c in self.comps.items()}, check=False)

    def __sub__(self, other: "OpForm") -> "OpForm":
        return self + (-other)

    def scale(self, c) -> "OpForm":
        return OpForm(self.g, self.source, self.target, self.parity, {m: x.scale(c) for m, x in self.comps.items()}, check=False)

    def __matmul__(self, other: "OpForm") -> "OpForm":
        """Composition ``self o other``."""
        if self.source != other.target:
            raise ShapeError("composition of operators with mismatched bundles")
        acc: dict[Monomial, Mat] = {}
        for a, m in self.comps.items():
            odd_m = (self.parity - len(a)) % 2
            for b, n in other.comps.items():
                s, k = wedge_monomials(a, b)
                if not s:
                    continue
                if odd_m and len(b) % 2:
                    s = -s
                p = m @ n
                if s < 0:
                    p = -p
                acc[k] = acc[k] + p if k in acc else p
        return OpForm(self.g, other.source, self.target, self.parity + other.parity, acc, check=False)

    def commutator(self, other: "OpForm") -> "OpForm":
        """Graded commutator by total parity."""
        a = self @ other
        b = other @ self
        return a + b if self.parity and other.parity else a - b

    def d_commutator(self) -> "OpForm":
        """``[d_A, self]``: the Chevalley-Eilenberg differential applied to the form coefficients."""
        acc: dict[Monomial, Mat] = {}
        for a, m in self.comps.items():
            for k, c in self.g.d_monomial(a).terms.items():
                p = m.scale(c)
                acc[k] = acc[k] + p if k in acc else p
        return OpForm(self.g, self.source, self.target, self.parity + 1, acc, check=False)

    def supertrace(self) -> Form:
        if not self.is_endomorphism():
            raise ShapeError("supertrace of a non-endomorphism")
        terms = {}
        for mono, m in self.comps.items():
            s = matrix_supertrace(self.source, m)
            if s:
                terms[mono] = s
        return Form(self.g.n, terms)

    def apply(self, w: EForm) -> EForm:
        if w.space != self.source:
            raise ShapeError("operator applied to a section of another bundle")
        out: dict[Monomial, list[Fraction]] = {}
        for a, m in self.comps.items():
            odd_m = (self.parity - len(a)) % 2
            for b, vec in w.terms.items():
                s, k = wedge_monomials(a, b)
                if not s:
                    continue
                if odd_m and len(b) % 2:
                    s = -s
                mv = m.apply(vec)
                acc = out.setdefault(k, [Fraction(0)] * self.target.dim)
                for i, x in enumerate(mv):
                    if x:
                        acc[i] += x if s > 0 else -x
        return EForm(self.g.n, self.target, out)

    def flatten(self) -> list[Fraction]:
        """Coordinates over all monomials, then row-major entries."""
        out = []
        for mono in monomials(self.g.n):
            m = self.comps.get(mono)
            if m is None:
                out.extend([Fraction(0)] * (self.target.dim * self.source.dim))
            else:
                for row in m.rows():
                    out.extend(row)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, OpForm):
            return NotImplemented
        if (self.source, self.target, self.g.n) != (other.source, other.target, other.g.n):
            return False
        if self.comps != other.comps:
            return False
        return self.parity == other.parity or not self.comps

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.source, self.target, tuple(self.comps.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"OpForm(parity={self.parity}, comps={self.comps})"


def invert_even(phi: OpForm) -> OpForm:
    """Inverse of an even operator whose form-degree-0 part is invertible."""
    if phi.parity:
        raise ContractError("only even operators are inverted")
    m0 = phi.component(())
    try:
        m0_inv = m0.inverse()
    except (ValueError, ShapeError):
        raise ContractError("form-degree-0 part is not invertible") from None
    g = phi.g
    c0 = OpForm(g, phi.target, phi.source, 0, {(): m0_inv})
    nil = c0 @ OpForm(g, phi.source, phi.target, 0, {m: c for m, c in phi.comps.items() if m}, check=False)
    inv = OpForm.identity(g, phi.source)
    power = OpForm.identity(g, phi.source)
    for _ in range(g.n):
        power = -(power @ nil)
        if power.is_zero():
            break
        inv = inv + power
    return inv @ c0


def conjugate(omega: OpForm, phi: OpForm, phi_inv: OpForm) -> OpForm:
    """Connection part of ``phi o (d_A + omega) o phi^{-1}``."""
    return phi @ phi_inv.d_commutator() + phi @ omega @ phi_inv


class Superconnection:
    """Operator ``d_A + omega`` on ``Omega(A; E)`` with ``omega`` odd.

    Homogeneous superconnections have ``omega_i`` (form degree ``i``) of
    endomorphism degree exactly ``1 - i``.  Pass ``strict=False`` for the
    nonhomogeneous odd operators arising as metric adjoints.
    """

    __slots__ = ("g", "bundle", "omega")

    def __init__(self, g: LieAlgebra, bundle: GradedVectorSpace, omega: OpForm | None = None, strict: bool = True):
        if omega is None:
            omega = OpForm.zero(g, bundle, bundle, 1)
        if omega.source != bundle or omega.target != bundle:
            raise ShapeError("connection form lives on another bundle")
        if omega.parity != 1 and not omega.is_zero():
            raise ShapeError("connection form must be odd")
        if omega.parity != 1:
            omega = OpForm.zero(g, bundle, bundle, 1)
        if strict:
            bad = omega.endo_degrees() - {1}
            if bad:
                raise ShapeError(f"superconnection has components of total degree {sorted(bad)}")
        self.g = g
        self.bundle = bundle
        self.omega = omega

    @classmethod
    def from_components(cls, g, bundle, comps: Mapping[Monomial, Mat | GradedMap], strict=True) -> "Superconnection":
        mats = {m: (c.to_matrix() if isinstance(c, GradedMap) else c) for m, c in comps.items()}
        return cls(g, bundle, OpForm(g, bundle, bundle, 1, mats), strict)

    @classmethod
    def from_representation(cls, g, bundle, matrices: Sequence[Mat]) -> "Superconnection":
        """``d_A + sum_i xi^i (x) rho(X_i)`` for a representation on ``bundle``."""
        return cls.from_components(g, bundle, {(i,): m for i, m in enumerate(matrices)})

    def is_homogeneous(self) -> bool:
        return self.omega.endo_degrees() <= {1}

    def components(self) -> dict[int, dict[Monomial, GradedMap]]:
        """``omega_i`` as graded maps of degree ``1 - i`` keyed by monomial."""
        if not self.is_homogeneous():
            raise ContractError("components by degree exist only for homogeneous superconnections")
        out: dict[int, dict[Monomial, GradedMap]] = {}
        for mono, m in self.omega.comps.items():
            out.setdefault(len(mono), {})[mono] = GradedMap.from_matrix(1 - len(mono), self.bundle, self.bundle, m)
        return out

    def support(self) -> list[int]:
        return sorted({len(m) for m in self.omega.comps})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Superconnection):
            return NotImplemented
        return self.bundle == other.bundle and self.g == other.g and self.omega == other.omega

    def __hash__(self):
        return hash((self.bundle, self.omega))

    def __repr__(self) -> str:
        return f"Superconnection(ranks={self.bundle.ranks()}, support={self.support()})"


def _check_section(space, w: EForm):
    if w.space != space:
        raise ShapeError("section of a different bundle")


def apply(D: Superconnection, w: EForm) -> EForm:
    """``D(w)`` through the Leibniz rule ``D(xi^J v) = (d xi^J) v + (-1)^{|J|} xi^J D(v)``."""
    _check_section(D.bundle, w)
    n, space = D.g.n, D.bundle
    out = EForm(n, space)
    for mono, vec in w.terms.items():
        out = out + EForm(n, space, {(): vec}).wedge_left(D.g.d_monomial(mono))
        dv: dict[Monomial, tuple] = {}
        for a, m in D.omega.comps.items():
            dv[a] = m.apply(vec)
        piece = EForm(n, space, dv).wedge_left(Form(n, {mono: -1 if len(mono) % 2 else 1}))
        out = out + piece
    return out


def square(D: Superconnection) -> OpForm:
    """Curvature ``F = D^2 = [d_A, omega] + omega^2``."""
    return D.omega.d_commutator() + D.omega @ D.omega


def is_flat(D: Superconnection) -> bool:
    return square(D).is_zero()


def induced_partial(D: Superconnection) -> GradedMap:
    """The form-degree-0 part ``omega_0``: the differential induced on E."""
    return GradedMap.from_matrix(1, D.bundle, D.bundle, D.omega.component(()))


def bracket(D0: Superconnection, D1: Superconnection) -> OpForm:
    """``[D0, D1] = D0 D1 + D1 D0`` (an Omega(A)-linear even operator)."""
    if D0.bundle != D1.bundle:
        raise ShapeError("superconnections on different bundles")
    w0, w1 = D0.omega, D1.omega
    return w0.d_commutator() + w1.d_commutator() + w0 @ w1 + w1 @ w0


class GaugeTransformation:
    """Unipotent degree-0 automorphism ``id + sum_{|I|>=1} xi^I (x) u_I`` of ``Omega(A; E)``.

    ``u_I`` has endomorphism degree ``-|I|``; the blocks of ``u_I`` between
    ``E_k`` and ``E_{k-i}`` are the maps ``sigma_{k,i}`` relating two
    splittings.
    """

    __slots__ = ("g", "bundle", "comps")

    def __init__(self, g: LieAlgebra, bundle: GradedVectorSpace, comps: Mapping[Monomial, Mat] | None = None):
        comps = {tuple(m): c for m, c in (comps or {}).items() if not c.is_zero()}
        if () in comps:
            raise ShapeError("gauge transformations have identity form-degree-0 part")
        op = OpForm(g, bundle, bundle, 0, comps)
        bad = op.endo_degrees() - {0}
        if bad:
            raise ShapeError(f"gauge component of total degree {sorted(bad)}")
        self.g = g
        self.bundle = bundle
        self.comps = op.comps

    @classmethod
    def identity(cls, g, bundle) -> "GaugeTransformation":
        return cls(g, bundle, {})

    @classmethod
    def from_opform(cls, op: OpForm) -> "GaugeTransformation":
        if not op.is_endomorphism() or op.component(()) != Mat.identity(op.source.dim):
            raise ContractError("operator is not unipotent")
        return cls(op.g, op.source, {m: c for m, c in op.comps.items() if m})

    def as_opform(self) -> OpForm:
        return OpForm(self.g, self.bundle, self.bundle, 0, {(): Mat.identity(self.bundle.dim), **self.comps})

    def blocks(self) -> dict[int, dict[Monomial, GradedMap]]:
        out: dict[int, dict[Monomial, GradedMap]] = {}
        for mono, m in self.comps.items():
            out.setdefault(len(mono), {})[mono] = GradedMap.from_matrix(-len(mono), self.bundle, self.bundle, m)
        return out

    def inverse(self) -> "GaugeTransformation":
        return GaugeTransformation.from_opform(invert_even(self.as_opform()))

    def __matmul__(self, other: "GaugeTransformation") -> "GaugeTransformation":
        return GaugeTransformation.from_opform(self.as_opform() @ other.as_opform())

    def is_identity(self) -> bool:
        return not self.comps

    def path(self, r) -> "GaugeTransformation":
        """``id + r (u - id)``; unipotent, hence invertible, for every r."""
        return GaugeTransformation(self.g, self.bundle, {m: c.scale(r) for m, c in self.comps.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaugeTransformation):
            return NotImplemented
        return self.bundle == other.bundle and self.comps == other.comps

    def __repr__(self) -> str:
        return f"GaugeTransformation(support={sorted({len(m) for m in self.comps})})"


def gauge_conjugate(D: Superconnection, u: GaugeTransformation) -> Superconnection:
    """``u^{-1} D u``."""
    if u.bundle != D.bundle:
        raise ShapeError("gauge transformation on another bundle")
    uu = u.as_opform()
    inv = invert_even(uu)
    return Superconnection(D.g, D.bundle, conjugate(D.omega, inv, uu), strict=D.is_homogeneous())


def conjugate_by(D: Superconnection, phi: OpForm) -> Superconnection:
    """``phi^{-1} D phi`` for any even invertible endomorphism ``phi``."""
    inv = invert_even(phi)
    return Superconnection(D.g, D.bundle, conjugate(D.omega, inv, phi), strict=D.is_homogeneous())


# -- modules ------------------------------------------------------------------


class AModule:
    """Free Omega(A)-module on homogeneous generators with a Leibniz operator Q.

    ``action[name]`` is ``Q(name)``, an E-valued form over the generator space
    of total degree ``deg(name) + 1``.
    """

    __slots__ = ("g", "generators", "operator")

    def __init__(self, g: LieAlgebra, generators: GradedVectorSpace, action: Mapping[str, EForm] | OpForm):
        self.g = g
        self.generators = generators
        if isinstance(action, OpForm):
            op = action
        else:
            comps: dict[Monomial, list[list[Fraction]]] = {}
            for name, w in action.items():
                j = generators.index(name)
                if w.space != generators:
                    raise ShapeError(f"Q({name}) is not a combination of the generators")
                for d in w.degrees():
                    if d != generators.degrees[j] + 1:
                        raise ShapeError(f"Q({name}) has a term of degree {d}, expected {generators.degrees[j] + 1}")
                for mono, vec in w.terms.items():
                    rows = comps.setdefault(mono, [[Fraction(0)] * generators.dim for _ in range(generators.dim)])
                    for i, x in enumerate(vec):
                        rows[i][j] = x
            op = OpForm(g, generators, generators, 1, {m: Mat(r) for m, r in comps.items()})
        bad = op.endo_degrees() - {1}
        if bad:
            raise ShapeError(f"Q raises degree by {sorted(bad)} somewhere; must be exactly 1")
        self.operator = op

    def Q(self, name: str) -> EForm:
        j = self.generators.index(name)
        return self.operator.apply(EForm.basis(self.g.n, self.generators, (), j))

    def apply(self, w: EForm) -> EForm:
        return apply(self.to_superconnection(), w)

    def to_superconnection(self) -> Superconnection:
        return Superconnection(self.g, self.generators, self.operator)

    @classmethod
    def from_superconnection(cls, D: Superconnection) -> "AModule":
        if not D.is_homogeneous():
            raise ContractError("modules carry homogeneous degree-1 operators")
        return cls(D.g, D.bundle, D.omega)

    def standard_bundle(self) -> GradedVectorSpace:
        """``0^* B``: positive-form coefficients set to zero leaves the generator span."""
        return self.generators

    def square_zero_witness(self) -> str | None:
        """First generator ``x`` with ``Q^2 x != 0``, or None."""
        F = square(self.to_superconnection())
        for j, name in enumerate(self.generators.names):
            if not F.apply(EForm.basis(self.g.n, self.generators, (), j)).is_zero():
                return name
        return None

    def is_flat(self) -> bool:
        return self.square_zero_witness() is None

    def __eq__(self, other) -> bool:
        if not isinstance(other, AModule):
            return NotImplemented
        return self.g == other.g and self.generators == other.generators and self.operator == other.operator

    def __hash__(self):
        return hash((self.generators, self.operator))

    def __repr__(self) -> str:
        return f"AModule(ranks={self.generators.ranks()})"


class ModuleMorphism:
    """Degree-preserving Omega(A)-linear map between modules, given on generators."""

    __slots__ = ("source", "target", "phi")

    def __init__(self, source: AModule, target: AModule, phi: OpForm):
        if phi.source != source.generators or phi.target != target.generators:
            raise ShapeError("morphism between other bundles")
        if phi.parity != 0 or (phi.endo_degrees() - {0}):
            raise ShapeError("module morphisms preserve degree")
        self.source = source
        self.target = target
        self.phi = phi

    @classmethod
    def identity(cls, B: AModule) -> "ModuleMorphism":
        return cls(B, B, OpForm.identity(B.g, B.generators))

    def chain_defect(self) -> OpForm:
        """``phi Q - Q' phi``, as an odd operator."""
        return self.phi @ self.source.operator - self.target.operator @ self.phi - self.phi.d_commutator()

    def is_chain_map(self) -> bool:
        return self.chain_defect().is_zero()

    def __call__(self, w: EForm) -> EForm:
        return self.phi.apply(w)

    def __matmul__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        return ModuleMorphism(other.source, self.target, self.phi @ other.phi)

    def is_statomorphism(self) -> bool:
        """Automorphism inducing the identity on the standard graded bundle."""
        return (
            self.source.generators == self.target.generators
            and self.phi.component(()) == Mat.identity(self.source.generators.dim)
        )


# -- decomposition ------------------------------------------------------------


def _small_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-3, 3), rng.randint(1, 3))


@dataclass
class Decomposition:
    """Isomorphism ``theta: B -> pi^* E`` and the induced representation ``D = theta Q theta^{-1}``."""

    module: AModule
    bundle: GradedVectorSpace
    theta: OpForm
    theta_inv: OpForm
    superconnection: Superconnection
    splittings: dict[int, OpForm] = field(default_factory=dict)
    seed: int | None = None

    def zero_section_commutes(self) -> bool:
        return self.theta.component(()) == Mat.identity(self.bundle.dim)

    def intertwines(self) -> bool:
        """``theta Q = D theta`` exactly."""
        target = AModule.from_superconnection(self.superconnection)
        return ModuleMorphism(self.module, target, self.theta).is_chain_map()


def _splitting(B: AModule, k: int, rng: random.Random | None) -> OpForm:
    """Retraction ``B_k -> pi^* E_k`` restricted to generators of degree > k.

    Returns the part of the retraction on higher generators as an operator
    into ``E_k``; zero for the coordinate splitting.
    """
    gens = B.generators
    n = B.g.n
    rows_k = gens.indices(k)
    comps: dict[Monomial, list[list[Fraction]]] = {}
    if rng is not None:
        for j, dj in enumerate(gens.degrees):
            p = dj - k
            if p < 1 or p > n:
                continue
            for mono in monomials(n, p):
                for i in rows_k:
                    c = _small_rational(rng)
                    if c:
                        comps.setdefault(mono, [[Fraction(0)] * gens.dim for _ in range(gens.dim)])[i][j] = c
    return OpForm(B.g, gens, gens, 0, {m: Mat(r) for m, r in comps.items()})


def decompose(B: AModule, seed: int | None = None) -> Decomposition:
    """Decompose ``B`` by splitting its tower of short exact sequences.

    With ``seed=None`` every sequence is split along the generators
    (coordinate splitting, ``theta = id``); an integer seed draws random
    splittings, giving another decomposition of the same module.
    """
    gens = B.generators
    if gens.dim and max(gens.degrees) - min(gens.degrees) > 64:
        raise ContractError("module degree range too large to decompose")
    rng = random.Random(seed) if seed is not None else None
    theta = OpForm.identity(B.g, gens)
    splittings = {}
    for k in gens.support():
        sigma = _splitting(B, k, rng)
        splittings[k] = sigma
        theta = theta + sigma
    theta_inv = invert_even(theta)
    D = Superconnection(B.g, gens, conjugate(B.operator, theta, theta_inv))
    return Decomposition(B, gens, theta, theta_inv, D, splittings, seed)


def compare_decompositions(dec1: Decomposition, dec2: Decomposition) -> GaugeTransformation:
    """``u = theta_2 o theta_1^{-1}``, so that ``u D_1 = D_2 u``."""
    if dec1.module != dec2.module:
        raise ContractError("decompositions of different modules")
    return GaugeTransformation.from_opform(dec2.theta @ dec1.theta_inv)


def intertwines(u: GaugeTransformation, D1: Superconnection, D2: Superconnection) -> bool:
    """``u D1 = D2 u``."""
    uu = u.as_opform()
    return (uu @ D1.omega - D2.omega @ uu - uu.d_commutator()).is_zero()


def _gauge_unknowns(g: LieAlgebra, E: GradedVectorSpace) -> list[tuple[Monomial, int, int]]:
    out = []
    for p in range(1, g.n + 1):
        for mono in monomials(g.n, p):
            for i, di in enumerate(E.degrees):
                for j, dj in enumerate(E.degrees):
                    if di - dj == -p:
                        out.append((mono, i, j))
    return out


def solve_gauge(D1: Superconnection, D2: Superconnection) -> GaugeTransformation | None:
    """Unipotent ``u`` with ``u D1 = D2 u`` (so ``D1 = u^{-1} D2 u``), or None."""
    if D1.bundle != D2.bundle:
        raise ShapeError("superconnections on different bundles")
    if D1.omega.component(()) != D2.omega.component(()):
        return None
    g, E = D1.g, D1.bundle
    unknowns = _gauge_unknowns(g, E)
    rhs = (D2.omega - D1.omega).flatten()
    if not unknowns:
        return GaugeTransformation.identity(g, E) if not any(rhs) else None
    cols = []
    for mono, i, j in unknowns:
        rows = [[0] * E.dim for _ in range(E.dim)]
        rows[i][j] = 1
        N = OpForm(g, E, E, 0, {mono: Mat(rows)})
        cols.append((N @ D1.omega - D2.omega @ N - N.d_commutator()).flatten())
    A = Mat.from_columns(cols, len(rhs))
    try:
        x = A.solve(rhs)
    except NoSolution:
        return None
    comps: dict[Monomial, list[list[Fraction]]] = {}
    for (mono, i, j), v in zip(unknowns, x):
        if v:
            comps.setdefault(mono, [[Fraction(0)] * E.dim for _ in range(E.dim)])[i][j] = v
    return GaugeTransformation(g, E, {m: Mat(r) for m, r in comps.items()})


def find_statomorphism(B1: AModule, B2: AModule) -> ModuleMorphism | None:
    """Statomorphism ``psi`` with ``psi Q1 = Q2 psi``, or None."""
    if B1.generators != B2.generators:
        raise ShapeError("modules with different standard graded bundles")
    dec1, dec2 = decompose(B1), decompose(B2)
    u = solve_gauge(dec1.superconnection, dec2.superconnection)
    if u is None:
        return None
    psi = dec2.theta_inv @ u.as_opform() @ dec1.theta
    return ModuleMorphism(B1, B2, psi)


def is_statomorphic(B1: AModule, B2: AModule) -> tuple[bool, ModuleMorphism | None]:
    psi = find_statomorphism(B1, B2)
    return psi is not None, psi


def check_leibniz(D: Superconnection, alpha: Form, w: EForm) -> bool:
    """``D(alpha w) = (d alpha) w + (-1)^{|alpha|} alpha D(w)`` for homogeneous alpha."""
    p = alpha.degree()
    if p is None:
        if not alpha.is_zero():
            raise ContractError("Leibniz check needs a homogeneous form")
        p = 0
    lhs = apply(D, w.wedge_left(alpha))
    rhs = w.wedge_left(ce_differential(D.g, alpha)) + apply(D, w).wedge_left(alpha).scale(-1 if p % 2 else 1)
    return lhs == rhs


def representation_module(g: LieAlgebra, matrices: Sequence[Mat], names: Sequence[str] | None = None, degree: int = 0) -> AModule:
    """1-term module ``Q v = sum_i xi^i rho(X_i) v`` of a representation placed in one degree."""
    r = matrices[0].nrows if matrices else 0
    names = list(names) if names is not None else [f"v{j + 1}" for j in range(r)]
    space = GradedVectorSpace((x, degree) for x in names)
    return AModule.from_superconnection(Superconnection.from_representation(g, space, matrices))


def trivial_module(g: LieAlgebra, rank: int = 1) -> AModule:
    """``Omega(A)`` itself (rank copies), with ``Q = d_A``."""
    names = ["1"] if rank == 1 else [f"1_{j + 1}" for j in range(rank)]
    space = GradedVectorSpace((x, 0) for x in names)
    return AModule(g, space, OpForm.zero(g, space, space, 1))
