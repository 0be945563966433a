"""Chern-Weil and Chern-Simons forms of superconnections.

``ch_k(D) = str(F^k)`` with ``F = D^2``.  The transgression form of a pair is
computed on ``A x TI``: the linear path ``omega_t = omega_0 + t (omega_1 -
omega_0)`` has curvature ``F_t + tdot (omega_1 - omega_0)``, and ``cs_k`` is
the Berezin integral of ``str`` of its k-th power.  For flat pairs the same
form is given by ``P_k str((D_1 - D_0) [D_0, D_1]^{k-1})``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .errors import ContractError, InvariantViolation, ShapeError
from .liealg import Form, Metric, TForm, berezin_integral, ce_differential
from .linalg import Mat
from .modops import CohomologyClass, form_class, form_primitive
from .repmod import OpForm, Superconnection, bracket, gauge_conjugate, square


def P(k: int) -> Fraction:
    """``k! (k-1)! / (2k-1)!``."""
    if k < 1:
        raise ContractError("k must be positive")
    return Fraction(factorial(k) * factorial(k - 1), factorial(2 * k - 1))


@dataclass(frozen=True)
class CharacteristicForm:
    k: int
    value: Form
    construction: str

    def components(self) -> dict[int, Form]:
        return {p: self.value.component(p) for p in self.value.degrees()}

    def is_zero(self) -> bool:
        return self.value.is_zero()


def _poly_mul(p: Sequence[OpForm], q: Sequence[OpForm], zero: OpForm) -> list[OpForm]:
    if not p or not q:
        return []
    out = [zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            if not b.is_zero():
                out[i + j] = out[i + j] + a @ b
    return out


def _poly_add(p: Sequence[OpForm], q: Sequence[OpForm], zero: OpForm) -> list[OpForm]:
    m = max(len(p), len(q))
    return [(p[i] if i < len(p) else zero) + (q[i] if i < len(q) else zero) for i in range(m)]


class TOp:
    """Operator ``P0(t) + tdot P1(t)`` on ``Omega(A x TI; E)``, polynomial in t.

    ``p0`` has parity ``parity``; ``p1`` the opposite parity, so the whole
    operator is homogeneous once ``tdot`` is counted as odd.
    """

    __slots__ = ("parity", "p0", "p1", "zero0", "zero1")

    def __init__(self, parity: int, p0: Sequence[OpForm], p1: Sequence[OpForm], zero0: OpForm, zero1: OpForm):
        self.parity = parity % 2
        self.p0 = list(p0)
        self.p1 = list(p1)
        self.zero0 = zero0
        self.zero1 = zero1

    def __matmul__(self, other: "TOp") -> "TOp":
        """``(P0 + tdot P1)(Q0 + tdot Q1) = P0 Q0 + tdot ((-1)^{|P0|} P0 Q1 + P1 Q0)``."""
        z0 = self.zero0 @ other.zero0
        z1 = self.zero0 @ other.zero1
        a = _poly_mul(self.p0, other.p0, z0)
        b = _poly_mul(self.p0, other.p1, z1)
        if self.parity:
            b = [x.scale(-1) for x in b]
        c = _poly_mul(self.p1, other.p0, z1)
        return TOp(self.parity + other.parity, a, _poly_add(b, c, z1), z0, z1)

    def supertrace(self, n: int) -> TForm:
        return TForm(n, [x.supertrace() for x in self.p0], [x.supertrace() for x in self.p1])


class TSuperconnection:
    """The linear path ``t D_1 + (1 - t) D_0`` as a superconnection on ``A x TI``."""

    def __init__(self, D0: Superconnection, D1: Superconnection):
        if D0.bundle != D1.bundle or D0.g != D1.g:
            raise ShapeError("superconnections on different bundles")
        self.D0 = D0
        self.D1 = D1

    def at(self, t) -> Superconnection:
        t = Fraction(t)
        w = self.D0.omega.scale(1 - t) + self.D1.omega.scale(t)
        return Superconnection(self.D0.g, self.D0.bundle, w, strict=False)

    def curvature(self) -> TOp:
        w0, w1 = self.D0.omega, self.D1.omega
        delta = w1 - w0
        F0 = [
            w0.d_commutator() + w0 @ w0,
            delta.d_commutator() + w0 @ delta + delta @ w0,
            delta @ delta,
        ]
        zero1 = OpForm.zero(w0.g, w0.source, w0.target, 1)
        return TOp(0, F0, [delta], F0[0].scale(0), zero1)


def chern_weil(D: Superconnection, k: int) -> CharacteristicForm:
    """``str(F^k)``."""
    if k < 1:
        raise ContractError("k must be positive")
    F = square(D)
    power = F
    for _ in range(k - 1):
        power = power @ F
    return CharacteristicForm(k, power.supertrace(), "chern-weil")


def transgression(D0: Superconnection, D1: Superconnection, k: int) -> CharacteristicForm:
    """Berezin integral of ``ch_k`` of the linear path from ``D0`` to ``D1``."""
    if k < 1:
        raise ContractError("k must be positive")
    F = TSuperconnection(D0, D1).curvature()
    power = F
    for _ in range(k - 1):
        power = power @ F
    return CharacteristicForm(k, berezin_integral(power.supertrace(D0.g.n)), "berezin")


def closed_form_cs(D0: Superconnection, D1: Superconnection, k: int) -> CharacteristicForm:
    """``P_k str((D_1 - D_0) [D_0, D_1]^{k-1})`` for flat ``D0, D1``."""
    if not (square(D0).is_zero() and square(D1).is_zero()):
        raise ContractError("the closed formula holds only for flat pairs")
    delta = D1.omega - D0.omega
    B = bracket(D0, D1)
    op = delta
    for _ in range(k - 1):
        op = op @ B
    return CharacteristicForm(k, op.supertrace().scale(P(k)), "closed-form")


def triangle_combination(D0, D1, D2, k: int) -> Form:
    return (transgression(D0, D1, k).value + transgression(D1, D2, k).value) - transgression(D0, D2, k).value


def triangle_defect(D0: Superconnection, D1: Superconnection, D2: Superconnection, k: int) -> Form:
    """Primitive ``nu`` with ``d_A nu = cs(D0,D1) + cs(D1,D2) - cs(D0,D2)``."""
    for D in (D0, D1, D2):
        if not square(D).is_zero():
            raise ContractError("triangle identity needs flat superconnections")
    comb = triangle_combination(D0, D1, D2, k)
    nu = form_primitive(D0.g, comb)
    if nu is None:
        raise InvariantViolation("triangle combination has no primitive")
    return nu


def _parity_signs(space, p: int) -> list[int]:
    return [-1 if (d * (1 + p)) % 2 else 1 for d in space.degrees]


def adjoint_dagger(D: Superconnection, metric: Metric) -> Superconnection:
    """Metric adjoint: ``N_I = -G^{-1} S_I M_I^T G`` with ``S_I = (-1)^{deg e (1+|I|)}``."""
    if metric.space != D.bundle:
        raise ShapeError("metric on another bundle")
    if not square(D).is_zero():
        raise ContractError("metric adjoint is defined for flat superconnections")
    G = metric.matrix()
    Ginv = G.inverse()
    comps = {}
    for mono, m in D.omega.comps.items():
        S = Mat.diag(_parity_signs(D.bundle, len(mono)))
        comps[mono] = -(Ginv @ S @ m.T @ G)
    return Superconnection(D.g, D.bundle, OpForm(D.g, D.bundle, D.bundle, 1, comps), strict=False)


def metric_pairing(metric: Metric, w1, w2) -> Form:
    """``<alpha e, beta f> = (-1)^{|e||beta|} alpha ^ beta h(e, f)``."""
    from .liealg import wedge_monomials

    if w1.space != metric.space or w2.space != metric.space:
        raise ShapeError("sections of another bundle")
    G = metric.matrix()
    space = metric.space
    out: dict = {}
    for ma, va in w1.terms.items():
        for mb, vb in w2.terms.items():
            s, m = wedge_monomials(ma, mb)
            if not s:
                continue
            for i, x in enumerate(va):
                if not x:
                    continue
                sign = s * (-1 if (space.degrees[i] * len(mb)) % 2 else 1)
                for j, y in enumerate(vb):
                    if y:
                        h = G[i, j]
                        if h:
                            out[m] = out.get(m, 0) + sign * x * y * h
    return Form(w1.n, out)


def dagger_residual(D: Superconnection, Ddag: Superconnection, metric: Metric, w1, w2) -> Form:
    """``d_A<w1,w2> - <D w1, w2> - (-1)^{|w1|} <w1, D^dagger w2>`` for homogeneous ``w1``."""
    from .repmod import apply

    p = w1.degree()
    if p is None:
        raise ContractError("residual needs a homogeneous first argument")
    lhs = ce_differential(D.g, metric_pairing(metric, w1, w2))
    a = metric_pairing(metric, apply(D, w1), w2)
    b = metric_pairing(metric, w1, apply(Ddag, w2))
    return lhs - a - (b if p % 2 == 0 else -b)


@dataclass(frozen=True)
class CSInvariant:
    k: int
    form: CharacteristicForm
    classes: dict[int, CohomologyClass] = field(default_factory=dict)


def cs_invariant(D: Superconnection, metric: Metric, k: int) -> CSInvariant:
    """``cs_k(D, D^dagger)`` and the class of each homogeneous component."""
    Ddag = adjoint_dagger(D, metric)
    cs = transgression(D, Ddag, k)
    if not ce_differential(D.g, cs.value).is_zero():
        raise InvariantViolation("cs_k(D, D^dagger) is not closed")
    return CSInvariant(k, cs, form_class(D.g, cs.value))


def same_class(g, alpha: Form, beta: Form) -> Form | None:
    """Primitive of ``alpha - beta`` (a certificate that the classes agree), or None."""
    return form_primitive(g, alpha - beta)


def metric_invariance_certificate(D: Superconnection, m0: Metric, m1: Metric, k: int) -> Form | None:
    a = cs_invariant(D, m0, k).form.value
    b = cs_invariant(D, m1, k).form.value
    return same_class(D.g, b, a)


def gauge_invariance_certificate(D: Superconnection, u, metric: Metric, k: int) -> Form | None:
    a = cs_invariant(D, metric, k).form.value
    b = cs_invariant(gauge_conjugate(D, u), metric, k).form.value
    return same_class(D.g, b, a)
