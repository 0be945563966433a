import random
from fractions import Fraction

import pytest

from liemod.charclass import (
    P,
    TSuperconnection,
    adjoint_dagger,
    chern_weil,
    closed_form_cs,
    cs_invariant,
    dagger_residual,
    gauge_invariance_certificate,
    metric_invariance_certificate,
    transgression,
    triangle_combination,
    triangle_defect,
)
from liemod.errors import ContractError
from liemod.graded import GradedVectorSpace
from liemod.liealg import EForm, Form, Metric, abelian, ce_differential, heisenberg3, monomials
from liemod.linalg import Mat
from liemod.modops import form_primitive
from liemod.randgen import (
    random_automorphism,
    random_flat,
    random_gauge,
    random_metric,
    random_space,
    random_superconnection,
    rational,
)
from liemod.repmod import OpForm, Superconnection, conjugate_by, gauge_conjugate, is_flat, square


def flat_pair(rng, g, rank=4):
    D = random_flat(rng, g, rank)
    return D, conjugate_by(D, random_automorphism(rng, g, D.bundle))


def test_P_constants():
    assert [P(k) for k in (1, 2, 3, 4)] == [1, Fraction(1, 3), Fraction(1, 10), Fraction(1, 35)]
    with pytest.raises(ContractError):
        P(0)


def test_chern_character_of_a_line():
    g = heisenberg3()
    E = GradedVectorSpace([("l", 0)])
    D = Superconnection.from_components(g, E, {(2,): Mat([[1]])})
    assert chern_weil(D, 1).value == Form(3, {(0, 1): -1})
    assert chern_weil(D, 2).is_zero()


def test_chern_forms_closed_and_vanish_when_flat(algebra, rng):
    for _ in range(3):
        D = random_superconnection(rng, algebra, random_space(rng, 4, (0, 1)))
        for k in (1, 2, 3):
            assert ce_differential(algebra, chern_weil(D, k).value).is_zero()
    D = random_flat(rng, algebra, 5)
    assert all(chern_weil(D, k).is_zero() for k in (1, 2, 3))


def test_path_curvature_at_endpoints(algebra, rng):
    E = random_space(rng, 3, (0, 1))
    D0, D1 = random_superconnection(rng, algebra, E), random_superconnection(rng, algebra, E)
    F = TSuperconnection(D0, D1).curvature()
    for t in (0, 1, Fraction(1, 3)):
        Dt = TSuperconnection(D0, D1).at(t)
        val = F.p0[0]
        for i, c in enumerate(F.p0[1:], 1):
            val = val + c.scale(Fraction(t) ** i)
        assert val == square(Dt)


def test_transgression_stokes(algebra, rng):
    E = random_space(rng, 4, (0, 1))
    for _ in range(2):
        D0, D1 = random_superconnection(rng, algebra, E), random_superconnection(rng, algebra, E)
        for k in (1, 2, 3):
            cs = transgression(D0, D1, k).value
            assert ce_differential(algebra, cs) == chern_weil(D1, k).value - chern_weil(D0, k).value


def test_transgression_antisymmetric(algebra, rng):
    E = random_space(rng, 3, (0, 1))
    D0, D1 = random_superconnection(rng, algebra, E), random_superconnection(rng, algebra, E)
    assert transgression(D1, D0, 2).value == -transgression(D0, D1, 2).value
    assert transgression(D0, D0, 2).is_zero()


def test_closed_formula_agrees(algebra, rng):
    for _ in range(2):
        D0, D1 = flat_pair(rng, algebra)
        for k in (1, 2, 3):
            a = transgression(D0, D1, k).value
            assert a == closed_form_cs(D0, D1, k).value
            assert ce_differential(algebra, a).is_zero()
    E = random_space(rng, 3, (0, 1))
    with pytest.raises(ContractError):
        closed_form_cs(random_superconnection(rng, algebra, E), D0, 1)


def test_triangle_primitive(algebra, rng):
    D0 = random_flat(rng, algebra, 4)
    D1 = conjugate_by(D0, random_automorphism(rng, algebra, D0.bundle))
    D2 = gauge_conjugate(D1, random_gauge(rng, algebra, D0.bundle))
    for k in (1, 2):
        nu = triangle_defect(D0, D1, D2, k)
        assert ce_differential(algebra, nu) == triangle_combination(D0, D1, D2, k)


def random_section(rng, g, E):
    return EForm(g.n, E, {m: [rational(rng) for _ in range(E.dim)] for m in monomials(g.n) if rng.random() < 0.5})


def homogeneous(w, d):
    E = w.space
    return EForm(w.n, E, {m: [x if len(m) + E.degrees[i] == d else 0 for i, x in enumerate(v)] for m, v in w.terms.items()})


def test_metric_adjoint(algebra, rng):
    D = random_flat(rng, algebra, 5)
    h = random_metric(rng, D.bundle)
    Dd = adjoint_dagger(D, h)
    assert is_flat(Dd)
    # the pairing is not graded-symmetric, so dagger twice is conjugation by the grading involution
    parity = OpForm.constant(algebra, D.bundle, D.bundle, Mat.diag(D.bundle.parity_signs()))
    assert adjoint_dagger(Dd, h) == conjugate_by(D, parity)
    for _ in range(4):
        w1 = random_section(rng, algebra, D.bundle)
        w2 = random_section(rng, algebra, D.bundle)
        for d in w1.degrees():
            assert dagger_residual(D, Dd, h, homogeneous(w1, d), w2).is_zero()


def test_orthogonal_representation_is_self_adjoint():
    g = abelian(2)
    E = GradedVectorSpace([("a", 0), ("b", 0)])
    J = Mat([[0, 1], [-1, 0]])
    D = Superconnection.from_representation(g, E, [J, J.scale(2)])
    h = Metric.identity(E)
    assert adjoint_dagger(D, h) == D
    assert cs_invariant(D, h, 1).form.is_zero()


def test_cs_invariance(algebra, rng):
    D = random_flat(rng, algebra, 4)
    m0, m1 = random_metric(rng, D.bundle), random_metric(rng, D.bundle)
    u = random_gauge(rng, algebra, D.bundle)
    for k in (1, 2):
        cs = cs_invariant(D, m0, k)
        assert ce_differential(algebra, cs.form.value).is_zero()
        cert = metric_invariance_certificate(D, m0, m1, k)
        assert cert is not None
        diff = cs_invariant(D, m1, k).form.value - cs.form.value
        assert ce_differential(algebra, cert) == diff
        assert gauge_invariance_certificate(D, u, m0, k) is not None


def test_metric_adjoint_needs_flatness(rng):
    g = abelian(2)
    E = random_space(rng, 3, (0, 1))
    D = random_superconnection(rng, g, E)
    if not is_flat(D):
        with pytest.raises(ContractError):
            adjoint_dagger(D, Metric.identity(E))
