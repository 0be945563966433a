import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from liemod.adjoint import (
    DeformationComplex,
    Derivation,
    FormalDeformation,
    adjoint_module,
    center_dimension,
    contraction,
    d_derivation,
    deformation_cohomology,
    deformation_step,
    derivation_to_section,
    derived_bracket,
    derived_bracket_table,
    from_bracket,
    lie_derivative,
    to_bracket,
    trivialize,
)
from liemod.errors import ContractError, ShapeError, StructureError
from liemod.liealg import Form, LieAlgebra, abelian, ce_differential, heisenberg3, jacobi_check, monomials, sl2
from liemod.modops import betti_numbers

from conftest import ALGEBRAS
from oracles import ce_betti


def random_form(rng, n, p=None):
    return Form(n, {m: Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for m in monomials(n, p) if rng.random() < 0.6})


def random_derivation(rng, n, k):
    return Derivation(n, k, [random_form(rng, n, k + 1) for _ in range(n)])


def vec(rng, n):
    return tuple(Fraction(rng.randint(-3, 3)) for _ in range(n))


def test_derivation_rule(algebra, rng):
    n = algebra.n
    for k in (-1, 0, 1, 2):
        chi = random_derivation(rng, n, k)
        a, b = random_form(rng, n, rng.randint(0, 2)), random_form(rng, n)
        sign = -1 if (k * (a.degree() or 0)) % 2 else 1
        assert chi(a * b) == chi(a) * b + (a * chi(b)).scale(sign)


def test_d_derivation_is_differential(algebra, rng):
    dA = d_derivation(algebra)
    for _ in range(5):
        a = random_form(rng, algebra.n)
        assert dA(a) == ce_differential(algebra, a)
    assert dA.commutator(dA).is_zero()


def test_commutator_acts_as_commutator(algebra, rng):
    n = algebra.n
    for ka, kb in [(-1, 1), (0, 1), (1, 1), (-1, -1), (2, -1)]:
        a, b = random_derivation(rng, n, ka), random_derivation(rng, n, kb)
        alpha = random_form(rng, n)
        sign = -1 if (ka * kb) % 2 else 1
        assert a.commutator(b)(alpha) == a(b(alpha)) - b(a(alpha)).scale(sign)


def test_contraction_is_insertion(algebra, rng):
    for _ in range(5):
        X, Y = vec(rng, algebra.n), vec(rng, algebra.n)
        alpha = random_form(rng, algebra.n, 2)
        assert contraction(algebra, X)(alpha).evaluate([Y]) == alpha.evaluate([X, Y])


def test_cartan_identities(algebra, rng):
    X, Y = vec(rng, algebra.n), vec(rng, algebra.n)
    XY = algebra.bracket(X, Y)
    LX, LY = lie_derivative(algebra, X), lie_derivative(algebra, Y)
    assert LX.commutator(contraction(algebra, Y)) == contraction(algebra, XY)
    assert LX.commutator(LY) == lie_derivative(algebra, XY)
    assert d_derivation(algebra).commutator(LX).is_zero()
    alpha = random_form(rng, algebra.n, 1)
    Z = vec(rng, algebra.n)
    assert LX(alpha).evaluate([Z]) == -alpha.evaluate([algebra.bracket(X, Z)])


def test_lie_derivative_examples():
    g = sl2()
    assert lie_derivative(g, g.basis_vector(2))(g.form("e")) == g.form("e").scale(-2)
    h = heisenberg3()
    assert lie_derivative(h, h.basis_vector(2)).is_zero()


def test_derived_bracket_recovers_structure_constants(algebra, rng):
    dA = d_derivation(algebra)
    table = derived_bracket_table(dA)
    for (i, j) in combinations(range(algebra.n), 2):
        assert table[(i, j)] == algebra.bracket_basis(i, j)
    X, Y = vec(rng, algebra.n), vec(rng, algebra.n)
    assert derived_bracket(dA, [X, Y]) == algebra.bracket(X, Y)
    assert derived_bracket(dA, [Y, X]) == tuple(-x for x in algebra.bracket(X, Y))
    with pytest.raises(ContractError):
        derived_bracket(contraction(algebra, X), [])
    with pytest.raises(ShapeError):
        derived_bracket(dA, [X])


@given(st.lists(st.integers(-2, 2), min_size=9, max_size=9))
def test_bracket_table_round_trip(cs):
    g = abelian(3)
    table = {("x1", "x2"): cs[0:3], ("x1", "x3"): cs[3:6], ("x2", "x3"): cs[6:9]}
    chi = from_bracket(g, table)
    assert LieAlgebra(g.names, to_bracket(chi, g)) == LieAlgebra(g.names, table)
    got = derived_bracket_table(chi)
    assert got[(0, 1)] == tuple(cs[0:3]) and got[(1, 2)] == tuple(cs[6:9])


def test_derived_bracket_of_degree_two_is_skew(rng):
    chi = random_derivation(rng, 3, 2)
    X, Y, Z = (vec(rng, 3) for _ in range(3))
    assert derived_bracket(chi, [X, Y, Z]) == tuple(-x for x in derived_bracket(chi, [Y, X, Z]))
    assert derived_bracket(chi, [X, Y, Z]) == tuple(-x for x in derived_bracket(chi, [X, Z, Y]))


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_deformation_cohomology_three_ways(name):
    g = ALGEBRAS[name]()
    cx = DeformationComplex(g)
    assert cx.check() is None
    H = deformation_cohomology(g)
    via_complex = [H.betti()[k] for k in range(-1, g.n)]
    B = adjoint_module(g)
    assert B.is_flat()
    via_module = [betti_numbers(B)[k] for k in range(-1, g.n)]
    ad = [[list(r) for r in g.ad(i).rows()] for i in range(g.n)]
    brute = ce_betti(g.n, {k: list(v) for k, v in g.brackets.items()}, ad)
    assert via_complex == via_module == brute
    assert H.betti()[-1] == center_dimension(g)


def test_adjoint_module_matches_commutator(algebra, rng):
    B = adjoint_module(algebra)
    dA = d_derivation(algebra)
    for k in (-1, 0, 1):
        chi = random_derivation(rng, algebra.n, k)
        assert B.apply(derivation_to_section(chi, B)) == derivation_to_section(dA.commutator(chi), B)


def test_sl2_rigidity():
    g = sl2()
    H = deformation_cohomology(g)
    assert H.betti()[-1] == H.betti()[0] == H.betti()[1] == 0
    cx = H.complex
    dA = d_derivation(g)
    rng = random.Random(3)
    for _ in range(5):
        phi = random_derivation(rng, 3, 0)
        chi = dA.commutator(phi)
        psi = trivialize(g, chi)
        assert dA.commutator(psi) == chi
        step = deformation_step(FormalDeformation(g, [chi]))
        assert step.extends
    with pytest.raises(ContractError):
        trivialize(g, Derivation(3, 1, [g.form("e", "f")] * 3))


def test_outer_derivation_of_heisenberg_is_not_trivial():
    g = heisenberg3()
    H = deformation_cohomology(g)
    cls = H.groups[1].classes[0]
    chi = H.complex.to_derivation(1, cls.representative)
    assert trivialize(g, chi) is None


def test_abelian_first_step_matches_jacobi():
    g = abelian(3)
    rng = random.Random(11)
    seen = set()
    for trial in range(25):
        pairs = list(combinations(g.names, 2))
        if trial % 2:
            pairs = [rng.choice(pairs)]  # a single bracket always satisfies Jacobi
        table = {(a, b): [rng.randint(-1, 1) for _ in range(3)] for a, b in pairs}
        step = deformation_step(FormalDeformation(g, [from_bracket(g, table)]))
        ok = bool(jacobi_check(LieAlgebra(g.names, table)))
        assert step.extends == ok
        assert (step.obstruction is None) == ok
        if ok:
            fd = FormalDeformation(g, [from_bracket(g, table), step.next_term])
            assert fd.first_failure() is None
        seen.add(ok)
    assert seen == {True, False}


def test_non_flat_truncation_rejected():
    g = sl2()
    bad = Derivation(3, 1, [g.form("e", "f")] + [Form(3)] * 2)
    with pytest.raises(StructureError):
        deformation_step(FormalDeformation(g, [bad]))
    with pytest.raises(ShapeError):
        FormalDeformation(g, [contraction(g, (1, 0, 0))])
