import random
from fractions import Fraction
from math import comb

import pytest

from liemod.errors import ContractError, ShapeError
from liemod.liealg import EForm, abelian, heisenberg3, monomials, sl2
from liemod.linalg import Mat
from liemod.modops import (
    CochainComplex,
    Cohomology,
    betti_numbers,
    cohomology,
    cohomology_pairing,
    direct_sum,
    direct_sum_data,
    double_dual_map,
    dual,
    dual_residual,
    form_primitive,
    is_exact,
    koszul_swap,
    pairing,
    tensor,
    zero_module,
)
from liemod.randgen import random_gauge, random_module, rational, representations
from liemod.repmod import AModule, ModuleMorphism, OpForm, gauge_conjugate, representation_module, trivial_module

from conftest import ALGEBRAS
from oracles import H3, SL2, ce_betti


def raw(g):
    return g.n, {k: list(v) for k, v in g.brackets.items()}


def mats(ms):
    return [[list(r) for r in m.rows()] for m in ms]


def random_section(rng, g, E):
    return EForm(g.n, E, {m: [rational(rng) for _ in range(E.dim)] for m in monomials(g.n) if rng.random() < 0.5})


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_trivial_betti_abelian_is_binomial(n):
    assert betti_numbers(trivial_module(abelian(n))) == {k: comb(n, k) for k in range(n + 1)}


def test_sl2_betti_against_brute_force():
    g = sl2()
    assert raw(g) == (SL2[0], {k: [Fraction(x) for x in v] for k, v in SL2[1].items()})
    assert list(betti_numbers(trivial_module(g)).values()) == ce_betti(*SL2) == [1, 0, 0, 1]
    ad = [g.ad(i) for i in range(3)]
    assert list(betti_numbers(representation_module(g, ad)).values()) == ce_betti(*SL2, mats(ad)) == [0, 0, 0, 0]


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_representation_betti_against_brute_force(name):
    g = ALGEBRAS[name]()
    for rep, ms in representations(g, random.Random(1)).items():
        assert list(betti_numbers(representation_module(g, ms)).values()) == ce_betti(*raw(g), mats(ms)), rep


def test_complex_squares_to_zero_and_euler(algebra, rng):
    for _ in range(3):
        B = random_module(rng, algebra, 5, (-1, 0, 1))
        cx = CochainComplex(B)
        assert cx.check() is None
        H = Cohomology(B)
        chi = sum((-1) ** k * b for k, b in H.betti().items())
        assert chi == cx.euler_characteristic() == 0


def test_cohomology_gauge_invariant(algebra, rng):
    B = random_module(rng, algebra, 5)
    D = gauge_conjugate(B.to_superconnection(), random_gauge(rng, algebra, B.generators))
    assert betti_numbers(AModule.from_superconnection(D)) == betti_numbers(B)


def homogeneous(w, d):
    E = w.space
    terms = {m: [x if len(m) + E.degrees[i] == d else 0 for i, x in enumerate(v)] for m, v in w.terms.items()}
    return EForm(w.n, E, terms)


def test_is_exact_on_coboundaries(algebra, rng):
    B = random_module(rng, algebra, 5)
    for _ in range(3):
        x = B.apply(random_section(rng, algebra, B.generators))
        for d in x.degrees():
            part = homogeneous(x, d)
            prim = is_exact(B, part, d)
            assert prim is not None and B.apply(prim) == part


def test_top_class_not_exact():
    g = sl2()
    B = trivial_module(g)
    top = EForm(3, B.generators, {(0, 1, 2): [1]})
    assert is_exact(B, top) is None
    assert form_primitive(g, g.form("e", "f", "h")) is None
    assert form_primitive(g, g.form("e", "f")) == -g.form("h")
    with pytest.raises(ContractError):
        is_exact(B, EForm(3, B.generators, {(2,): [1]}))


def test_class_representatives_are_canonical(rng):
    g = heisenberg3()
    B = trivial_module(g)
    H = Cohomology(B)
    c = H.groups[2].classes[0]
    shifted = H.class_of(c.eform() + B.apply(EForm(3, B.generators, {(2,): [3]})), 2)
    assert shifted == c
    assert H.class_coordinates(shifted) == (1, 0)
    assert H.class_of(B.apply(EForm(3, B.generators, {(2,): [-1]})), 2).is_zero()
    assert [grp.betti for grp in cohomology(B)] == ce_betti(*H3)


def test_tensor_of_representations_is_kronecker():
    g = sl2()
    std = [Mat([[0, 1], [0, 0]]), Mat([[0, 0], [1, 0]]), Mat([[1, 0], [0, -1]])]
    ad = [g.ad(i) for i in range(3)]
    T = tensor(representation_module(g, std, ["a", "b"]), representation_module(g, ad, ["x", "y", "z"]))
    assert T.generators.names[:3] == ("a*x", "a*y", "a*z")
    for i in range(3):
        want = [[0] * 6 for _ in range(6)]
        for p in range(2):
            for q in range(3):
                for p2 in range(2):
                    for q2 in range(3):
                        want[3 * p2 + q2][3 * p + q] = std[i][p2, p] * int(q == q2) + ad[i][q2, q] * int(p == p2)
        assert T.operator.component((i,)) == Mat(want)
    assert T.is_flat()
    # standard (x) adjoint = spin 3/2 + spin 1/2: no cohomology
    assert set(betti_numbers(T).values()) == {0}


def test_tensor_with_trivial_is_original(algebra, rng):
    B = random_module(rng, algebra, 5, (0, 1))
    T = tensor(B, trivial_module(algebra))
    assert T.operator.comps == B.operator.comps
    T2 = tensor(trivial_module(algebra), B)
    assert T2.operator.comps == B.operator.comps


def test_koszul_swap_is_isomorphism(algebra, rng):
    B1 = random_module(rng, algebra, 3, (0, 1))
    B2 = random_module(rng, algebra, 3, (-1, 0))
    s12 = koszul_swap(B1, B2)
    s21 = koszul_swap(B2, B1)
    assert s12.is_chain_map() and s21.is_chain_map()
    assert (s21 @ s12).phi == OpForm.identity(algebra, s12.source.generators)
    assert betti_numbers(s12.source) == betti_numbers(s12.target)


def test_direct_sum(algebra, rng):
    B1 = random_module(rng, algebra, 4)
    B2 = random_module(rng, algebra, 4, (-1, 0))
    S = direct_sum_data(B1, B2)
    for f in S.inclusions + S.projections:
        assert f.is_chain_map()
    b1, b2, bs = betti_numbers(B1), betti_numbers(B2), betti_numbers(S.module)
    for k in bs:
        assert bs[k] == b1.get(k, 0) + b2.get(k, 0)
    same = direct_sum(B1, B1)
    assert all(x.startswith(("1.", "2.")) for x in same.generators.names)
    Z = direct_sum(B1, zero_module(algebra))
    assert Z == B1


def test_dual_of_representation():
    g = sl2()
    std = [Mat([[0, 1], [0, 0]]), Mat([[0, 0], [1, 0]]), Mat([[1, 0], [0, -1]])]
    Bd = dual(representation_module(g, std, ["a", "b"]))
    assert Bd.generators.names == ("a^*", "b^*")
    for i in range(3):
        assert Bd.operator.component((i,)) == -std[i].T


def test_dual_residual_vanishes(algebra, rng):
    B = random_module(rng, algebra, 5, (-1, 0, 1))
    Bd = dual(B)
    assert Bd.is_flat()
    S, Sd = B.generators, Bd.generators
    for a in range(Sd.dim):
        for j in range(S.dim):
            b = EForm.basis(algebra.n, Sd, (), a)
            beta = EForm.basis(algebra.n, S, (), j)
            assert dual_residual(Bd, B, b, beta).is_zero()
    for _ in range(3):
        mono = rng.choice(monomials(algebra.n))
        b = EForm(algebra.n, Sd, {mono: [rational(rng) if Sd.degrees[i] == 0 else 0 for i in range(Sd.dim)]})
        if b.degree() is None:
            continue
        beta = random_section(rng, algebra, S)
        assert dual_residual(Bd, B, b, beta).is_zero()


def test_double_dual(algebra, rng):
    B = random_module(rng, algebra, 5, (-1, 0, 1))
    f = double_dual_map(B)
    assert f.is_chain_map()
    assert betti_numbers(f.target) == betti_numbers(B)


def test_pairing_sign_and_errors():
    g = abelian(2)
    B = trivial_module(g)
    Bd = dual(B)
    b = EForm(2, Bd.generators, {(0,): [1]})
    beta = EForm(2, B.generators, {(1,): [1]})
    assert pairing(Bd.generators, B.generators, b, beta) == g.form(0, 1)
    with pytest.raises(ShapeError):
        pairing(B.generators, B.generators, beta, beta)


def test_cohomology_pairing_is_representative_independent(rng):
    g = heisenberg3()
    B = trivial_module(g)
    Bd = dual(B)
    H, Hd = Cohomology(B), Cohomology(Bd)
    for c1 in Hd.groups[1].classes:
        for c2 in H.groups[1].classes:
            base = cohomology_pairing(c1, c2)
            nu1 = random_section(rng, g, Bd.generators)
            nu2 = random_section(rng, g, B.generators)
            x1 = Hd.class_of(c1.eform() + Bd.apply(EForm(3, Bd.generators, {m: v for m, v in nu1.terms.items() if len(m) == 0})), 1)
            x2 = H.class_of(c2.eform() + B.apply(EForm(3, B.generators, {m: v for m, v in nu2.terms.items() if len(m) == 0})), 1)
            assert cohomology_pairing(x1, x2) == base
