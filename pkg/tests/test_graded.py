from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from liemod.errors import ContractError, ShapeError
from liemod.graded import (
    GradedMap,
    GradedVectorSpace,
    compose,
    graded_commutator,
    image_basis,
    kernel_basis,
    matrix_supertrace,
    supertrace,
)
from liemod.linalg import Mat

V = GradedVectorSpace([("b", 1), ("a", 0), ("c", 1), ("z", -1)])


def test_basis_sorted_by_degree_then_declaration():
    assert V.names == ("z", "a", "b", "c")
    assert V.ranks() == {-1: 1, 0: 1, 1: 2}
    assert V.indices(1) == [2, 3]
    assert V.shifted(2).support() == [1, 2, 3]
    with pytest.raises(ShapeError):
        GradedVectorSpace([("x", 0), ("x", 1)])


def random_map(draw, degree, space):
    rows = [
        [draw(st.integers(-3, 3)) if space.degrees[i] - space.degrees[j] == degree else 0 for j in range(space.dim)]
        for i in range(space.dim)
    ]
    return GradedMap.from_matrix(degree, space, space, Mat(rows))


@st.composite
def maps(draw, degree=None):
    d = draw(st.integers(-1, 1)) if degree is None else degree
    return random_map(draw, d, V)


def test_from_matrix_rejects_wrong_degree():
    m = Mat.zeros(4, 4).rows()
    m[0][1] = 1  # a (deg 0) -> z (deg -1)
    with pytest.raises(ShapeError):
        GradedMap.from_matrix(1, V, V, Mat(m))
    assert GradedMap.from_matrix(-1, V, V, Mat(m)).to_matrix() == Mat(m)


@given(maps(), maps())
def test_compose_is_matrix_product(f, g):
    h = compose(f, g)
    assert h.degree == f.degree + g.degree
    assert h.to_matrix() == f.to_matrix() @ g.to_matrix()


@given(maps(), maps())
def test_commutator_graded_antisymmetric(f, g):
    sign = -1 if (f.degree * g.degree) % 2 else 1
    assert graded_commutator(f, g) == graded_commutator(g, f).scale(-sign)


@given(maps(), maps())
def test_supertrace_kills_commutators(f, g):
    if f.degree + g.degree != 0:
        return
    assert supertrace(graded_commutator(f, g)) == 0


def test_supertrace_signs():
    f = GradedMap.identity(V)
    assert supertrace(f) == -1 + 1 - 2
    assert matrix_supertrace(V, Mat.diag([5, 1, Fraction(1, 2), 3])) == -5 + 1 - Fraction(1, 2) - 3
    with pytest.raises(ContractError):
        supertrace(GradedMap.zero(1, V))


@given(maps())
def test_kernel_and_image_dimensions(f):
    ker = kernel_basis(f)
    im = image_basis(f)
    assert sum(len(v) for v in ker.values()) + sum(len(v) for v in im.values()) == V.dim
