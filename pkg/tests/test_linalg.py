from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from liemod.errors import NoSolution, ShapeError
from liemod.linalg import Mat, block_diag, format_fraction, rank_of, to_fraction

small = st.fractions(min_value=-4, max_value=4, max_denominator=4)


def matrices(rows=st.integers(1, 4), cols=st.integers(1, 4)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0])
    )


def naive_product(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))] for i in range(len(a))]


def leibniz_det(a):
    n = len(a)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inversions % 2 else 1)
        for i in range(n):
            term *= a[i][perm[i]]
        total += term
    return total


def test_to_fraction_parses_strings():
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction(" -2 ") == -2
    assert format_fraction(Fraction(-6, 4)) == "-3/2"
    with pytest.raises((ValueError, TypeError)):
        to_fraction(0.5)


def test_ragged_rows_rejected():
    with pytest.raises(ShapeError):
        Mat([[1, 2], [3]])


def test_common_denominator_normalized():
    m = Mat([[Fraction(1, 2), Fraction(1, 3)], [2, 0]])
    assert m.den == 6
    assert m[0, 1] == Fraction(1, 3)
    assert Mat([[2, 4]]) == Mat([[Fraction(4, 2), 4]])
    assert hash(Mat([[Fraction(2, 4)]])) == hash(Mat([[Fraction(1, 2)]]))


@given(matrices(), st.data())
def test_product_matches_naive(a, data):
    k = len(a[0])
    b = data.draw(st.lists(st.lists(small, min_size=2, max_size=2), min_size=k, max_size=k))
    assert (Mat(a) @ Mat(b)).rows() == naive_product(a, b)


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_permutation_expansion(a):
    assert Mat(a).det() == leibniz_det(a)


@given(matrices())
def test_rank_nullity(a):
    m = Mat(a)
    null = m.nullspace()
    assert m.rank() + len(null) == m.ncols
    for v in null:
        assert not any(m.apply(v))
    assert len(m.column_space()) == m.rank() == m.T.rank()


@given(matrices(), st.data())
def test_solve_or_certificate(a, data):
    m = Mat(a)
    y = data.draw(st.lists(small, min_size=m.nrows, max_size=m.nrows))
    try:
        x = m.solve(y)
    except NoSolution as exc:
        z = exc.certificate
        assert (Mat([list(z)]) @ m).is_zero()
        assert sum(p * q for p, q in zip(z, y)) != 0
    else:
        assert list(m.apply(x)) == y


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse_when_invertible(a):
    m = Mat(a)
    if m.det() == 0:
        with pytest.raises(ValueError):
            m.inverse()
    else:
        assert m @ m.inverse() == Mat.identity(m.nrows)


def test_block_diag_and_rank_of():
    b = block_diag([Mat([[1, 2], [3, 4]]), Mat([[5]])])
    assert b.rows() == [[1, 2, 0], [3, 4, 0], [0, 0, 5]]
    assert rank_of([(1, 2, 3), (2, 4, 6), (0, 0, 1)], 3) == 2
    assert rank_of([], 3) == 0


def test_shape_errors():
    with pytest.raises(ShapeError):
        Mat([[1, 2]]) @ Mat([[1, 2]])
    with pytest.raises(ShapeError):
        Mat([[1, 2]]) + Mat([[1], [2]])
    with pytest.raises(ShapeError):
        Mat([[1, 2]]).det()
