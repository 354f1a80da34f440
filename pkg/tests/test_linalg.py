from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sullivan.linalg import (
    EchelonBasis,
    QMatrix,
    complement_basis,
    nullspace_basis,
    rank,
    rref,
    solve,
    span_rank,
)

small = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = [[draw(st.one_of(st.just(Fraction(0)), small)) for _ in range(c)] for _ in range(r)]
    return QMatrix.from_rows(rows, c)


def test_rref_examples():
    assert rref(QMatrix.from_rows([[0]])) == (QMatrix.from_rows([[0]]), [])
    i3 = QMatrix.identity(3)
    assert rref(i3) == (i3, [0, 1, 2])
    r, piv = rref(QMatrix.from_rows([[2, 4], [1, 2]]))
    assert r.to_rows() == [[1, 2], [0, 0]] and piv == [0]


def test_nullspace_examples():
    assert nullspace_basis(QMatrix.identity(2)) == []
    assert nullspace_basis(QMatrix.zeros(1, 3)) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    (v,) = nullspace_basis(QMatrix.from_rows([[1, 1, 0], [0, 0, 1]]))
    assert v == (-1, 1, 0)


def test_solve_examples():
    assert solve(QMatrix.identity(2), (3, 5)) == (3, 5)
    assert solve(QMatrix.from_rows([[1, 1]]), (2,)) == (2, 0)
    assert solve(QMatrix.from_rows([[0]]), (1,)) is None


def test_complement_examples():
    assert complement_basis([], 2) == [0, 1]
    assert complement_basis([(1, 0)], 2) == [1]
    assert complement_basis([(1, 1, 0), (0, 1, 1)], 3) == [2]


def test_matrix_basics():
    m = QMatrix.from_rows([[1, 2], [0, 3]])
    assert m[0, 1] == 2 and m.nnz() == 3
    assert (m @ QMatrix.identity(2)) == m
    assert m.transpose().to_rows() == [[1, 0], [2, 3]]
    assert (m - m).is_zero()
    assert m.apply((1, 1)) == (3, 3)
    assert (m ** 2).to_rows() == [[1, 8], [0, 9]]
    with pytest.raises(IndexError):
        QMatrix(1, 1, {(1, 0): 1})
    with pytest.raises(TypeError):
        QMatrix.from_rows([[0.5]])


def test_no_stored_zeros():
    m = QMatrix(2, 2, {(0, 0): 0, (1, 1): Fraction(2, 4)})
    assert m.entries == {(1, 1): Fraction(1, 2)}


def test_echelon_basis():
    eb = EchelonBasis(3)
    assert eb.add((1, 1, 0))
    assert eb.add((0, 1, 1))
    assert not eb.add((1, 2, 1))
    coords = eb.coordinates((1, 2, 1))
    recon = [sum(c * r[k] for c, r in zip(coords, eb.rows())) for k in range(3)]
    assert recon == [1, 2, 1]
    assert eb.coordinates((0, 0, 1)) is None
    assert len(eb) == 2 and eb.contains((2, 3, 1))


@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + len(nullspace_basis(m)) == m.cols


@given(matrices())
def test_rref_idempotent(m):
    r, piv = rref(m)
    assert rref(r) == (r, piv)


@given(matrices())
def test_nullspace_vectors_are_killed(m):
    for v in nullspace_basis(m):
        assert not any(m.apply(v))


@given(matrices(), st.data())
def test_solve_is_exact(m, data):
    x = [data.draw(small) for _ in range(m.cols)]
    b = m.apply(x)
    sol = solve(m, b)
    assert sol is not None and m.apply(sol) == b


@given(matrices())
def test_complement_size(m):
    rows = m.to_rows()
    assert len(complement_basis(rows, m.cols)) == m.cols - span_rank(rows, m.cols)
