from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from affrep.exact_linalg import (
    Echelon,
    SparseMatrix,
    Subspace,
    complete_basis,
    format_rational,
    image_basis,
    in_span,
    kernel_basis,
    parse_rational,
    quotient_dim,
    rank,
    solve,
)

from conftest import small_q


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_q, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_rational_round_trip():
    for q in (Fraction(0), Fraction(-3, 7), Fraction(5)):
        assert parse_rational(format_rational(q)) == q
    assert format_rational(Fraction(4, 6)) == "2/3"


def test_sparse_matrix_stores_no_zeros():
    A = SparseMatrix(2, 2, {(0, 0): 0, (1, 1): Fraction(2)})
    assert A.nnz() == 1
    with pytest.raises(Exception):
        SparseMatrix(2, 2, {(2, 0): 1})


def test_kernel_examples():
    assert kernel_basis(SparseMatrix.zeros(2, 2)).dim == 2
    assert kernel_basis(SparseMatrix.identity(3)).dim == 0
    K = kernel_basis(SparseMatrix.from_rows([[1, 2], [2, 4]]))
    assert K.dim == 1
    v = K.basis[0]
    assert v.get(0, 0) == -2 * v.get(1, 0) and v


def test_image_examples():
    assert image_basis(SparseMatrix.identity(3)).dim == 3
    assert image_basis(SparseMatrix.zeros(3, 3)).dim == 0
    im = image_basis(SparseMatrix.from_rows([[1, 2], [2, 4]]))
    assert im.dim == 1 and im.contains({0: 1, 1: 2})


def test_quotient_dim_examples():
    R2 = Subspace(2, [{0: 1}, {1: 1}])
    zero = Subspace(2, [])
    assert quotient_dim(R2, zero) == 2
    assert quotient_dim(R2, R2) == 0
    K = kernel_basis(SparseMatrix.from_rows([[1, 2], [2, 4]]))
    assert quotient_dim(K, zero) == 1
    with pytest.raises(ValueError):
        quotient_dim(K, Subspace(2, [{0: 1}]))


def test_solve_examples():
    b = {0: Fraction(3), 2: Fraction(-1)}
    assert solve(SparseMatrix.identity(3), b) == [3, 0, -1]
    assert solve(SparseMatrix.zeros(2, 2), {0: 1}) is None
    A = SparseMatrix.from_rows([[1, 2], [2, 4]])
    x = solve(A, [1, 2])
    assert A.apply(x) == {0: 1, 1: 2}
    assert solve(A, [1, 0]) is None


@given(matrices())
def test_rank_nullity(rows):
    A = SparseMatrix.from_rows(rows)
    K = kernel_basis(A)
    assert rank(A) + K.dim == A.cols
    for v in K.basis:
        assert A.apply(v) == {}
    assert rank(list(K.basis), A.cols) == K.dim


@given(matrices(), st.data())
def test_solve_is_exact(rows, data):
    A = SparseMatrix.from_rows(rows)
    x0 = data.draw(st.lists(small_q, min_size=A.cols, max_size=A.cols))
    b = A.apply(x0)
    x = solve(A, b)
    assert x is not None and A.apply(x) == b


@given(matrices())
def test_image_basis_independent(rows):
    A = SparseMatrix.from_rows(rows)
    im = image_basis(A)
    assert im.dim == rank(A)
    for j in range(A.cols):
        assert im.contains(A.column(j))


def test_echelon_reduce_and_span():
    E = Echelon(3)
    assert E.add({0: 1, 1: 1})
    assert not E.add({0: 2, 1: 2})
    assert E.rank == 1
    assert in_span([{0: 1, 1: 1}], {0: 3, 1: 3}, 3)
    assert not in_span([{0: 1, 1: 1}], {2: 1}, 3)
    reps = complete_basis([{0: 1}], [{0: 1}, {0: 1, 1: 1}, {1: 2}], 3)
    assert len(reps) == 1


def test_matrix_algebra():
    A = SparseMatrix.from_rows([[1, 2], [0, 1]])
    B = SparseMatrix.from_rows([[0, 1], [1, 0]])
    assert (A @ B).to_dense() == [[2, 1], [1, 0]]
    assert (A - A).is_zero()
    assert A.transpose().to_dense() == [[1, 0], [2, 1]]
    assert SparseMatrix.from_triplets(2, 2, A.triplets()) == A
    assert SparseMatrix.block_diag([A, B]).shape == (4, 4)
