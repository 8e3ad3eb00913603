from fractions import Fraction

import pytest

from affrep.exact_linalg import SparseMatrix
from affrep.lie_core import (
    LieAlgebra,
    LieAlgebraError,
    Representation,
    RepresentationError,
    abelian,
    adjoint_rep,
    check_lie_algebra,
    check_representation,
    hom_module,
    invariants,
    sl2,
    sl2_standard,
    trivial_rep,
    weight_decompose,
)


def test_check_lie_algebra_examples():
    assert check_lie_algebra(abelian(3)) == []
    assert check_lie_algebra(sl2()) == []
    bad = LieAlgebra(2, {(0, 1): {0: 1}, (1, 0): {0: 1}}, validate=False)
    report = check_lie_algebra(bad)
    assert report and any("antisym" in str(r).lower() for r in report)


def test_jacobi_violation_is_reported():
    # [e0,e1] = e2, [e1,e2] = e0, [e0,e2] = e0 breaks Jacobi
    L = LieAlgebra.from_antisymmetric(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {0: 1}}, validate=False)
    assert check_lie_algebra(L)
    with pytest.raises(LieAlgebraError):
        LieAlgebra.from_antisymmetric(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {0: 1}})


def test_check_representation_examples():
    L = sl2()
    assert check_representation(trivial_rep(L, 2)) == []
    assert check_representation(adjoint_rep(L)) == []
    assert check_representation(sl2_standard(L)) == []
    wrong = Representation(L, 2, [SparseMatrix.from_rows([[0, 1], [0, 0]]),
                                  SparseMatrix.from_rows([[0, 0], [1, 0]]),
                                  SparseMatrix.from_rows([[2, 0], [0, -2]])], validate=False)
    assert check_representation(wrong)
    with pytest.raises(RepresentationError):
        Representation(L, 2, wrong.action)


def test_weight_decompose_sl2_adjoint():
    L = sl2()
    h = L.basis_labels.index("h")
    G = weight_decompose(adjoint_rep(L), h)
    assert G.algebra_weights == (2, -2, 0)
    assert G.module_weights == (2, -2, 0)


def test_weight_decompose_trivial_and_rejections():
    G = weight_decompose(trivial_rep(abelian(2), 3), 0)
    assert set(G.algebra_weights) == {0} and set(G.module_weights) == {0}
    L = sl2()
    e = L.basis_labels.index("e")
    with pytest.raises(RepresentationError):
        weight_decompose(adjoint_rep(L), e)
    half = Representation(abelian(1), 1, [SparseMatrix.diagonal([Fraction(1, 2)])])
    with pytest.raises(RepresentationError):
        weight_decompose(half, 0)


def test_hom_module_invariants():
    L = sl2()
    T = hom_module(trivial_rep(L, 1), trivial_rep(L, 1))
    assert all(A.is_zero() for A in T.action)
    V = sl2_standard(L)
    H = hom_module(V, V)
    assert check_representation(H) == []
    inv = invariants(H)
    assert inv.dim == 1
    assert inv.contains({0: 1, 3: 1})  # identity at a*2+b


def test_hom_module_identity_is_invariant_for_adjoint():
    L = sl2()
    A = adjoint_rep(L)
    H = hom_module(A, A)
    ident = {a * 3 + a: 1 for a in range(3)}
    for M in H.action:
        assert M.apply(ident) == {}


def test_json_round_trip():
    L = sl2()
    assert LieAlgebra.from_json(L.to_json()).structure == L.structure
    V = sl2_standard(L)
    W = Representation.from_json(V.to_json())
    assert list(W.action) == list(V.action)
