from fractions import Fraction

import pytest
from hypothesis import given

from affrep.affine_rep import (
    AffineError,
    AffineMap,
    canonical_on_class,
    check_affine_axiom,
    classify_affine_reps,
    classify_from_action,
    direct_sum,
    equivalent,
    from_pair,
    is_intertwining,
    linear_as_affine,
    phi_map,
    rebase,
)
from affrep.ce_cohomology import Cochain, coboundary, cohomology, is_coboundary
from affrep.exact_linalg import SparseMatrix
from affrep.lie_core import LieAlgebra, Representation, direct_sum_rep, sl2, sl2_standard, trivial_rep

from conftest import aff_line, rational_vectors


def three_dim_algebra():
    """``[h, e1] = e1``, ``[h, e2] = 2 e2`` acting on R e1 + R e2 through h only."""
    L = LieAlgebra.from_antisymmetric(3, {(0, 1): {1: 1}, (0, 2): {2: 2}})
    R = Representation(L, 2, [SparseMatrix.diagonal([1, 2]), SparseMatrix.zeros(2, 2), SparseMatrix.zeros(2, 2)])
    return L, R


def test_axiom_examples(sl2_affine, aff_nontrivial):
    pts = [{0: 1, 2: -3}, {}, {1: Fraction(1, 2)}]
    assert check_affine_axiom(linear_as_affine(sl2_standard()), pts[:2]) == []
    assert check_affine_axiom(sl2_affine, pts) == []
    assert check_affine_axiom(aff_nontrivial, [{0: 2}, {}]) == []
    R = sl2_standard()
    broken = Cochain(1, R, {((0,), 0): 1})
    assert not coboundary(broken).is_zero()
    from affrep.affine_rep import AffineRepresentation

    A = AffineRepresentation(R, broken, validate=False)
    assert check_affine_axiom(A, [{0: 1}, {}])
    with pytest.raises(AffineError):
        from_pair(R, broken)


def test_from_pair_coboundary_is_linear():
    V = sl2_standard()
    v = {0: Fraction(2), 1: Fraction(-1)}
    g = coboundary(Cochain(0, V, {((), i): x for i, x in v.items()}))
    A, B = from_pair(V, g), linear_as_affine(V)
    f = AffineMap(SparseMatrix.identity(2), {i: x for i, x in v.items()})
    assert is_intertwining(f, B, A) or is_intertwining(AffineMap(SparseMatrix.identity(2), {i: -x for i, x in v.items()}), B, A)
    assert equivalent(A, B) is not None


@given(rational_vectors(3))
def test_rebase_changes_gamma_by_coboundary(a):
    L = sl2()
    V = direct_sum_rep(sl2_standard(L), trivial_rep(L, 1))
    A = linear_as_affine(V)
    ga = rebase(A, a)
    prim = is_coboundary(ga - A.gamma0)
    assert prim is not None
    assert ga == A.gamma0 + coboundary(Cochain(0, V, {((), i): x for i, x in a.items()}))


def test_rebase_origin_is_identity(aff_nontrivial):
    assert rebase(aff_nontrivial, {}) == aff_nontrivial.gamma0


def test_intertwining_examples(aff_nontrivial):
    A = aff_nontrivial
    assert is_intertwining(AffineMap.identity(1), A, A)
    R = A.model
    # f(a) = a + v intertwines A with the structure gamma - dv
    v = {0: Fraction(3)}
    B = from_pair(R, A.gamma0 - coboundary(Cochain(0, R, {((), 0): 3})))
    assert is_intertwining(AffineMap(SparseMatrix.identity(1), v), A, B)
    assert not is_intertwining(AffineMap(SparseMatrix.zeros(1, 1), {}), A, A)
    with pytest.raises(AffineError):
        is_intertwining(AffineMap.identity(2), A, A)


def test_intertwining_composition(aff_nontrivial):
    A = aff_nontrivial
    R = A.model
    B = from_pair(R, A.gamma0.scale(2))
    C = from_pair(R, A.gamma0.scale(6))
    f = equivalent(A, B)
    g = equivalent(B, C)
    assert f is not None and g is not None
    assert is_intertwining(g.compose(f), A, C)


def test_equivalent_examples(aff_nontrivial):
    A = aff_nontrivial
    f = equivalent(A, A)
    assert f is not None and is_intertwining(f, A, A)
    lam = Fraction(-5, 2)
    B = from_pair(A.model, A.gamma0.scale(lam))
    f = equivalent(A, B)
    assert f is not None and f.linear_part.to_dense() == [[lam]]
    assert equivalent(A, linear_as_affine(A.model)) is None


def test_direct_sum():
    R = aff_line()
    A = from_pair(R, Cochain(1, R, {((1,), 0): 1}))
    empty = Representation(R.algebra, 0, [SparseMatrix.zeros(0, 0)] * 2)
    S = direct_sum(A, linear_as_affine(empty))
    assert S.dim == 1 and S.gamma0.coords == A.gamma0.coords
    D = direct_sum(A, A)
    assert D.gamma0.value((1,)) == {0: 1, 1: 1}
    assert check_affine_axiom(D, [{0: 1, 1: 2}]) == []


def test_canonical_on_class(aff_nontrivial):
    A = aff_nontrivial
    C = canonical_on_class(A.model, A.gamma0)
    assert check_affine_axiom(C, [{0: 1}, {}]) == []
    assert equivalent(A, C) is not None
    assert is_intertwining(phi_map(A, C), A, C)
    with pytest.raises(AffineError):
        canonical_on_class(trivial_rep(sl2(), 1), Cochain.zero(1, trivial_rep(sl2(), 1)))


def test_classification_counts():
    assert classify_affine_reps(sl2_standard()).count == 1
    assert classify_affine_reps(aff_line()).count == 2
    L, R = three_dim_algebra()
    res = classify_affine_reps(R)
    assert res.implemented and res.count == 4
    assert {tuple(c["support"]) for c in res.classes} == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_classification_rejects_nondiagonal_action():
    res = classify_from_action([[[0, -1], [1, 0]]], 2)
    assert not res.implemented and res.count is None
    dep = classify_from_action([[[1, 0], [0, 1]]], 2)
    assert not dep.implemented
