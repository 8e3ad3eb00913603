from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from affrep.affine_rep import AffineMap, equivalent, from_pair, linear_as_affine
from affrep.ce_cohomology import Cochain, CohomologyError, coboundary, is_coboundary
from affrep.exact_linalg import SparseMatrix
from affrep.lie_core import check_representation, sl2, sl2_standard, trivial_rep
from affrep.poly_module import (
    PolyMap,
    SymMultiMap,
    act,
    alpha_cocycle,
    connecting,
    connecting_abstract,
    filtration_ses,
    poly_module,
    pullback,
    rebase,
    sym_module,
    symbol,
    tau_section,
)

from conftest import aff_line, rational_vectors, small_q


def sym_maps(i, n, m):
    keys = [(J, w) for J in combinations_with_replacement(range(n), i) for w in range(m)]
    return st.lists(small_q, min_size=len(keys), max_size=len(keys)).map(
        lambda xs: SymMultiMap(i, n, m, dict(zip(keys, xs))))


def poly_maps(k, n, m):
    return st.tuples(*[sym_maps(i, n, m) for i in range(k + 1)]).map(lambda cs: PolyMap(list(cs)))


def vadd(a, b, s=1):
    out = dict(a)
    for i, x in b.items():
        out[i] = out.get(i, 0) + s * x
    return {i: x for i, x in out.items() if x}


def derivative(p, u, v):
    """``Dp(u)[v]`` from the components."""
    out = {}
    for i in range(1, p.k + 1):
        part = p.components[i].partial([v])
        out = vadd(out, {w: x / factorial(i - 1) for w, x in part.diag(u).items()})
    return out


def quadratic():
    # p(u) = 3 + 2 u0 + u0^2 + u0 u1
    return PolyMap([
        SymMultiMap(0, 2, 1, {((), 0): 3}),
        SymMultiMap(1, 2, 1, {((0,), 0): 2}),
        SymMultiMap(2, 2, 1, {((0, 0), 0): 2, ((0, 1), 0): 1}),
    ])


def test_eval_example():
    p = quadratic()
    assert p({0: 1}) == {0: 6}
    assert p({0: 1, 1: 2}) == {0: 8}
    assert p({}) == {0: 3}
    assert symbol(p).coords == {((0, 0), 0): 2, ((0, 1), 0): 1}


def test_symmetric_map_is_symmetric():
    t = SymMultiMap(2, 2, 1, {((0, 1), 0): 1})
    assert t({0: 1}, {1: 1}) == t({1: 1}, {0: 1}) == {0: 1}
    with pytest.raises(ValueError):
        SymMultiMap(2, 2, 1, {((0,), 0): 1})


@given(poly_maps(3, 2, 1), rational_vectors(2), rational_vectors(2))
def test_rebase_preserves_values(p, w, u):
    assert rebase(p, w)(u) == p(vadd(w, u))


@given(poly_maps(2, 2, 2), rational_vectors(2), rational_vectors(2))
def test_rebase_composes(p, w1, w2):
    assert rebase(rebase(p, w1), w2) == rebase(p, vadd(w1, w2))


def test_rebase_example():
    q = rebase(quadratic(), {0: 1})
    # p(1 + u0, u1) = 6 + 4 u0 + u1 + u0^2 + u0 u1
    assert q.components[0].coords == {((), 0): 6}
    assert q.components[1].coords == {((0,), 0): 4, ((1,), 0): 1}


@settings(max_examples=40)
@given(poly_maps(2, 3, 1), rational_vectors(3))
def test_action_is_derivative_along_the_affine_field(p, u):
    # (x.p)(a) = x.p(a) - Dp(a)[x.a]  for W trivial
    L = sl2()
    from affrep.lie_core import direct_sum_rep

    V = direct_sum_rep(sl2_standard(L), trivial_rep(L, 1))
    A = from_pair(V, coboundary(Cochain(0, V, {((), 2): 1, ((), 0): 2})))
    W = trivial_rep(L, 1)
    for x in range(3):
        lhs = act(x, p, A, W)(u)
        assert lhs == vadd({}, derivative(p, u, A.act(x, u)), -1)


def test_poly_module_is_a_representation(sl2_affine, aff_nontrivial):
    L = sl2_affine.algebra
    for k in (0, 1, 2):
        M = poly_module(sl2_affine, sl2_standard(L), k)
        assert check_representation(M.rep) == []
    assert check_representation(poly_module(aff_nontrivial, trivial_rep(aff_nontrivial.algebra, 1), 3).rep) == []
    assert check_representation(sym_module(sl2_affine.model, trivial_rep(L, 1), 2).rep) == []


@given(poly_maps(2, 3, 2))
def test_vector_round_trip(p):
    L = sl2()
    from affrep.lie_core import direct_sum_rep

    A = linear_as_affine(direct_sum_rep(sl2_standard(L), trivial_rep(L, 1)))
    M = poly_module(A, sl2_standard(L), 2)
    assert M.from_vector(M.to_vector(p)) == p
    assert PolyMap.from_json(p.to_json()) == p


@given(sym_maps(2, 2, 1), rational_vectors(2))
def test_tau_is_a_section(t, u):
    s = tau_section(t)
    assert symbol(s) == t
    assert s(u) == {w: x / 2 for w, x in t.diag(u).items()}


def test_filtration_dimensions(sl2_affine):
    W = trivial_rep(sl2_affine.algebra, 1)
    for k in (1, 2, 3):
        Pk1, Pk, Sk, inc, proj = filtration_ses(sl2_affine, W, k)
        n = sl2_affine.dim
        assert Sk.rep.dim == len(list(combinations_with_replacement(range(n), k)))
        assert Pk.rep.dim == Pk1.rep.dim + Sk.rep.dim
    with pytest.raises(ValueError):
        filtration_ses(sl2_affine, W, 0)


def test_alpha_cocycle_properties(sl2_affine, aff_nontrivial):
    V = sl2_affine.model
    W = trivial_rep(V.algebra, 1)
    for k in (1, 2):
        c, H, _, _ = alpha_cocycle(linear_as_affine(V), W, k)
        assert c.is_zero()
        c, H, _, _ = alpha_cocycle(sl2_affine, W, k)
        assert coboundary(c).is_zero()
        assert is_coboundary(c) is not None
    T = trivial_rep(aff_nontrivial.algebra, 1)
    c, _, _, _ = alpha_cocycle(aff_nontrivial, T, 1)
    assert coboundary(c).is_zero() and not c.is_zero()


def _random_cocycle(R, p, seed):
    import random

    rng = random.Random(seed)
    n = R.algebra.dim
    keys = [(I, v) for I in combinations(range(n), p - 1) for v in range(R.space_dim)]
    b = Cochain(p - 1, R, {k: Fraction(rng.randint(-3, 3)) for k in keys})
    return coboundary(b)


@pytest.mark.parametrize("k", [1, 2])
@pytest.mark.parametrize("p", [1, 2])
def test_connecting_formula_matches_lift(sl2_affine, k, p):
    W = trivial_rep(sl2_affine.algebra, 1)
    Sk = sym_module(sl2_affine.model, W, k)
    for seed in range(3):
        t = _random_cocycle(Sk.rep, p, seed)
        assert connecting(t, sl2_affine, W, k) == connecting_abstract(t, sl2_affine, W, k)


def test_connecting_on_nontrivial_class(aff_nontrivial):
    A = aff_nontrivial
    W = trivial_rep(A.algebra, 1)
    S1 = sym_module(A.model, W, 1)
    # e^*(x) t with t(u) = u is a 1-cocycle of S^1
    inv = Cochain(0, S1.rep, {})
    assert connecting(inv, A, W, 1).is_zero()
    for t in (Cochain(1, S1.rep, {((1,), 0): 1}), Cochain(1, S1.rep, {((0,), 0): 1})):
        if coboundary(t).is_zero():
            assert connecting(t, A, W, 1) == connecting_abstract(t, A, W, 1)
    with pytest.raises(CohomologyError):
        connecting(Cochain(0, S1.rep, {((), 0): 1}), A, W, 1)


@settings(max_examples=30)
@given(poly_maps(2, 1, 1), rational_vectors(1))
def test_pullback_is_composition(q, u):
    R = aff_line()
    A = from_pair(R, Cochain(1, R, {((1,), 0): 1}))
    B = from_pair(R, Cochain(1, R, {((1,), 0): 3}))
    f = equivalent(A, B)
    assert f is not None
    assert pullback(f, q, A, B)(u) == q(f(u))


def test_pullback_rejects_non_intertwiner(aff_nontrivial):
    q = PolyMap.zero(1, 1, 1)
    with pytest.raises(ValueError):
        pullback(AffineMap(SparseMatrix.identity(1), {0: 1}), q, aff_nontrivial, aff_nontrivial)
