from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from affrep.lie_core import check_lie_algebra
from affrep.tensor_fields import (
    Connection,
    OneFormField,
    PolynomialVectorField,
    ScalarField,
    SymContravariantField,
    SymTensor12Field,
    alpha_one,
    bracket,
    contraction_zero,
    d_nabla0,
    desk_h0,
    divergence,
    exponents_upto,
    field_from_json,
    kappa_cocycle,
    lie_derivative_connection,
    lie_derivative_connection_bracket,
    lie_derivative_contravariant,
    lie_derivative_function,
    lie_derivative_one_form,
    lie_derivative_s12,
    monomial_fields,
    pr,
    prettr_solve,
    projectively_equivalent,
    s12_graded_module,
    sl_projective,
    trace,
)

from conftest import small_q

M = 2


def polys(m, d):
    es = exponents_upto(m, d)
    return st.lists(small_q, min_size=len(es), max_size=len(es)).map(
        lambda xs: {e: x for e, x in zip(es, xs) if x})


def vector_fields(m=M, d=2):
    return st.lists(polys(m, d), min_size=m, max_size=m).map(
        lambda ps: PolynomialVectorField(m, {i: p for i, p in enumerate(ps) if p}))


def s12_fields(m=M, d=1):
    keys = [(k, i, j) for k in range(m) for i in range(m) for j in range(i, m)]
    return st.lists(polys(m, d), min_size=len(keys), max_size=len(keys)).map(
        lambda ps: SymTensor12Field(m, {k: p for k, p in zip(keys, ps) if p}))


def one_forms(m=M, d=2):
    return st.lists(polys(m, d), min_size=m, max_size=m).map(
        lambda ps: OneFormField(m, {i: p for i, p in enumerate(ps) if p}))


def vf(comps):
    return PolynomialVectorField(M, comps)


D1, D2 = vf({0: {(0, 0): 1}}), vf({1: {(0, 0): 1}})


def test_bracket_examples():
    x1d1 = vf({0: {(1, 0): 1}})
    assert bracket(D1, x1d1) == D1
    assert bracket(vf({1: {(1, 0): 1}}), vf({0: {(0, 1): 1}})) == vf({0: {(1, 0): 1}, 1: {(0, 1): -1}})
    E = PolynomialVectorField.euler(M)
    for X in monomial_fields(M, 3):
        assert bracket(E, X) == X.scale(2)


@settings(max_examples=30)
@given(vector_fields(), vector_fields(), vector_fields(d=1))
def test_bracket_jacobi_and_antisymmetry(X, Y, Z):
    assert bracket(X, Y) == -bracket(Y, X)
    j = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y))
    assert j.is_zero()


@settings(max_examples=30)
@given(vector_fields(), vector_fields(), s12_fields(), one_forms())
def test_lie_derivative_is_an_action(X, Y, S, a):
    XY = bracket(X, Y)
    assert lie_derivative_s12(XY, S) == (lie_derivative_s12(X, lie_derivative_s12(Y, S))
                                         - lie_derivative_s12(Y, lie_derivative_s12(X, S)))
    assert lie_derivative_one_form(XY, a) == (lie_derivative_one_form(X, lie_derivative_one_form(Y, a))
                                              - lie_derivative_one_form(Y, lie_derivative_one_form(X, a)))


@settings(max_examples=20)
@given(vector_fields(), vector_fields(d=1), polys(M, 2))
def test_contravariant_and_function_actions(X, Y, p):
    P = SymContravariantField(M, {(0, 1): p, (1, 1): {(1, 0): 1}}, 2)
    XY = bracket(X, Y)
    lhs = lie_derivative_contravariant(XY, P)
    rhs = (lie_derivative_contravariant(X, lie_derivative_contravariant(Y, P))
           - lie_derivative_contravariant(Y, lie_derivative_contravariant(X, P)))
    assert lhs == rhs
    f = ScalarField(M, p)
    lf = lie_derivative_function(XY, f)
    assert lf == (lie_derivative_function(X, lie_derivative_function(Y, f))
                  - lie_derivative_function(Y, lie_derivative_function(X, f)))


@settings(max_examples=25)
@given(vector_fields(d=3), s12_fields())
def test_connection_formula_matches_bracket_formula(X, S):
    nabla = Connection.flat(M).shifted(S)
    assert lie_derivative_connection(X, nabla) == lie_derivative_connection_bracket(X, nabla)


@settings(max_examples=25)
@given(vector_fields(), vector_fields())
def test_connection_map_is_a_cocycle(X, Y):
    n0 = Connection.flat(M)
    lhs = lie_derivative_connection(bracket(X, Y), n0)
    rhs = lie_derivative_s12(X, lie_derivative_connection(Y, n0)) - lie_derivative_s12(Y, lie_derivative_connection(X, n0))
    assert lhs == rhs


def test_flat_connection_is_affine_invariant():
    n0 = Connection.flat(M)
    for d in (0, 1):
        for X in monomial_fields(M, d):
            assert lie_derivative_connection(X, n0).is_zero()
    X = vf({0: {(2, 0): 1}})
    assert lie_derivative_connection(X, n0) == SymTensor12Field(M, {(0, 0, 0): {(0, 0): 2}})


@given(one_forms(), s12_fields())
def test_trace_decomposition(a, S):
    assert trace(alpha_one(a)) == a.scale(M + 1)
    assert pr(alpha_one(a)).is_zero()
    assert trace(pr(S)).is_zero()
    assert pr(pr(S)) == pr(S)
    assert pr(S) + alpha_one(trace(S)).scale(Fraction(1, M + 1)) == S


@given(one_forms(), s12_fields())
def test_projective_equivalence(a, S):
    n0 = Connection.flat(M)
    assert projectively_equivalent(n0, n0.shifted(alpha_one(a)))
    assert projectively_equivalent(n0, n0.shifted(S)) == pr(S).is_zero()


def test_divergence_example():
    X = vf({0: {(2, 0): 1}, 1: {(1, 1): 3}})
    assert divergence(X) == {(1, 0): 5}
    assert divergence(PolynomialVectorField.euler(3)) == {(0, 0, 0): 3}


def test_kappa_is_a_cocycle():
    fields = [D1, PolynomialVectorField.euler(M), vf({0: {(2, 0): 1}}), vf({1: {(1, 1): 1}}), vf({0: {(0, 3): 1}})]
    for a, b in ((1, 0), (0, 1), (Fraction(1, 2), 3)):
        k = kappa_cocycle(a, b)
        for X in fields:
            for Y in fields:
                for Z in fields:
                    d = (lie_derivative_s12(X, k(Y, Z)) - lie_derivative_s12(Y, k(X, Z)) + lie_derivative_s12(Z, k(X, Y))
                         - k(bracket(X, Y), Z) + k(bracket(X, Z), Y) - k(bracket(Y, Z), X))
                    assert d.is_zero()
        assert k(D1, D1).is_zero()


def test_contraction_and_flat_divergence():
    S = SymTensor12Field(M, {(0, 0, 1): {(0, 0): 1}})
    P = SymContravariantField(M, {(0, 1): {(1, 0): 1}}, 2)
    # S^0_01 P^01 + S^0_10 P^10
    assert contraction_zero(S, P) == SymContravariantField(M, {(0,): {(1, 0): 2}}, 1)
    assert d_nabla0(P) == SymContravariantField(M, {(1,): {(0, 0): 1}}, 1)
    with pytest.raises(ValueError):
        d_nabla0(SymContravariantField(M, {(0,): {(0, 0): 1}}, 1))


@pytest.mark.parametrize("m", [2, 3])
def test_sl_projective(m):
    P = sl_projective(m)
    assert P.algebra.dim == (m + 1) ** 2 - 1
    assert check_lie_algebra(P.algebra) == []
    w = P.weights()
    assert w.count(-1) == m and w.count(1) == m and P.weights()[P.euler] == 0
    assert P.coordinates(bracket(P.fields[0], P.fields[-1])) is not None
    assert P.coordinates(vf({0: {(2, 0): 1}})) is None


def test_s12_module_dimensions():
    full = s12_graded_module(2, (0, 1))
    tf = s12_graded_module(2, (0, 1), trace_free=True)
    assert full.rep.dim == 6 and tf.rep.dim == 4
    S = SymTensor12Field.monomial(2, 0, 0, 1, (0, 0))
    assert full.tensor(full.vector(S)) == S
    T = pr(SymTensor12Field.monomial(2, 0, 0, 0, (0, 0)))
    assert tf.tensor(tf.vector(T)) == T
    with pytest.raises(ValueError):
        tf.vector(S)


def test_json_round_trip():
    fields = [vf({0: {(2, 1): Fraction(-1, 3)}}), SymTensor12Field.monomial(2, 1, 0, 1, (1, 1), 5),
              OneFormField(2, {1: {(0, 0): 2}}), ScalarField(2, {(1, 2): 7}),
              SymContravariantField(2, {(0, 1): {(0, 0): 1}}, 2), Connection.flat(2).shifted(SymTensor12Field.monomial(2, 0, 0, 0, (0, 0)))]
    for f in fields:
        g = field_from_json(f.to_json())
        assert type(g) is type(f) and g == f


def test_desk_h0_small():
    res = desk_h0(2, field_degree=2, coeff_degree=2)
    assert res["kernel_dim"] == 0


def test_prettr_coefficients():
    res = prettr_solve(2)
    assert (res["p"], res["q"], res["r"]) == (1, Fraction(1, 2), 1)
