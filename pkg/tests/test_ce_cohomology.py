from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from affrep.ce_cohomology import (
    Cochain,
    CohomologyError,
    class_coordinates,
    coboundary,
    cohomology,
    cohomology_dims,
    full_complex,
    induced_map,
    is_coboundary,
    weight_subcomplex,
    weight_zero_subcomplex,
)
from affrep.exact_linalg import SparseMatrix
from affrep.lie_core import (
    GradedRepresentation,
    abelian,
    adjoint_rep,
    invariants,
    sl2,
    sl2_standard,
    trivial_rep,
    weight_decompose,
)
from affrep.tensor_fields import s12_graded_module

from conftest import aff_line, small_q

L = sl2()
MODULES = {"adjoint": adjoint_rep(L), "standard": sl2_standard(L), "trivial": trivial_rep(L, 1)}


def cochains(R, p):
    keys = [(I, v) for I in combinations(range(R.algebra.dim), p) for v in range(R.space_dim)]
    return st.lists(small_q, min_size=len(keys), max_size=len(keys)).map(
        lambda xs: Cochain(p, R, {k: x for k, x in zip(keys, xs) if x}))


def test_zero_cochain_coboundary_is_action():
    R = MODULES["standard"]
    v = Cochain(0, R, {((), 0): 2, ((), 1): -1})
    dv = coboundary(v)
    for x in range(3):
        assert dv.value((x,)) == R.act(x, {0: 2, 1: -1})


@pytest.mark.parametrize("name", sorted(MODULES))
@pytest.mark.parametrize("p", [0, 1, 2])
def test_d_squared_zero(name, p):
    R = MODULES[name]

    @given(cochains(R, p))
    def check(c):
        assert coboundary(coboundary(c)).is_zero()

    check()


def test_cochain_value_is_antisymmetric():
    R = MODULES["adjoint"]
    c = Cochain(2, R, {((0, 2), 1): 3})
    assert c.value((2, 0)) == {1: -3}
    assert c.value((0, 0)) == {}


def test_cohomology_examples():
    A1 = abelian(1)
    assert cohomology(trivial_rep(A1, 1), 1).dimension == 1
    assert cohomology(MODULES["adjoint"], 1).dimension == 0
    R = MODULES["trivial"]
    assert cohomology(R, 0).dimension == invariants(R).dim == 1
    assert cohomology_dims(MODULES["trivial"], 3) == [1, 0, 0, 1]
    assert cohomology_dims(MODULES["standard"], 3) == [0, 0, 0, 0]


def test_representatives_are_cocycles_not_coboundaries():
    R = trivial_rep(L, 1)
    res = cohomology(R, 3)
    assert res.dimension == 1
    assert res.dimension == res.cocycle_rank - res.boundary_rank
    for r in res.representatives:
        assert coboundary(r).is_zero()
        assert is_coboundary(r) is None


def test_is_coboundary_round_trip():
    R = MODULES["adjoint"]
    b = Cochain(1, R, {((0,), 2): 1, ((2,), 1): Fraction(1, 3)})
    c = coboundary(b)
    prim = is_coboundary(c)
    assert prim is not None and coboundary(prim) == c
    assert is_coboundary(Cochain.zero(2, R)) is not None
    with pytest.raises(CohomologyError):
        is_coboundary(Cochain(1, R, {((0,), 0): 1}))


def test_non_semisimple_h1():
    R = aff_line()
    res = cohomology(R, 1)
    assert res.dimension == 1
    g = res.representatives[0]
    assert class_coordinates(res, g.scale(3)) == [3 * class_coordinates(res, g)[0]]


def test_weight_zero_trivial_grading_equals_full():
    A2 = abelian(2)
    R = trivial_rep(A2, 2)
    G = weight_decompose(R, 0)
    cx = weight_zero_subcomplex(G, 1)
    full = full_complex(R, 1)
    assert [cx.dim(p) for p in range(3)] == [full.dim(p) for p in range(3)]
    assert cohomology(G, 1).dimension == cohomology(R, 1).dimension == 4


def test_weight_zero_matches_full_complex_on_sl2():
    h = L.basis_labels.index("h")
    for R in MODULES.values():
        G = weight_decompose(R, h)
        for p in range(3):
            assert cohomology(G, p).dimension == cohomology(R, p).dimension


def test_nonzero_weight_sectors_are_acyclic():
    h = L.basis_labels.index("h")
    G = weight_decompose(adjoint_rep(L), h)
    for w in (-4, -2, 2, 4):
        cx = weight_subcomplex(G, 2, w)
        for p in range(3):
            assert cohomology(G, p, cx).dimension == 0


def test_window_too_narrow_rejected():
    M = s12_graded_module(2, (0, 1))
    with pytest.raises(CohomologyError, match="window"):
        weight_zero_subcomplex(M.graded, 2)
    assert weight_zero_subcomplex(s12_graded_module(2, (0, 2)).graded, 2).dim(1) == 12


def test_weight_zero_sl3_sizes_and_window_invariance():
    M5 = s12_graded_module(2, (0, 5))
    M6 = s12_graded_module(2, (0, 6))
    cx5 = weight_zero_subcomplex(M5.graded, 2)
    assert cx5.dim(2) == 60
    for p in (1, 2):
        assert cohomology(M5.graded, p).dimension == cohomology(M6.graded, p).dimension


def test_induced_map_identity():
    R = trivial_rep(L, 1)
    res = cohomology(R, 3)
    F = induced_map(SparseMatrix.identity(1), res, res)
    assert F.to_dense() == [[1]]


def test_cochain_json_round_trip():
    R = MODULES["adjoint"]
    c = Cochain(2, R, {((0, 1), 2): Fraction(-2, 3)})
    assert Cochain.from_json(c.to_json(), R) == c
