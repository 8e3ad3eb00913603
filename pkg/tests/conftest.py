from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from affrep.ce_cohomology import Cochain, coboundary
from affrep.exact_linalg import SparseMatrix
from affrep.lie_core import LieAlgebra, Representation, direct_sum_rep, sl2, sl2_standard, trivial_rep

settings.register_profile("exact", max_examples=100, deadline=None)
settings.load_profile("exact")

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def rational_vectors(n):
    return st.lists(small_q, min_size=n, max_size=n).map(lambda xs: {i: x for i, x in enumerate(xs) if x})


def aff_algebra():
    """The non-abelian 2-dimensional algebra ``[h, e] = e``."""
    return LieAlgebra.from_antisymmetric(2, {(0, 1): {1: 1}}, ["h", "e"])


def aff_line():
    L = aff_algebra()
    return Representation(L, 1, [SparseMatrix.identity(1), SparseMatrix.zeros(1, 1)])


@pytest.fixture
def sl2_alg():
    return sl2()


@pytest.fixture
def sl2_affine():
    from affrep.affine_rep import from_pair

    L = sl2()
    V = direct_sum_rep(sl2_standard(L), trivial_rep(L, 1))
    g = coboundary(Cochain(0, V, {((), 0): Fraction(1), ((), 1): Fraction(2), ((), 2): Fraction(5)}))
    return from_pair(V, g)


@pytest.fixture
def aff_nontrivial():
    from affrep.affine_rep import from_pair

    R = aff_line()
    return from_pair(R, Cochain(1, R, {((1,), 0): 1}))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
