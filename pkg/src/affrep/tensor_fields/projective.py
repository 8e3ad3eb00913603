"""The projective algebra sl_{m+1} of vector fields on R^m and S^1_2 as its graded module."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..ce_cohomology import Cochain
from ..exact_linalg import SparseMatrix, kernel_basis, solve
from ..lie_core import GradedRepresentation, LieAlgebra, Representation, subrepresentation, weight_decompose
from .fields import (
    PolynomialVectorField,
    SymTensor12Field,
    bracket,
    lie_derivative_s12,
    trace,
)
from .polynomials import exponents

__all__ = [
    "ProjectiveAlgebra",
    "sl_projective",
    "S12Module",
    "s12_graded_module",
    "field_cochain",
]


def _unit(m: int, u: int) -> tuple:
    return tuple(int(v == u) for v in range(m))


@dataclass
class ProjectiveAlgebra:
    """``sl_{m+1}`` realized by ``d_i``, ``x^j d_i`` and ``x^a E``.

    The basis replaces ``x^1 d_1`` by the Euler field ``E`` so that the
    grading element is a basis vector.
    """

    m: int
    algebra: LieAlgebra
    fields: list
    euler: int
    labels: list

    def coordinates(self, X: PolynomialVectorField) -> dict | None:
        return _coords(self.fields, X)

    def weights(self) -> list:
        return [f.degree() - 1 for f in self.fields]


def _coords(fields, X):
    keys = {}
    cols = []
    for f in fields:
        col = {}
        for k, c in f.coeffs.items():
            col[keys.setdefault(k, len(keys))] = c
        cols.append(col)
    b = {}
    for k, c in X.coeffs.items():
        if k not in keys:
            return None
        b[keys[k]] = c
    y = solve(SparseMatrix.from_columns(cols, len(keys)), b)
    return None if y is None else {i: x for i, x in enumerate(y) if x}


def sl_projective(m: int) -> ProjectiveAlgebra:
    if m < 2:
        raise ValueError("m > 1 required")
    zero = (0,) * m
    fields, labels = [], []
    for i in range(m):
        fields.append(PolynomialVectorField(m, {i: {zero: 1}}))
        labels.append(f"d{i + 1}")
    E = PolynomialVectorField.euler(m)
    euler = len(fields)
    fields.append(E)
    labels.append("E")
    for i in range(m):
        for j in range(m):
            if (i, j) == (0, 0):
                continue
            fields.append(PolynomialVectorField(m, {i: {_unit(m, j): 1}}))
            labels.append(f"x{j + 1}d{i + 1}")
    for a in range(m):
        fields.append(PolynomialVectorField(m, {u: {tuple(x + y for x, y in zip(_unit(m, a), _unit(m, u))): 1}
                                                for u in range(m)}))
        labels.append(f"x{a + 1}E")
    n = len(fields)
    assert n == (m + 1) ** 2 - 1
    structure = {}
    for i in range(n):
        for j in range(i + 1, n):
            c = _coords(fields, bracket(fields[i], fields[j]))
            if c is None:
                raise ValueError(f"bracket of {labels[i]} and {labels[j]} leaves the span")
            if c:
                structure[(i, j)] = c
    L = LieAlgebra.from_antisymmetric(n, structure, labels)
    return ProjectiveAlgebra(m, L, fields, euler, labels)


@dataclass
class S12Module:
    """Polynomial S^1_2(R^m) truncated to a weight window, as an sl_{m+1} module.

    ``keys[v]`` is the ``(k, i, j, exponent)`` of the v-th basis tensor of
    the full module; for the trace-free variant ``basis`` lists the
    vectors (in those coordinates) spanning it.
    """

    graded: GradedRepresentation
    projective: ProjectiveAlgebra
    keys: list
    index: dict
    trace_free: bool
    basis: list | None = None

    @property
    def rep(self) -> Representation:
        return self.graded.base

    def full_vector(self, S: SymTensor12Field, strict: bool = True) -> dict:
        out = {}
        for (k, i, j), p in S.comps.items():
            for e, c in p.items():
                idx = self.index.get((k, i, j, e))
                if idx is None:
                    if strict:
                        raise ValueError(f"coefficient {(k, i, j, e)} outside the window")
                    continue
                out[idx] = c
        return out

    def vector(self, S: SymTensor12Field) -> dict:
        v = self.full_vector(S)
        if not self.trace_free:
            return v
        y = solve(SparseMatrix.from_columns(self.basis, len(self.keys)), v)
        if y is None:
            raise ValueError("tensor is not trace-free")
        return {i: x for i, x in enumerate(y) if x}

    def tensor(self, vec) -> SymTensor12Field:
        m = self.projective.m
        full = {}
        if self.trace_free:
            for i, x in vec.items():
                for j, y in self.basis[i].items():
                    full[j] = full.get(j, 0) + x * y
        else:
            full = dict(vec)
        comps = {}
        for idx, c in full.items():
            if c:
                k, i, j, e = self.keys[idx]
                comps.setdefault((k, i, j), {})[e] = c
        return SymTensor12Field(m, comps)


def s12_graded_module(m: int, window=(0, 5), trace_free: bool = False, proj: ProjectiveAlgebra | None = None) -> S12Module:
    """S^1_2 with coefficients of degree d (weight d + 1) for weights in ``window``."""
    lo, hi = window
    if hi < lo:
        raise ValueError("empty window")
    proj = proj or sl_projective(m)
    degrees = [d for d in range(0, hi) if lo <= d + 1 <= hi]
    keys = []
    for d in degrees:
        for e in exponents(m, d):
            for k in range(m):
                for i in range(m):
                    for j in range(i, m):
                        keys.append((k, i, j, e))
    index = {key: v for v, key in enumerate(keys)}
    mats = []
    for X in proj.fields:
        cols = []
        for (k, i, j, e) in keys:
            img = lie_derivative_s12(X, SymTensor12Field.monomial(m, k, i, j, e))
            col = {}
            for (kk, ii, jj), p in img.comps.items():
                for ee, c in p.items():
                    idx = index.get((kk, ii, jj, ee))
                    if idx is not None:
                        col[idx] = c
            cols.append(col)
        mats.append(SparseMatrix.from_columns(cols, len(keys)))
    R = Representation(proj.algebra, len(keys), mats, validate=False)
    win = (lo, hi)
    if not trace_free:
        G = weight_decompose(R, proj.euler, win, weight_floor=1 if lo <= 1 else None)
        G.info.update({"m": m, "degrees": degrees, "trace_free": False})
        return S12Module(G, proj, keys, index, False)
    # trace-free part: kernel of tr degree by degree keeps the basis homogeneous
    basis = []
    for d in degrees:
        block = [v for v, key in enumerate(keys) if sum(key[3]) == d]
        tr_cols = []
        tkeys = {}
        for v in block:
            k, i, j, e = keys[v]
            t = trace(SymTensor12Field.monomial(m, k, i, j, e))
            col = {}
            for (ii, ee), c in t.coeffs.items():
                col[tkeys.setdefault((ii, ee), len(tkeys))] = c
            tr_cols.append(col)
        K = kernel_basis(SparseMatrix.from_columns(tr_cols, max(len(tkeys), 1)))
        for vec in K.basis:
            basis.append({block[i]: x for i, x in vec.items()})
    Rt = subrepresentation(R, basis, validate=False)
    G = weight_decompose(Rt, proj.euler, win, weight_floor=1 if lo <= 1 else None)
    G.info.update({"m": m, "degrees": degrees, "trace_free": True})
    return S12Module(G, proj, keys, index, True, basis)


def field_cochain(module: S12Module, p: int, fn) -> Cochain:
    """The p-cochain ``(e_I) -> fn(X_I)`` of the projective algebra with values in ``module``."""
    from itertools import combinations

    fields = module.projective.fields
    coords = {}
    for I in combinations(range(len(fields)), p):
        val = fn(*[fields[i] for i in I])
        for v, c in module.vector(val).items():
            coords[(I, v)] = c
    return Cochain(p, module.rep, coords)
