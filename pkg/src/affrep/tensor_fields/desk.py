"""Exact computations on polynomial tensor fields of bounded degree.

Everything here is a finite linear-algebra problem over Q: unknown
polynomial coefficients, equations obtained by expanding Lie derivatives
on monomial vector fields, and exact kernels.  Results hold for the
stated degree bounds only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod

from ..affine_rep import Classification, classify_from_action
from ..exact_linalg import SparseMatrix, kernel_basis, rank, solve
from .fields import (
    Connection,
    PolynomialVectorField,
    SymContravariantField,
    SymTensor12Field,
    alpha_one,
    bracket,
    cocycles_pr_tr,
    contraction_zero,
    d_nabla0,
    lie_derivative_connection,
    lie_derivative_contravariant,
    lie_derivative_s12,
    monomial_fields,
    pr,
    trace,
)
from .polynomials import exponents, exponents_upto

__all__ = [
    "DiffOp",
    "s12_keys",
    "s12_flat",
    "desk_h0",
    "EquivariantMaps",
    "desk_equivariant_maps",
    "DeskH1",
    "desk_h1",
    "desk_classification",
    "desk_connecting",
    "prettr_solve",
    "pr_tr_vectors",
]


def s12_keys(m: int) -> list:
    return [(k, i, j) for k in range(m) for i in range(m) for j in range(i, m)]


def s12_flat(S: SymTensor12Field) -> dict:
    """``{(k, i, j, exponent): value}``."""
    return {(k, i, j, e): c for (k, i, j), p in S.comps.items() for e, c in p.items()}


def _from_flat(m: int, flat: dict) -> SymTensor12Field:
    comps = {}
    for (k, i, j, e), c in flat.items():
        if c:
            comps.setdefault((k, i, j), {})[e] = c
    return SymTensor12Field(m, comps)


def _kernel_of_rows(rows: list, ncols: int) -> list:
    rows = [r for r in rows if r]
    A = SparseMatrix(len(rows), ncols, {(r, c): x for r, row in enumerate(rows) for c, x in row.items()})
    return list(kernel_basis(A).basis)


class _RowCollector:
    """Accumulates linear equations ``sum_u coef_u * unknown_u = 0`` keyed by output coordinate."""

    def __init__(self):
        self.rows = {}

    def add(self, out_key, unknown, coef):
        if not coef:
            return
        row = self.rows.setdefault(out_key, {})
        s = row.get(unknown, 0) + coef
        if s:
            row[unknown] = s
        else:
            del row[unknown]

    def flush(self) -> list:
        out = [r for r in self.rows.values() if r]
        self.rows = {}
        return out


# ---------------------------------------------------------------------------
# H^0

def desk_h0(m: int, field_degree: int = 2, coeff_degree: int = 4) -> dict:
    """Kernel of ``S -> (L_X S)_X`` over S with coefficients of degree ``<= coeff_degree``
    and monomial X of degree ``<= field_degree``."""
    unknowns = [(k, i, j, e) for e in exponents_upto(m, coeff_degree) for (k, i, j) in s12_keys(m)]
    rows = []
    for d in range(field_degree + 1):
        for X in monomial_fields(m, d):
            col = _RowCollector()
            for u, (k, i, j, e) in enumerate(unknowns):
                img = lie_derivative_s12(X, SymTensor12Field.monomial(m, k, i, j, e))
                for key, c in s12_flat(img).items():
                    col.add(key, u, c)
            rows.extend(col.flush())
    K = _kernel_of_rows(rows, len(unknowns))
    return {"unknowns": len(unknowns), "equations": len(rows), "kernel_dim": len(K),
            "kernel": [_from_flat(m, {unknowns[u]: c for u, c in v.items()}) for v in K]}


# ---------------------------------------------------------------------------
# differential operators S^1_2 -> S^1_2

@dataclass
class DiffOp:
    """``T(S)^out = sum coef * x^gamma d^beta S^in`` over terms ``(out, in, beta, gamma)``."""

    m: int
    terms: dict = field(default_factory=dict)

    def apply(self, S: SymTensor12Field) -> SymTensor12Field:
        out = {}
        for (o, i, beta, gamma), c in self.terms.items():
            p = S.comps.get(i)
            if not p:
                continue
            for e, x in p.items():
                if any(a < b for a, b in zip(e, beta)):
                    continue
                f = prod(factorial(a) // factorial(a - b) for a, b in zip(e, beta))
                ne = tuple(a - b + g for a, b, g in zip(e, beta, gamma))
                key = o + (ne,)
                out[key] = out.get(key, 0) + c * x * f
        return _from_flat(self.m, out)

    __call__ = apply

    @classmethod
    def from_pointwise(cls, m: int, fn) -> "DiffOp":
        """Order-zero operator with constant coefficients from a pointwise linear map."""
        zero = (0,) * m
        terms = {}
        for key in s12_keys(m):
            img = fn(SymTensor12Field(m, {key: {zero: 1}}))
            for (o, e), c in img.coeffs.items():
                terms[(o, key, zero, zero)] = c
        return cls(m, terms)

    def vector(self) -> dict:
        return dict(self.terms)

    def order(self) -> int:
        return max((sum(t[2]) for t in self.terms), default=-1)


@dataclass
class EquivariantMaps:
    m: int
    order: int
    coeff_degree: int
    field_degree: int
    unknowns: int
    stages: list
    basis: list  # DiffOp
    contains_pr_tr: bool
    span_equals_pr_tr: bool

    @property
    def dim(self) -> int:
        return len(self.basis)


def desk_equivariant_maps(m: int, order: int = 2, coeff_degree: int = 2, field_degree: int = 2,
                          test_degree: int | None = None) -> EquivariantMaps:
    """Operators of order ``<= order`` with coefficients of degree ``<= coeff_degree`` that commute
    with ``L_X`` for every monomial X of degree ``<= field_degree``.

    ``[L_X, T]`` has order at most ``order``, so it vanishes iff it kills all
    tensors with coefficients of degree ``<= order``; ``test_degree`` defaults
    to one more than that.  Equations are imposed field degree by field
    degree, substituting the kernel found so far.
    """
    test_degree = order + 1 if test_degree is None else test_degree
    keys = s12_keys(m)
    unknowns = [(o, i, b, g) for o in keys for i in keys
                for b in exponents_upto(m, order) for g in exponents_upto(m, coeff_degree)]
    uindex = {u: n for n, u in enumerate(unknowns)}
    tests = [(key, e) for e in exponents_upto(m, test_degree) for key in keys]
    # current solution space: list of sparse combinations of unknowns
    space = None
    stages = []
    for d in range(field_degree + 1):
        Xs = monomial_fields(m, d)
        if space is None:
            ops = [DiffOp(m, {u: Fraction(1)}) for u in unknowns]
        else:
            ops = [DiffOp(m, {unknowns[u]: c for u, c in v.items()}) for v in space]
        rows = []
        for X in Xs:
            col = _RowCollector()
            for key, e in tests:
                S = SymTensor12Field(m, {key: {e: 1}})
                LS = lie_derivative_s12(X, S)
                for n, T in enumerate(ops):
                    TS = T.apply(S)
                    if TS.is_zero():
                        lhs = {}
                    else:
                        lhs = s12_flat(lie_derivative_s12(X, TS))
                    rhs = s12_flat(T.apply(LS)) if not LS.is_zero() else {}
                    for k2, c in lhs.items():
                        col.add((key, e, k2), n, c)
                    for k2, c in rhs.items():
                        col.add((key, e, k2), n, -c)
            rows.extend(col.flush())
        K = _kernel_of_rows(rows, len(ops))
        if space is None:
            space = K
        else:
            new = []
            for v in K:
                acc = {}
                for n, c in v.items():
                    for u, x in space[n].items():
                        acc[u] = acc.get(u, 0) + c * x
                new.append({u: x for u, x in acc.items() if x})
            space = new
        stages.append({"field_degree": d, "equations": len(rows), "dim": len(space)})
    basis = [DiffOp(m, {unknowns[u]: c for u, c in v.items()}) for v in space]
    known = [DiffOp.from_pointwise(m, pr),
             DiffOp.from_pointwise(m, lambda S: alpha_one(trace(S)))]
    kv = [{uindex[t]: c for t, c in op.terms.items()} for op in known]
    sv = [dict(v) for v in space]
    r_space = rank(sv, len(unknowns)) if sv else 0
    r_all = rank(sv + kv, len(unknowns))
    contains = r_all == r_space
    equal = contains and r_space == rank(kv, len(unknowns))
    return EquivariantMaps(m, order, coeff_degree, field_degree, len(unknowns), stages, basis,
                           contains, equal)


# ---------------------------------------------------------------------------
# H^1 at Euler weight zero

@dataclass
class DeskH1:
    """Weight-zero 1-cocycles on monomial fields of degree ``2..D``.

    Such a cochain sends a field of degree d to a tensor with coefficients of
    degree ``d - 2`` and vanishes on fields of degree ``<= 1``.  There are no
    weight-zero coboundaries (they would come from tensors of degree -1).
    """

    m: int
    D: int
    fields: list  # (degree, key) with key = (i, exponent)
    unknowns: list  # (field index, (k, i, j, exponent))
    uindex: dict
    basis: list  # cocycle vectors
    equations: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vector(self, fn) -> dict:
        """Coordinates of the cochain ``X -> fn(X)`` (only fields of degree 2..D are read)."""
        out = {}
        for f, (i, e) in enumerate(self.fields):
            X = PolynomialVectorField.monomial(self.m, i, e)
            for key, c in s12_flat(fn(X)).items():
                u = self.uindex.get((f, key))
                if u is None:
                    raise ValueError(f"value {key} on field {(i, e)} is not of weight zero")
                out[u] = c
        return out

    def coordinates(self, vec: dict) -> list | None:
        y = solve(SparseMatrix.from_columns(self.basis, len(self.unknowns)), vec)
        return y

    def apply_map(self, vec: dict, T) -> dict:
        """Coordinates of ``X -> T(c(X))``."""
        per_field = {}
        for u, c in vec.items():
            f, key = self.unknowns[u]
            per_field.setdefault(f, {})[key] = c
        out = {}
        for f, flat in per_field.items():
            img = T(_from_flat(self.m, flat))
            for key, c in s12_flat(img).items():
                out[self.uindex[(f, key)]] = c
        return out

    def is_cocycle(self, vec: dict) -> bool:
        return rank(self.basis + [vec], len(self.unknowns)) == len(self.basis)


def _field_value(m, coeff_by_field, X: PolynomialVectorField, findex: dict, col: _RowCollector, sign, tag,
                 transform=None):
    """Add ``sign * c(X)`` (optionally transformed) to the equations under ``tag``."""
    for (i, e), a in X.coeffs.items():
        f = findex.get((i, e))
        if f is None:
            if sum(e) >= 2:
                raise ValueError("field degree beyond the bound")
            continue
        for u, key in coeff_by_field[f]:
            S = SymTensor12Field(m, {key[:3]: {key[3]: 1}})
            if transform is not None:
                S = transform(S)
            for k2, c in s12_flat(S).items():
                col.add((tag, k2), u, sign * a * c)


def desk_h1(m: int, D: int = 4) -> DeskH1:
    fields = [(i, e) for d in range(2, D + 1) for e in exponents(m, d) for i in range(m)]
    findex = {key: n for n, key in enumerate(fields)}
    unknowns = []
    coeff_by_field = []
    for f, (i, e) in enumerate(fields):
        lst = []
        for ce in exponents(m, sum(e) - 2):
            for key in s12_keys(m):
                lst.append((len(unknowns), key + (ce,)))
                unknowns.append((f, key + (ce,)))
        coeff_by_field.append(lst)
    uindex = {u: n for n, u in enumerate(unknowns)}
    allf = [(i, e) for d in range(0, D + 1) for e in exponents(m, d) for i in range(m)]
    rows = []
    for a, (i1, e1) in enumerate(allf):
        for b in range(a + 1, len(allf)):
            i2, e2 = allf[b]
            d1, d2 = sum(e1), sum(e2)
            if d1 + d2 - 1 > D or max(d1, d2) < 2:
                continue
            X = PolynomialVectorField.monomial(m, i1, e1)
            Y = PolynomialVectorField.monomial(m, i2, e2)
            col = _RowCollector()
            # L_X c(Y) - L_Y c(X) - c([X,Y]) = 0
            _field_value(m, coeff_by_field, Y, findex, col, 1, 0, lambda S: lie_derivative_s12(X, S))
            _field_value(m, coeff_by_field, X, findex, col, -1, 0, lambda S: lie_derivative_s12(Y, S))
            _field_value(m, coeff_by_field, bracket(X, Y), findex, col, -1, 0)
            rows.extend(col.flush())
    K = _kernel_of_rows(rows, len(unknowns))
    return DeskH1(m, D, fields, unknowns, uindex, K, len(rows))


def pr_tr_vectors(H: DeskH1) -> tuple:
    l_pr, l_tr = cocycles_pr_tr(Connection(H.m))
    return H.vector(l_pr), H.vector(l_tr)


def desk_classification(H: DeskH1, maps: list) -> dict:
    """Orbits of the weight-zero H^1 under the invariant maps ``maps`` (callables on S^1_2).

    The H^1 basis used is ``(L^pr, L^tr)`` once it is checked to span;
    each class is named by the standard cocycle in the same orbit.
    """
    vpr, vtr = pr_tr_vectors(H)
    n = len(H.unknowns)
    if not (H.is_cocycle(vpr) and H.is_cocycle(vtr)):
        raise ValueError("L^pr or L^tr fails the cocycle equations")
    basis = [vpr, vtr]
    if rank(basis, n) != 2 or H.dim != 2:
        return {"implemented": False, "note": f"H^1 has dimension {H.dim}", "count": None}
    B = SparseMatrix.from_columns(basis, n)
    action = []
    for T in maps:
        cols = []
        for v in basis:
            y = solve(B, H.apply_map(v, T))
            if y is None:
                raise ValueError("invariant map does not preserve the cocycle space")
            cols.append(y)
        action.append([[cols[j][i] for j in range(2)] for i in range(2)])
    result: Classification = classify_from_action(action, 2)
    out = {"implemented": result.implemented, "count": result.count, "note": result.note,
           "characters": [[str(x) for x in row] for row in result.characters],
           "action": [[[str(x) for x in row] for row in M] for M in action]}
    if not result.implemented:
        return out
    # eigen-coordinates: the characters are computed on eigenvectors of the action
    l_full = {u: vpr.get(u, 0) + Fraction(1, H.m + 1) * vtr.get(u, 0) for u in set(vpr) | set(vtr)}
    named = {"0": {}, "L": l_full, "L^pr": vpr, "L^tr": vtr}
    eig = _eigenvectors(action)
    E = SparseMatrix.from_columns(eig, 2)

    def pattern(vec):
        y = solve(B, vec) if vec else [0, 0]
        z = solve(E, {i: x for i, x in enumerate(y) if x})
        return tuple(int(bool(x)) for x in z)

    patterns = {name: pattern(v) for name, v in named.items()}
    classes = []
    for c in result.classes:
        names = [k for k, p in patterns.items() if p == tuple(c["support"])]
        classes.append({"class_id": c["class_id"], "support": list(c["support"]),
                        "representative": [str(x) for x in c["representative"]], "named": names})
    out["classes"] = classes
    out["named_patterns"] = {k: list(v) for k, v in patterns.items()}
    return out


def _eigenvectors(action: list) -> list:
    from ..affine_rep import _char_poly, _rational_roots

    s = len(action[0])
    generic = [[sum((k + 1) ** 2 * Fraction(action[k][i][j]) for k in range(len(action))) for j in range(s)]
               for i in range(s)]
    vecs = []
    for lam in _rational_roots(_char_poly(generic)):
        M = SparseMatrix.from_rows([[generic[i][j] - (lam if i == j else 0) for j in range(s)] for i in range(s)])
        vecs.extend(kernel_basis(M).basis)
    return vecs


def desk_connecting(H: DeskH1, t) -> dict:
    """``chi(t)`` for an invariant ``t`` in ``S^1(C, S^1_2) = Hom(S^1_2, S^1_2)``.

    The formula ``t^chi_{x0..xp} = sum_i (-1)^(i+1) t_{..^xi..}(x_i . a0)`` with
    ``p = 0`` and base point the flat connection gives ``X -> -t(L_X nabla0)``.
    """
    n0 = Connection(H.m)

    def chi(X):
        return t(lie_derivative_connection(X, n0)).scale(-1)

    return H.vector(chi)


def prettr_solve(m: int, field_degree: int = 2, p_degree: int = 2) -> dict:
    """Solve ``p * 0(L_X n0)(P) + q * 0(L^tr(X))(P) = r * (dD)(X)(P)`` for (p, q, r).

    ``(dD)(X)(P) = L_X(D P) - D(L_X P)`` is the coboundary of ``D`` in the
    module of operators.  Equations run over monomial X of degree
    ``field_degree`` and monomial P of degree ``<= p_degree``.
    """
    n0 = Connection(m)
    rows = _RowCollector()
    for xn, X in enumerate(monomial_fields(m, field_degree)):
        L = lie_derivative_connection(X, n0)
        Ltr = alpha_one(trace(L))
        for e in exponents_upto(m, p_degree):
            for I in [(a, b) for a in range(m) for b in range(a, m)]:
                P = SymContravariantField(m, {I: {e: 1}}, 2)
                terms = [contraction_zero(L, P), contraction_zero(Ltr, P),
                         lie_derivative_contravariant(X, d_nabla0(P)) - d_nabla0(lie_derivative_contravariant(X, P))]
                for u, (T, s) in enumerate(zip(terms, (1, 1, -1))):
                    for key, c in T.coeffs.items():
                        rows.add((xn, I, e, key), u, s * c)
    R = rows.flush()
    K = _kernel_of_rows(R, 3)
    out = {"equations": len(R), "solution_dim": len(K)}
    if len(K) == 1:
        v = [K[0].get(i, Fraction(0)) for i in range(3)]
        if v[2]:
            v = [x / v[2] for x in v]
        out.update({"p": v[0], "q": v[1], "r": v[2]})
    return out
