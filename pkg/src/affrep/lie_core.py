"""Finite-dimensional Lie algebras, their representations and weight gradings."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact_linalg import (
    SparseMatrix,
    format_rational,
    kernel_basis,
    parse_rational,
)

__all__ = [
    "LieAlgebraError",
    "RepresentationError",
    "LieAlgebra",
    "Representation",
    "GradedRepresentation",
    "check_lie_algebra",
    "check_representation",
    "weight_decompose",
    "hom_module",
    "subrepresentation",
    "direct_sum_rep",
    "trivial_rep",
    "adjoint_rep",
    "abelian",
    "sl2",
    "sl2_standard",
    "invariants",
]


class LieAlgebraError(ValueError):
    pass


class RepresentationError(ValueError):
    pass


class LieAlgebra:
    """A Lie algebra given by structure constants ``[e_i, e_j] = sum_k c^k_ij e_k``.

    ``structure`` maps ``(i, j)`` to a sparse dict ``{k: c^k_ij}``.  Only the
    pairs actually supplied are stored; no antisymmetrization is applied,
    so malformed tables can be inspected with :func:`check_lie_algebra`.
    """

    def __init__(self, dim: int, structure: dict, basis_labels: Sequence[str] | None = None,
                 validate: bool = True):
        self.dim = int(dim)
        table = {}
        for (i, j), vec in structure.items():
            vec = {int(k): Fraction(v) for k, v in vec.items() if v}
            if vec:
                table[(int(i), int(j))] = vec
        self.structure = table
        self.basis_labels = tuple(basis_labels) if basis_labels else tuple(f"e{i}" for i in range(self.dim))
        if len(self.basis_labels) != self.dim:
            raise LieAlgebraError("one label per basis element required")
        if validate:
            problems = check_lie_algebra(self)
            if problems:
                raise LieAlgebraError(f"invalid structure constants: {problems[:3]}")

    @classmethod
    def from_antisymmetric(cls, dim: int, brackets: dict, basis_labels=None, validate=True):
        """Build from brackets listed for ``i < j`` only."""
        table = {}
        for (i, j), vec in brackets.items():
            table[(i, j)] = dict(vec)
            table[(j, i)] = {k: -Fraction(v) for k, v in vec.items()}
        return cls(dim, table, basis_labels, validate)

    def bracket_basis(self, i: int, j: int) -> dict:
        return self.structure.get((i, j), {})

    def bracket(self, x, y) -> dict:
        """Bracket of two elements given as coefficient dicts."""
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.structure.get((i, j), {}).items():
                    s = out.get(k, 0) + a * b * c
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out

    def ad(self, i: int) -> SparseMatrix:
        """Matrix of ``ad(e_i)`` with columns indexed by the basis."""
        ent = {}
        for j in range(self.dim):
            for k, c in self.structure.get((i, j), {}).items():
                ent[(k, j)] = c
        return SparseMatrix(self.dim, self.dim, ent)

    def to_json(self) -> dict:
        rows = []
        for (i, j), vec in sorted(self.structure.items()):
            for k, c in sorted(vec.items()):
                rows.append([i, j, k, format_rational(c)])
        return {"dim": self.dim, "labels": list(self.basis_labels), "structure": rows}

    @classmethod
    def from_json(cls, data: dict, validate: bool = True):
        table = {}
        for i, j, k, c in data["structure"]:
            table.setdefault((i, j), {})[k] = parse_rational(c)
        return cls(data["dim"], table, data.get("labels"), validate)

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim})"


def check_lie_algebra(L: LieAlgebra) -> list:
    """Every violated antisymmetry or Jacobi instance; empty means valid."""
    problems = []
    n = L.dim
    for i in range(n):
        for j in range(i, n):
            a = L.bracket_basis(i, j)
            b = L.bracket_basis(j, i)
            keys = set(a) | set(b)
            bad = [k for k in keys if a.get(k, 0) + b.get(k, 0) != 0]
            if bad:
                problems.append(("antisymmetry", i, j, bad))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                tot = {}
                for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
                    inner = L.bracket_basis(x, y)
                    part = L.bracket({u: c for u, c in inner.items()}, {z: 1})
                    for v, c in part.items():
                        tot[v] = tot.get(v, 0) + c
                bad = [v for v, c in tot.items() if c]
                if bad:
                    problems.append(("jacobi", i, j, k, bad))
    return problems


class Representation:
    """A representation of ``algebra`` on Q^space_dim, one matrix per basis element."""

    def __init__(self, algebra: LieAlgebra, space_dim: int, action: Sequence[SparseMatrix],
                 validate: bool = True, labels: Sequence | None = None):
        self.algebra = algebra
        self.space_dim = int(space_dim)
        self.action = tuple(action)
        self.labels = tuple(labels) if labels is not None else None
        if len(self.action) != algebra.dim:
            raise RepresentationError("need one matrix per algebra basis element")
        for A in self.action:
            if A.shape != (self.space_dim, self.space_dim):
                raise RepresentationError(f"action matrix of shape {A.shape}, expected square {self.space_dim}")
        if validate:
            problems = check_representation(self)
            if problems:
                raise RepresentationError(f"commutator identity fails for {problems[:3]}")

    @property
    def dim(self) -> int:
        return self.space_dim

    def rho(self, x) -> SparseMatrix:
        """Action matrix of an element given as a coefficient dict (or basis index)."""
        if isinstance(x, int):
            return self.action[x]
        out = SparseMatrix.zeros(self.space_dim, self.space_dim)
        for i, a in x.items():
            out = out + self.action[i].scale(a)
        return out

    def act(self, x, v) -> dict:
        """``rho(x) v`` for a basis index or element ``x`` and vector ``v``."""
        if isinstance(x, int):
            return self.action[x].apply(v)
        out = {}
        for i, a in x.items():
            for k, c in self.action[i].apply(v).items():
                s = out.get(k, 0) + a * c
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.to_json(),
            "dim": self.space_dim,
            "action": [A.triplets() for A in self.action],
        }

    @classmethod
    def from_json(cls, data: dict, validate: bool = True):
        L = LieAlgebra.from_json(data["algebra"], validate)
        n = data["dim"]
        action = [SparseMatrix.from_triplets(n, n, t) for t in data["action"]]
        return cls(L, n, action, validate)

    def __repr__(self):
        return f"Representation(dim={self.space_dim} of {self.algebra!r})"


def check_representation(R: Representation) -> list:
    """Pairs ``(i, j)`` where ``rho([e_i, e_j]) != [rho(e_i), rho(e_j)]``."""
    bad = []
    L = R.algebra
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            A, B = R.action[i], R.action[j]
            lhs = R.rho(L.bracket_basis(i, j))
            if lhs != (A @ B) - (B @ A):
                bad.append((i, j))
    return bad


@dataclass(frozen=True)
class GradedRepresentation:
    """A representation with integer weights under a distinguished element ``h``.

    ``window`` is ``None`` for a complete finite module.  For a truncated
    infinite module it is the closed weight range kept in ``base``; weights
    below ``weight_floor`` do not occur in the full module at all.
    """

    base: Representation
    grading_element: int
    algebra_weights: tuple
    module_weights: tuple
    window: tuple | None = None
    weight_floor: int | None = None
    info: dict = field(default_factory=dict, compare=False)

    def is_complete(self, w: int) -> bool:
        if self.window is None:
            return True
        if self.weight_floor is not None and w < self.weight_floor:
            return True
        return self.window[0] <= w <= self.window[1]

    def sector(self, w: int) -> list:
        return [i for i, x in enumerate(self.module_weights) if x == w]


def _integer_diagonal(A: SparseMatrix, what: str) -> tuple:
    if not A.is_diagonal():
        raise RepresentationError(f"{what} is not diagonal in the given basis")
    vals = []
    for i in range(A.rows):
        v = A[(i, i)]
        if v.denominator != 1:
            raise RepresentationError(f"{what} has non-integer eigenvalue {v}")
        vals.append(int(v))
    return tuple(vals)


def weight_decompose(R: Representation, h: int, window=None, weight_floor=None,
                     check_grading: bool = True) -> GradedRepresentation:
    """Weights of the algebra and module bases under ``ad(h)`` and ``rho(h)``."""
    L = R.algebra
    alg_w = _integer_diagonal(L.ad(h), "ad(h)")
    mod_w = _integer_diagonal(R.action[h], "rho(h)")
    G = GradedRepresentation(R, h, alg_w, mod_w, tuple(window) if window else None, weight_floor)
    if check_grading:
        for i, A in enumerate(R.action):
            for (r, c), _ in A.items():
                if mod_w[r] != mod_w[c] + alg_w[i]:
                    raise RepresentationError(
                        f"rho(e_{i}) sends weight {mod_w[c]} to weight {mod_w[r]}, expected {mod_w[c] + alg_w[i]}")
    return G


def trivial_rep(L: LieAlgebra, n: int = 1) -> Representation:
    return Representation(L, n, [SparseMatrix.zeros(n, n) for _ in range(L.dim)])


def adjoint_rep(L: LieAlgebra) -> Representation:
    return Representation(L, L.dim, [L.ad(i) for i in range(L.dim)])


def hom_module(R1: Representation, R2: Representation) -> Representation:
    """``Hom(V1, V2)`` with ``x.T = rho2(x) T - T rho1(x)``.

    The map with matrix units ``E_ab`` (row ``a`` in V2, column ``b`` in
    V1) sits at index ``a * dim V1 + b``.
    """
    if R1.algebra is not R2.algebra and R1.algebra.to_json() != R2.algebra.to_json():
        raise RepresentationError("representations of different algebras")
    n1, n2 = R1.space_dim, R2.space_dim
    mats = []
    for x in range(R1.algebra.dim):
        r1, r2 = R1.action[x], R2.action[x]
        ent = {}

        def add(key, v):
            s = ent.get(key, 0) + v
            if s:
                ent[key] = s
            else:
                ent.pop(key, None)

        for (c, a), v in r2.items():  # rho2 E_ab = sum_c rho2[c,a] E_cb
            for b in range(n1):
                add((c * n1 + b, a * n1 + b), v)
        for (b, d), v in r1.items():  # E_ab rho1 = sum_d rho1[b,d] E_ad
            for a in range(n2):
                add((a * n1 + d, a * n1 + b), -v)
        mats.append(SparseMatrix(n1 * n2, n1 * n2, ent))
    return Representation(R1.algebra, n1 * n2, mats, validate=False)


def hom_vector_to_matrix(v, n1: int, n2: int) -> SparseMatrix:
    return SparseMatrix(n2, n1, {(k // n1, k % n1): x for k, x in v.items()})


def matrix_to_hom_vector(T: SparseMatrix) -> dict:
    return {r * T.cols + c: v for (r, c), v in T.items()}


def invariants(R: Representation):
    """``H^0``: joint kernel of all action matrices."""
    A = SparseMatrix.vstack(list(R.action)) if R.action else SparseMatrix.zeros(0, R.space_dim)
    return kernel_basis(A)


def subrepresentation(R: Representation, basis: Sequence, validate: bool = True) -> Representation:
    """Restriction of ``R`` to the invariant subspace spanned by ``basis``.

    The basis must be in the form returned by :func:`kernel_basis` style
    elimination (or any basis); coordinates are found by exact solves.
    """
    from .exact_linalg import solve

    B = SparseMatrix.from_columns(list(basis), R.space_dim)
    k = len(basis)
    mats = []
    for A in R.action:
        cols = []
        for b in basis:
            y = solve(B, A.apply(b))
            if y is None:
                raise RepresentationError("subspace is not invariant")
            cols.append(y)
        mats.append(SparseMatrix.from_columns(cols, k))
    return Representation(R.algebra, k, mats, validate=validate)


def direct_sum_rep(R1: Representation, R2: Representation) -> Representation:
    if R1.algebra.dim != R2.algebra.dim:
        raise RepresentationError("representations of different algebras")
    mats = [SparseMatrix.block_diag([a, b]) for a, b in zip(R1.action, R2.action)]
    return Representation(R1.algebra, R1.space_dim + R2.space_dim, mats, validate=False)


# standard examples -------------------------------------------------------

def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(n, {}, [f"a{i}" for i in range(n)])


def sl2() -> LieAlgebra:
    """sl_2 with basis (e, f, h): [h,e]=2e, [h,f]=-2f, [e,f]=h."""
    e, f, h = 0, 1, 2
    return LieAlgebra.from_antisymmetric(3, {
        (e, f): {h: 1},
        (e, h): {e: -2},
        (f, h): {f: 2},
    }, ["e", "f", "h"])


def sl2_standard(L: LieAlgebra | None = None) -> Representation:
    """The defining 2-dimensional representation of :func:`sl2`."""
    L = L or sl2()
    e = SparseMatrix(2, 2, {(0, 1): 1})
    f = SparseMatrix(2, 2, {(1, 0): 1})
    h = SparseMatrix(2, 2, {(0, 0): 1, (1, 1): -1})
    return Representation(L, 2, [e, f, h])
