"""Chevalley-Eilenberg cochains and cohomology.

A p-cochain with values in a representation V is stored on the basis of
``Lambda^p L* (x) V``: keys are ``(I, v)`` with ``I`` a strictly increasing
tuple of algebra indices and ``v`` a module index.

The coboundary is the usual one::

    (dc)(x_0..x_p) = sum_i (-1)^i rho(x_i) c(..^x_i..)
                   + sum_{i<j} (-1)^(i+j) c([x_i, x_j], ..^x_i..^x_j..)

For graded modules the complex splits by weight; only the weight-0 part
carries cohomology, so infinite modules are handled through a truncated
weight window (see :func:`weight_subcomplex`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from .exact_linalg import (
    SparseMatrix,
    Subspace,
    complete_basis,
    format_rational,
    image_basis,
    kernel_basis,
    parse_rational,
    rank,
    solve,
)
from .lie_core import GradedRepresentation, Representation

__all__ = [
    "CohomologyError",
    "Cochain",
    "CochainComplex",
    "CohomologyResult",
    "coboundary",
    "full_complex",
    "weight_subcomplex",
    "weight_zero_subcomplex",
    "cohomology",
    "is_coboundary",
    "class_coordinates",
    "induced_map",
]


class CohomologyError(ValueError):
    pass


def _sign(k: int) -> int:
    return -1 if k & 1 else 1


class Cochain:
    """An alternating p-linear map on the algebra with values in ``rep``."""

    __slots__ = ("degree", "rep", "coords")

    def __init__(self, degree: int, rep: Representation, coords=None):
        self.degree = int(degree)
        self.rep = rep
        clean = {}
        for (I, v), x in (coords or {}).items():
            I = tuple(I)
            if len(I) != self.degree:
                raise CohomologyError(f"index tuple {I} has wrong arity for degree {degree}")
            if any(a >= b for a, b in zip(I, I[1:])):
                raise CohomologyError(f"index tuple {I} is not strictly increasing")
            x = Fraction(x)
            if x:
                clean[(I, int(v))] = x
        self.coords = clean

    @classmethod
    def zero(cls, degree: int, rep: Representation):
        return cls(degree, rep, {})

    @classmethod
    def from_values(cls, degree: int, rep: Representation, values: dict):
        """From ``{I: vector}`` with ``I`` increasing tuples."""
        coords = {}
        for I, vec in values.items():
            for v, x in vec.items():
                if x:
                    coords[(tuple(I), v)] = x
        return cls(degree, rep, coords)

    @classmethod
    def from_function(cls, degree: int, rep: Representation, fn: Callable):
        """Tabulate ``fn(I) -> vector`` on every increasing index tuple."""
        n = rep.algebra.dim
        return cls.from_values(degree, rep, {I: fn(I) for I in combinations(range(n), degree)})

    def value(self, indices: Sequence[int]) -> dict:
        """``c(e_{i_1}, .., e_{i_p})`` for arbitrary (not necessarily sorted) indices."""
        idx = list(indices)
        if len(set(idx)) != len(idx):
            return {}
        # sign of the sorting permutation
        sgn = 1
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                if idx[a] > idx[b]:
                    sgn = -sgn
        I = tuple(sorted(idx))
        return {v: sgn * x for (J, v), x in self.coords.items() if J == I}

    def values(self) -> dict:
        out = {}
        for (I, v), x in self.coords.items():
            out.setdefault(I, {})[v] = x
        return out

    def evaluate(self, args: Sequence[dict]) -> dict:
        """Multilinear evaluation on algebra elements given as coefficient dicts."""
        if len(args) != self.degree:
            raise CohomologyError("wrong number of arguments")
        out = {}
        vals = self.values()

        def rec(pos, chosen, coef):
            if pos == len(args):
                if len(set(chosen)) < len(chosen):
                    return
                sgn = 1
                for a in range(len(chosen)):
                    for b in range(a + 1, len(chosen)):
                        if chosen[a] > chosen[b]:
                            sgn = -sgn
                vec = vals.get(tuple(sorted(chosen)))
                if vec:
                    for v, x in vec.items():
                        s = out.get(v, 0) + sgn * coef * x
                        if s:
                            out[v] = s
                        else:
                            out.pop(v, None)
                return
            for i, a in args[pos].items():
                rec(pos + 1, chosen + [i], coef * a)

        rec(0, [], Fraction(1))
        return out

    def map_values(self, F: SparseMatrix, rep: Representation) -> "Cochain":
        """Compose with a linear map ``F: V -> W`` (W carried by ``rep``)."""
        out = {}
        for I, vec in self.values().items():
            for w, x in F.apply(vec).items():
                out[(I, w)] = x
        return Cochain(self.degree, rep, out)

    def _combine(self, other, a):
        if other.degree != self.degree:
            raise CohomologyError("degree mismatch")
        out = dict(self.coords)
        for k, x in other.coords.items():
            s = out.get(k, 0) + a * x
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Cochain(self.degree, self.rep, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, a):
        a = Fraction(a)
        return Cochain(self.degree, self.rep, {k: a * x for k, x in self.coords.items()})

    def __mul__(self, a):
        return self.scale(a)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coords

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.degree == other.degree and self.coords == other.coords

    def __hash__(self):
        return hash((self.degree, frozenset(self.coords.items())))

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "coords": [[list(I), v, format_rational(x)] for (I, v), x in sorted(self.coords.items())],
        }

    @classmethod
    def from_json(cls, data: dict, rep: Representation):
        return cls(data["degree"], rep, {(tuple(I), v): parse_rational(x) for I, v, x in data["coords"]})

    def __repr__(self):
        return f"Cochain(degree={self.degree}, nnz={len(self.coords)})"


def _bracket_table(L) -> dict:
    """k -> [(a, b, c^k_ab)] for a < b."""
    table = {}
    for (a, b), vec in L.structure.items():
        if a < b:
            for k, c in vec.items():
                table.setdefault(k, []).append((a, b, c))
    return table


def _d_basis(rep: Representation, I: tuple, v: int, table: dict) -> dict:
    """Coboundary of the elementary cochain ``e_I^* (x) e_v``."""
    n = rep.algebra.dim
    out = {}

    def add(key, x):
        s = out.get(key, 0) + x
        if s:
            out[key] = s
        else:
            out.pop(key, None)

    Iset = set(I)
    for j in range(n):
        if j in Iset:
            continue
        col = rep.action[j].column(v)
        if not col:
            continue
        J = tuple(sorted(I + (j,)))
        sgn = _sign(J.index(j))
        for w, x in col.items():
            add((J, w), sgn * x)
    for q, k in enumerate(I):
        rest = I[:q] + I[q + 1:]
        rset = set(rest)
        s0 = _sign(q)
        for a, b, c in table.get(k, ()):
            if a in rset or b in rset:
                continue
            J = tuple(sorted(rest + (a, b)))
            sgn = _sign(J.index(a) + J.index(b))
            add((J, v), s0 * sgn * c)
    return out


def coboundary(c: Cochain) -> Cochain:
    """The Chevalley-Eilenberg coboundary of ``c``."""
    table = _bracket_table(c.rep.algebra)
    out = {}
    for (I, v), x in c.coords.items():
        for key, y in _d_basis(c.rep, I, v, table).items():
            s = out.get(key, 0) + x * y
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return Cochain(c.degree + 1, c.rep, out)


class CochainComplex:
    """A finite piece ``C^0 -> ... -> C^{p_max+1}`` of a (sub)complex.

    ``bases[p]`` lists the keys ``(I, v)`` spanning the p-th space and
    ``differentials[p]`` is the matrix of ``C^p -> C^{p+1}``.
    """

    def __init__(self, rep: Representation, bases: list, weight=None, graded=None):
        self.rep = rep
        self.bases = bases
        self.index = [{key: i for i, key in enumerate(b)} for b in bases]
        self.weight = weight
        self.graded = graded
        self._diffs = {}

    @property
    def top(self) -> int:
        return len(self.bases) - 1

    def dim(self, p: int) -> int:
        if p < 0 or p > self.top:
            return 0
        return len(self.bases[p])

    def differential(self, p: int) -> SparseMatrix:
        if p in self._diffs:
            return self._diffs[p]
        if p < 0:
            M = SparseMatrix.zeros(self.dim(0), 0)
        elif p >= self.top:
            raise CohomologyError(f"complex truncated at degree {self.top}; no differential out of degree {p}")
        else:
            table = _bracket_table(self.rep.algebra)
            ent = {}
            tgt = self.index[p + 1]
            for col, (I, v) in enumerate(self.bases[p]):
                for key, x in _d_basis(self.rep, I, v, table).items():
                    row = tgt.get(key)
                    if row is None:
                        if self.weight is None:
                            raise CohomologyError(f"coboundary leaves the complex at {key}")
                        # truncated coordinates outside the sector are never weight-w
                        continue
                    ent[(row, col)] = x
            M = SparseMatrix(self.dim(p + 1), self.dim(p), ent)
        self._diffs[p] = M
        return M

    @property
    def differentials(self) -> list:
        return [self.differential(p) for p in range(self.top)]

    def vector(self, c: Cochain) -> dict:
        idx = self.index[c.degree]
        out = {}
        for key, x in c.coords.items():
            i = idx.get(key)
            if i is None:
                raise CohomologyError(f"cochain coordinate {key} lies outside this complex")
            out[i] = x
        return out

    def cochain(self, p: int, vec) -> Cochain:
        basis = self.bases[p]
        if isinstance(vec, dict):
            items = vec.items()
        else:
            items = enumerate(vec)
        return Cochain(p, self.rep, {basis[i]: x for i, x in items if x})


def full_complex(rep: Representation, p_max: int) -> CochainComplex:
    n = rep.algebra.dim
    bases = []
    for p in range(p_max + 2):
        if p > n:
            bases.append([])
            continue
        bases.append([(I, v) for I in combinations(range(n), p) for v in range(rep.space_dim)])
    return CochainComplex(rep, bases)


def weight_subcomplex(G: GradedRepresentation, p_max: int, weight: int = 0) -> CochainComplex:
    """The weight-``weight`` part of the complex up to degree ``p_max + 1``.

    A cochain ``e_I^* (x) e_v`` has weight ``wt(v) - sum wt(e_i)``.  When
    ``G`` is a truncated window the weights reachable by the degree
    ``p_max + 1`` cochains must all be complete, otherwise the sector is
    not computed faithfully and the call is rejected.
    """
    R = G.base
    n = R.algebra.dim
    aw = G.algebra_weights
    lo = hi = weight
    for q in range(1, min(p_max + 1, n) + 1):
        sums = [sum(aw[i] for i in I) for I in combinations(range(n), q)]
        lo = min(lo, weight + min(sums))
        hi = max(hi, weight + max(sums))
    missing = [w for w in range(lo, hi + 1) if not G.is_complete(w)]
    if missing:
        raise CohomologyError(
            f"weight window {G.window} too narrow: degree {p_max + 1} cochains of weight {weight} "
            f"need module weights in [{lo}, {hi}] (missing {missing})")
    by_weight = {}
    for v, w in enumerate(G.module_weights):
        by_weight.setdefault(w, []).append(v)
    bases = []
    for p in range(p_max + 2):
        basis = []
        if p <= n:
            for I in combinations(range(n), p):
                target = weight + sum(aw[i] for i in I)
                for v in by_weight.get(target, ()):
                    basis.append((I, v))
        bases.append(basis)
    return CochainComplex(R, bases, weight=weight, graded=G)


def weight_zero_subcomplex(G: GradedRepresentation, p_max: int) -> CochainComplex:
    return weight_subcomplex(G, p_max, 0)


@dataclass
class CohomologyResult:
    degree: int
    dimension: int
    representatives: list
    cocycle_rank: int
    boundary_rank: int
    cocycles: Subspace
    boundaries: Subspace
    complex: CochainComplex

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "dimension": self.dimension,
            "cocycle_rank": self.cocycle_rank,
            "boundary_rank": self.boundary_rank,
            "representatives": [c.to_json() for c in self.representatives],
        }


def cohomology(R, p: int, complex: CochainComplex | None = None) -> CohomologyResult:
    """``H^p`` of a finite representation (or of a supplied complex).

    Representatives complete the coboundary image inside the cocycle
    space, in the deterministic order of the echelon pivots.
    """
    if complex is None:
        if isinstance(R, GradedRepresentation):
            complex = weight_zero_subcomplex(R, p)
        else:
            complex = full_complex(R, p)
    if p > complex.top - 1:
        raise CohomologyError(f"complex only reaches degree {complex.top}")
    dp = complex.differential(p)
    Z = kernel_basis(dp)
    if p == 0:
        B = Subspace(complex.dim(0), [], check=False)
    else:
        B = image_basis(complex.differential(p - 1))
    reps = complete_basis(B.basis, Z.basis, complex.dim(p))
    dim = Z.dim - B.dim
    if len(reps) != dim:
        raise CohomologyError("coboundaries are not contained in cocycles; is this a complex?")
    return CohomologyResult(
        degree=p,
        dimension=dim,
        representatives=[complex.cochain(p, r) for r in reps],
        cocycle_rank=Z.dim,
        boundary_rank=B.dim,
        cocycles=Z,
        boundaries=B,
        complex=complex,
    )


def is_coboundary(c: Cochain, complex: CochainComplex | None = None) -> Cochain | None:
    """A primitive ``b`` with ``db = c``, or None if ``c`` is not exact.

    Raises if ``c`` is not a cocycle.
    """
    if complex is None:
        complex = full_complex(c.rep, c.degree)
    dc = coboundary(c)
    if complex.weight is not None:
        # coordinates outside the window may be truncation artefacts
        idx = complex.index[c.degree + 1] if c.degree + 1 <= complex.top else {}
        dc = Cochain(dc.degree, dc.rep, {k: x for k, x in dc.coords.items() if k in idx})
    if not dc.is_zero():
        raise CohomologyError("not a cocycle")
    if c.degree == 0:
        return Cochain.zero(0, c.rep) if c.is_zero() else None
    x = solve(complex.differential(c.degree - 1), complex.vector(c))
    if x is None:
        return None
    return complex.cochain(c.degree - 1, x)


def class_coordinates(result: CohomologyResult, c: Cochain) -> list:
    """Coordinates of the class of the cocycle ``c`` in the representative basis."""
    cx = result.complex
    cols = [cx.vector(r) for r in result.representatives] + list(result.boundaries.basis)
    M = SparseMatrix.from_columns(cols, cx.dim(result.degree))
    y = solve(M, cx.vector(c))
    if y is None:
        raise CohomologyError("cochain is not a cocycle of this complex")
    return y[: result.dimension]


def induced_map(F: SparseMatrix, src: CohomologyResult, tgt: CohomologyResult) -> SparseMatrix:
    """Matrix of ``H^p(V) -> H^p(W)`` induced by the module map ``F: V -> W``."""
    cols = []
    for r in src.representatives:
        img = r.map_values(F, tgt.complex.rep)
        cols.append(class_coordinates(tgt, img))
    return SparseMatrix.from_columns(cols, tgt.dimension)


def cohomology_dims(R: Representation, p_max: int) -> list:
    cx = full_complex(R, p_max)
    out = []
    for p in range(p_max + 1):
        z = cx.dim(p) - rank(cx.differential(p))
        b = rank(cx.differential(p - 1)) if p > 0 else 0
        out.append(z - b)
    return out
