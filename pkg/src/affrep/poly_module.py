"""Polynomials on an affine representation and the modules they form.

A polynomial ``p`` of degree at most k on an affine space charted at
``a0`` is stored by its components ``p_0..p_k`` relative to ``a0``:
symmetric i-linear maps with

    p(a0 + u) = sum_i  p_i(u, .., u) / i!

Components are indexed by multisets of source indices, so symmetry is
structural.  The Lie algebra acts on polynomials by

    (x.p)_i(u_1..u_i) = (x.p_i)(u_1..u_i) - p_{i+1}(x.a0, u_1..u_i)

where ``x.p_i`` is the tensor-product action on ``S^i(A, W)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import factorial
from typing import Sequence

from .affine_rep import AffineMap, AffineRepresentation, is_intertwining
from .ce_cohomology import Cochain, CohomologyError, coboundary
from .exact_linalg import SparseMatrix, as_vector, format_rational, parse_rational, rank
from .lie_core import Representation, hom_module

__all__ = [
    "SymMultiMap",
    "PolyMap",
    "PolyModule",
    "sym_module",
    "poly_module",
    "tensor_act",
    "act",
    "rebase",
    "tau_section",
    "symbol",
    "filtration_ses",
    "alpha_cocycle",
    "connecting",
    "connecting_abstract",
    "pullback",
]


def _merge(J: tuple, K: tuple) -> tuple:
    return tuple(sorted(J + K))


def _add(out: dict, key, x) -> None:
    s = out.get(key, 0) + x
    if s:
        out[key] = s
    else:
        out.pop(key, None)


class SymMultiMap:
    """A symmetric ``arity``-linear map ``Q^source_dim x .. -> Q^target_dim``.

    ``coords[(J, w)]`` is the w-th coordinate of ``t(e_J1, .., e_Ji)`` for
    the sorted multiset ``J``.
    """

    __slots__ = ("arity", "source_dim", "target_dim", "coords")

    def __init__(self, arity: int, source_dim: int, target_dim: int, coords=None):
        self.arity = int(arity)
        self.source_dim = int(source_dim)
        self.target_dim = int(target_dim)
        clean = {}
        for (J, w), x in (coords or {}).items():
            J = tuple(sorted(J))
            if len(J) != self.arity:
                raise ValueError(f"multiset {J} has wrong size for arity {arity}")
            x = Fraction(x)
            if x:
                clean[(J, int(w))] = clean.get((J, int(w)), 0) + x
        self.coords = {k: v for k, v in clean.items() if v}

    @classmethod
    def zero(cls, arity, source_dim, target_dim):
        return cls(arity, source_dim, target_dim)

    def __call__(self, *vectors) -> dict:
        if len(vectors) != self.arity:
            raise ValueError("wrong number of arguments")
        vecs = [as_vector(v) for v in vectors]
        by_J = {}
        for (J, w), x in self.coords.items():
            by_J.setdefault(J, {})[w] = x
        out = {}
        for idx in product(*(list(v.items()) for v in vecs)):
            coef = Fraction(1)
            for _, a in idx:
                coef *= a
            vals = by_J.get(tuple(sorted(i for i, _ in idx)))
            if vals:
                for w, x in vals.items():
                    _add(out, w, coef * x)
        return out

    def diag(self, u) -> dict:
        """``t(u, .., u)``."""
        return self(*([u] * self.arity))

    def partial(self, first: Sequence) -> "SymMultiMap":
        """``t(v_1, .., v_r, -, .., -)`` as a symmetric map of lower arity."""
        r = len(first)
        vecs = [as_vector(v) for v in first]
        out = {}
        for (J, w), x in self.coords.items():
            # choose which entries of J are consumed by the fixed vectors (ordered)
            for picks in _ordered_submultisets(J, vecs):
                rest, coef = picks
                _add(out, (rest, w), coef * x)
        return SymMultiMap(self.arity - r, self.source_dim, self.target_dim, out)

    def _combine(self, other, a):
        out = dict(self.coords)
        for k, x in other.coords.items():
            _add(out, k, a * x)
        return SymMultiMap(self.arity, self.source_dim, self.target_dim, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, a):
        a = Fraction(a)
        return SymMultiMap(self.arity, self.source_dim, self.target_dim,
                           {k: a * x for k, x in self.coords.items()})

    def __eq__(self, other):
        if not isinstance(other, SymMultiMap):
            return NotImplemented
        return (self.arity, self.source_dim, self.target_dim, self.coords) == \
            (other.arity, other.source_dim, other.target_dim, other.coords)

    def __hash__(self):
        return hash((self.arity, frozenset(self.coords.items())))

    def is_zero(self) -> bool:
        return not self.coords

    def to_json(self) -> dict:
        return {"arity": self.arity,
                "entries": [[list(J), w, format_rational(x)] for (J, w), x in sorted(self.coords.items())]}

    def __repr__(self):
        return f"SymMultiMap(arity={self.arity}, nnz={len(self.coords)})"


def _ordered_submultisets(J: tuple, vecs: list):
    """Ways to feed the ordered vectors ``vecs`` into slots of ``J``.

    Yields ``(remaining multiset, product of the used coordinates)`` with
    multiplicity, i.e. summed over the assignments of vectors to slots.
    """
    if not vecs:
        yield J, Fraction(1)
        return
    v, rest = vecs[0], vecs[1:]
    seen = set()
    for pos, j in enumerate(J):
        if j in seen:
            continue
        seen.add(j)
        a = v.get(j)
        if not a:
            continue
        # t(v, ...) = sum_j v_j t(e_j, ...); removing one copy of j
        remaining = J[:pos] + J[pos + 1:]
        for R, c in _ordered_submultisets(remaining, rest):
            yield R, a * c


class PolyMap:
    """Polynomial of degree at most ``k``: components ``p_0..p_k``."""

    __slots__ = ("k", "source_dim", "target_dim", "components")

    def __init__(self, components: Sequence[SymMultiMap]):
        if not components:
            raise ValueError("need at least the constant component")
        self.k = len(components) - 1
        self.source_dim = components[0].source_dim
        self.target_dim = components[0].target_dim
        for i, c in enumerate(components):
            if c.arity != i:
                raise ValueError(f"component {i} has arity {c.arity}")
            if (c.source_dim, c.target_dim) != (self.source_dim, self.target_dim):
                raise ValueError("inconsistent component shapes")
        self.components = tuple(components)

    @classmethod
    def zero(cls, k, source_dim, target_dim):
        return cls([SymMultiMap.zero(i, source_dim, target_dim) for i in range(k + 1)])

    def eval(self, u) -> dict:
        out = {}
        for i, c in enumerate(self.components):
            f = Fraction(1, factorial(i))
            for w, x in c.diag(u).items():
                _add(out, w, f * x)
        return out

    __call__ = eval

    def _combine(self, other, a):
        k = max(self.k, other.k)
        a_ = self.raise_degree(k)
        b_ = other.raise_degree(k)
        return PolyMap([p._combine(q, a) for p, q in zip(a_.components, b_.components)])

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, a):
        return PolyMap([c.scale(a) for c in self.components])

    def raise_degree(self, k: int) -> "PolyMap":
        if k <= self.k:
            return self
        extra = [SymMultiMap.zero(i, self.source_dim, self.target_dim) for i in range(self.k + 1, k + 1)]
        return PolyMap(list(self.components) + extra)

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        k = max(self.k, other.k)
        return self.raise_degree(k).components == other.raise_degree(k).components

    def __hash__(self):
        return hash(tuple(self.components))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def to_json(self) -> dict:
        return {"k": self.k, "source_dim": self.source_dim, "target_dim": self.target_dim,
                "components": [c.to_json() for c in self.components]}

    @classmethod
    def from_json(cls, data: dict):
        n, w = data["source_dim"], data["target_dim"]
        comps = []
        for c in data["components"]:
            comps.append(SymMultiMap(c["arity"], n, w,
                                     {(tuple(J), t): parse_rational(x) for J, t, x in c["entries"]}))
        return cls(comps)

    def __repr__(self):
        return f"PolyMap(k={self.k}, {self.source_dim}->{self.target_dim})"


def symbol(p: PolyMap, k: int | None = None) -> SymMultiMap:
    """Top component ``p_k``."""
    k = p.k if k is None else k
    return p.raise_degree(k).components[k]


def tensor_act(x: int, t: SymMultiMap, rho_A: Representation, W: Representation) -> SymMultiMap:
    """``(x.t)(u..) = x.(t(u..)) - sum_l t(.., rho_A(x) u_l, ..)``."""
    RW = W.action[x]
    RA = rho_A.action[x]
    out = {}
    by_J = {}
    for (J, w), c in t.coords.items():
        by_J.setdefault(J, {})[w] = c
    for J, vals in by_J.items():
        for w2, c in RW.apply(vals).items():
            _add(out, (J, w2), c)
    # -t(.., RA e_j, ..): coefficient at multiset K gets, for each slot l of K,
    # sum_a RA[a, K_l] t(K with K_l -> a)
    colsA = {j: RA.column(j) for j in range(rho_A.space_dim)}
    for J, vals in by_J.items():
        # t(e_J) contributes to (x.t)(e_K) when K = J - {a} + {j} and RA[a, j] != 0
        seen = set()
        for pos, a in enumerate(J):
            if a in seen:
                continue
            seen.add(a)
            mult = J.count(a)
            rest = J[:pos] + J[pos + 1:]
            for j in range(rho_A.space_dim):
                r = colsA[j].get(a)
                if not r:
                    continue
                K = _merge(rest, (j,))
                # number of slots of K holding j that map onto this J
                for w, c in vals.items():
                    _add(out, (K, w), -r * c * _slot_factor(K, j, mult))
    return SymMultiMap(t.arity, t.source_dim, t.target_dim, out)


def _slot_factor(K: tuple, j: int, mult_a: int) -> int:
    # (x.t)(e_K) = -sum_l t(e_K with slot l replaced by RA e_{K_l}); the slots
    # holding j in K number K.count(j), each giving the same J.  The inner
    # loop above visits each distinct a once, so no extra multiplicity for a.
    return K.count(j)


@dataclass
class PolyModule:
    """Flattened coordinates for ``P^k(A, W)`` or ``S^k(A, W)`` as a representation."""

    rep: Representation
    keys: list  # (i, J, w) for P^k ; (J, w) for S^k
    index: dict
    k: int
    source_dim: int
    target_dim: int
    kind: str

    def to_vector(self, obj) -> dict:
        out = {}
        if self.kind == "P":
            for i, c in enumerate(obj.raise_degree(self.k).components):
                for (J, w), x in c.coords.items():
                    out[self.index[(i, J, w)]] = x
        else:
            for (J, w), x in obj.coords.items():
                out[self.index[(J, w)]] = x
        return out

    def from_vector(self, vec):
        vec = as_vector(vec)
        if self.kind == "P":
            comps = [dict() for _ in range(self.k + 1)]
            for idx, x in vec.items():
                i, J, w = self.keys[idx]
                comps[i][(J, w)] = x
            return PolyMap([SymMultiMap(i, self.source_dim, self.target_dim, comps[i])
                            for i in range(self.k + 1)])
        return SymMultiMap(self.k, self.source_dim, self.target_dim,
                           {self.keys[i]: x for i, x in vec.items()})


def _multisets(n: int, i: int) -> list:
    return list(combinations_with_replacement(range(n), i))


def sym_module(rho_A: Representation, W: Representation, k: int) -> PolyModule:
    """``S^k(A, W)`` with the tensor-product action."""
    n, m = rho_A.space_dim, W.space_dim
    keys = [(J, w) for J in _multisets(n, k) for w in range(m)]
    index = {key: i for i, key in enumerate(keys)}
    mats = []
    for x in range(rho_A.algebra.dim):
        cols = []
        for J, w in keys:
            t = SymMultiMap(k, n, m, {(J, w): 1})
            img = tensor_act(x, t, rho_A, W)
            cols.append({index[key]: c for key, c in img.coords.items()})
        mats.append(SparseMatrix.from_columns(cols, len(keys)))
    rep = Representation(rho_A.algebra, len(keys), mats, validate=False)
    return PolyModule(rep, keys, index, k, n, m, "S")


def act(x: int, p: PolyMap, A: AffineRepresentation, W: Representation) -> PolyMap:
    """The polynomial ``x.p`` (components relative to the chart origin)."""
    g = A.gamma(x)
    comps = []
    for i, c in enumerate(p.components):
        xi = tensor_act(x, c, A.model, W)
        if i + 1 <= p.k and g:
            xi = xi - p.components[i + 1].partial([g])
        comps.append(xi)
    return PolyMap(comps)


def poly_module(A: AffineRepresentation, W: Representation, k: int) -> PolyModule:
    """``P^k(A, W)`` as a representation; coordinates ``(i, J, w)``."""
    n, m = A.dim, W.space_dim
    keys = [(i, J, w) for i in range(k + 1) for J in _multisets(n, i) for w in range(m)]
    index = {key: j for j, key in enumerate(keys)}
    mod = PolyModule(None, keys, index, k, n, m, "P")
    mats = []
    for x in range(A.algebra.dim):
        cols = []
        for key in keys:
            p = mod.from_vector({index[key]: 1})
            cols.append(mod.to_vector(act(x, p, A, W)))
        mats.append(SparseMatrix.from_columns(cols, len(keys)))
    mod.rep = Representation(A.algebra, len(keys), mats, validate=False)
    return mod


def rebase(p: PolyMap, w) -> PolyMap:
    """Components of the same polynomial relative to ``a0 + w``.

    ``q_j(u..) = sum_{i >= j} p_i(w, .., w, u..) / (i - j)!``
    """
    w = as_vector(w)
    comps = []
    for j in range(p.k + 1):
        q = SymMultiMap.zero(j, p.source_dim, p.target_dim)
        for i in range(j, p.k + 1):
            if i > j and not w:
                continue
            part = p.components[i].partial([w] * (i - j))
            q = q + part.scale(Fraction(1, factorial(i - j)))
        comps.append(q)
    return PolyMap(comps)


def tau_section(t: SymMultiMap) -> PolyMap:
    """``tau(t)(a0 + u) = t(u, .., u) / k!``: only the top component is nonzero."""
    comps = [SymMultiMap.zero(i, t.source_dim, t.target_dim) for i in range(t.arity)]
    return PolyMap(comps + [t])


def filtration_ses(A: AffineRepresentation, W: Representation, k: int):
    """``0 -> P^{k-1} -> P^k -> S^k -> 0`` as matrices between flattened modules.

    Returns ``(P_{k-1}, P_k, S_k, inclusion, projection)`` after checking
    that both maps intertwine the actions and that the sequence is exact.
    """
    if k < 1:
        raise ValueError("k >= 1 required")
    Pk1 = poly_module(A, W, k - 1)
    Pk = poly_module(A, W, k)
    Sk = sym_module(A.model, W, k)
    inc = SparseMatrix(Pk.rep.dim, Pk1.rep.dim,
                       {(Pk.index[key], j): 1 for j, key in enumerate(Pk1.keys)})
    proj = SparseMatrix(Sk.rep.dim, Pk.rep.dim,
                        {(Sk.index[(J, w)], Pk.index[(i, J, w)]): 1
                         for (i, J, w) in Pk.keys if i == k})
    for x in range(A.algebra.dim):
        if inc @ Pk1.rep.action[x] != Pk.rep.action[x] @ inc:
            raise CohomologyError("inclusion is not equivariant")
        if proj @ Pk.rep.action[x] != Sk.rep.action[x] @ proj:
            raise CohomologyError("symbol projection is not equivariant")
    if not (proj @ inc).is_zero() or rank(inc) != Pk1.rep.dim or rank(proj) != Sk.rep.dim:
        raise CohomologyError("filtration sequence is not exact")
    if Pk.rep.dim != Pk1.rep.dim + Sk.rep.dim:
        raise CohomologyError("dimension count fails")
    return Pk1, Pk, Sk, inc, proj


def alpha_cocycle(A: AffineRepresentation, W: Representation, k: int):
    """The 1-cocycle ``x -> (t -> -t(x.a0, u, .., u) / (k-1)!)`` classifying the k-th sequence.

    Values lie in ``Hom(S^k(A, W), P^{k-1}(A, W))``; the function returns
    ``(cochain, hom_rep, S_k, P_{k-1})``.
    """
    Sk = sym_module(A.model, W, k)
    Pk1 = poly_module(A, W, k - 1)
    H = hom_module(Sk.rep, Pk1.rep)
    nS = Sk.rep.dim
    coords = {}
    for x in range(A.algebra.dim):
        g = A.gamma(x)
        if not g:
            continue
        for col, key in enumerate(Sk.keys):
            t = SymMultiMap(k, Sk.source_dim, Sk.target_dim, {key: 1})
            val = t.partial([g]).scale(-1)
            p = tau_section(val) if k - 1 >= 0 else None
            for row, y in Pk1.to_vector(p).items():
                coords[((x,), row * nS + col)] = y
    c = Cochain(1, H, coords)
    return c, H, Sk, Pk1


def connecting(t: Cochain, A: AffineRepresentation, W: Representation, k: int,
               Sk: PolyModule | None = None, Pk1: PolyModule | None = None) -> Cochain:
    """``chi`` on cochain level via the explicit formula

        t^chi_{x0..xp}(u..) = sum_i (-1)^(i+1) t_{x0..^xi..xp}(x_i.a0, u..)

    followed by ``tau``.  ``t`` takes values in ``S^k(A, W)``.
    """
    Sk = Sk or sym_module(A.model, W, k)
    Pk1 = Pk1 or poly_module(A, W, k - 1)
    if not coboundary(Cochain(t.degree, Sk.rep, t.coords)).is_zero():
        raise CohomologyError("t is not a cocycle")
    p = t.degree
    n = A.algebra.dim
    from itertools import combinations

    out = {}
    for X in combinations(range(n), p + 1):
        total = PolyMap.zero(k - 1, Sk.source_dim, Sk.target_dim)
        for i, xi in enumerate(X):
            g = A.gamma(xi)
            if not g:
                continue
            rest = X[:i] + X[i + 1:]
            val = t.value(rest)
            if not val:
                continue
            tt = Sk.from_vector(val)
            sign = 1 if i % 2 else -1
            total = total + tau_section(tt.partial([g])).scale(sign)
        for v, y in Pk1.to_vector(total).items():
            out[(X, v)] = y
    return Cochain(p + 1, Pk1.rep, out)


def connecting_abstract(t: Cochain, A: AffineRepresentation, W: Representation, k: int) -> Cochain:
    """``chi`` by lifting with ``tau``, applying the coboundary in ``P^k`` and
    reading the result in ``P^{k-1}``."""
    Sk = sym_module(A.model, W, k)
    Pk = poly_module(A, W, k)
    Pk1 = poly_module(A, W, k - 1)
    lift = {}
    for (I, v), x in t.coords.items():
        tt = Sk.from_vector({v: 1})
        for j, y in Pk.to_vector(tau_section(tt)).items():
            lift[(I, j)] = lift.get((I, j), 0) + x * y
    d = coboundary(Cochain(t.degree, Pk.rep, lift))
    out = {}
    for (I, j), x in d.coords.items():
        i, J, w = Pk.keys[j]
        if i == k:
            raise CohomologyError("lift boundary has a top component: t is not a cocycle")
        out[(I, Pk1.index[(i, J, w)])] = x
    return Cochain(t.degree + 1, Pk1.rep, out)


def pullback(f: AffineMap, q: PolyMap, A: AffineRepresentation, B: AffineRepresentation,
             check: bool = True) -> PolyMap:
    """``f^* q = q o f`` with components ``q'_i(T u_1, .., T u_i)`` where ``q'``
    is ``q`` rebased to ``f(a0)``."""
    if check and not is_intertwining(f, A, B):
        raise ValueError("f is not an affine equivariant map")
    qb = rebase(q, f.translation)
    T = f.linear_part
    cols = [T.column(j) for j in range(A.dim)]
    comps = []
    for i, c in enumerate(qb.components):
        coords = {}
        for J in _multisets(A.dim, i):
            for w, x in c(*[cols[j] for j in J]).items():
                coords[(J, w)] = x
        comps.append(SymMultiMap(i, A.dim, q.target_dim, coords))
    return PolyMap(comps)
