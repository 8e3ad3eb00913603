"""Tensor fields with polynomial coefficients on R^m and their Lie derivatives.

Every field stores ``comps``: a dict from an index key to a polynomial.
Keys are

* vector fields and 1-forms: ``i``
* symmetric (1,2)-tensors and connections: ``(k, i, j)`` with ``i <= j``
* symmetric contravariant p-tensors: a sorted p-tuple

Indices run over ``0..m-1`` (the coordinate ``x^1`` of the text is index 0).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement

from ..exact_linalg import format_rational, parse_rational
from .polynomials import (
    exponents,
    padd,
    padd_into,
    pderiv,
    pdegree,
    pmul,
    pscale,
)

__all__ = [
    "TensorField",
    "PolynomialVectorField",
    "OneFormField",
    "SymTensor12Field",
    "Connection",
    "SymContravariantField",
    "ScalarField",
    "bracket",
    "lie_derivative_function",
    "lie_derivative_one_form",
    "lie_derivative_s12",
    "lie_derivative_contravariant",
    "lie_derivative_connection",
    "lie_derivative_connection_bracket",
    "covariant_derivative",
    "trace",
    "pr",
    "alpha_one",
    "divergence",
    "jacobian_trace",
    "connection_cocycle",
    "cocycles_pr_tr",
    "kappa_cocycle",
    "contraction_zero",
    "d_nabla0",
    "projectively_equivalent",
    "poly_times_s12",
    "field_from_json",
    "monomial_fields",
]


class TensorField:
    """Base class: a finite table of polynomial components."""

    kind = "tensor"
    upper = 0
    lower = 0

    def __init__(self, m: int, comps=None):
        if m < 2:
            raise ValueError("m > 1 required")
        self.m = int(m)
        clean = {}
        for key, p in (comps or {}).items():
            key = self._key(key)
            for e, c in p.items():
                if len(e) != self.m:
                    raise ValueError(f"exponent {e} has wrong length")
            cur = clean.setdefault(key, {})
            padd_into(cur, {tuple(e): Fraction(c) for e, c in p.items()})
        self.comps = {k: p for k, p in clean.items() if p}

    # keys -------------------------------------------------------------
    def _key(self, key):
        return key

    def keys(self) -> list:
        raise NotImplementedError

    @classmethod
    def from_coeffs(cls, m: int, coeffs: dict, **kw):
        """Build from the flat table ``{(key, exponent): value}``."""
        comps = {}
        for (key, e), c in coeffs.items():
            comps.setdefault(key, {})[tuple(e)] = comps.get(key, {}).get(tuple(e), 0) + Fraction(c)
        return cls(m, comps, **kw)

    @property
    def coeffs(self) -> dict:
        return {(k, e): c for k, p in self.comps.items() for e, c in p.items()}

    def component(self, key) -> dict:
        return self.comps.get(self._key(key), {})

    def __getitem__(self, key) -> dict:
        return self.component(key)

    def _new(self, comps):
        return type(self)(self.m, comps)

    # arithmetic ----------------------------------------------------------
    def _combine(self, other, a):
        if type(self) is not type(other) or self.m != other.m:
            raise TypeError("incompatible fields")
        out = {k: dict(p) for k, p in self.comps.items()}
        for k, p in other.comps.items():
            padd_into(out.setdefault(k, {}), p, a)
        return self._new(out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, a):
        return self._new({k: pscale(p, a) for k, p in self.comps.items()})

    def __eq__(self, other):
        if not isinstance(other, TensorField):
            return NotImplemented
        return type(self) is type(other) and self.m == other.m and self.comps == other.comps

    def __hash__(self):
        return hash((type(self).__name__, self.m, frozenset((k, frozenset(p.items())) for k, p in self.comps.items())))

    def is_zero(self) -> bool:
        return not self.comps

    def degree(self) -> int:
        return max((pdegree(p) for p in self.comps.values()), default=-1)

    # serialization -------------------------------------------------------
    def _split(self, key) -> tuple:
        raise NotImplementedError

    def _join(self, upper: list, lower: list):
        raise NotImplementedError

    def to_json(self) -> dict:
        entries = []
        for key in sorted(self.comps):
            up, low = self._split(key)
            for e in sorted(self.comps[key]):
                entries.append([list(up), list(low), list(e), format_rational(self.comps[key][e])])
        return {"kind": self.kind, "m": self.m, "entries": entries}

    @classmethod
    def from_json(cls, data: dict):
        m = data["m"]
        self = cls.__new__(cls)
        self.m = m
        comps = {}
        for up, low, e, x in data["entries"]:
            key = self._join(up, low)
            comps.setdefault(key, {})[tuple(e)] = parse_rational(x)
        return cls(m, comps)

    def __repr__(self):
        return f"{type(self).__name__}(m={self.m}, nnz={sum(len(p) for p in self.comps.values())})"


class ScalarField(TensorField):
    """A polynomial function, stored under the single key ``()``."""

    kind = "function"

    def __init__(self, m, poly_or_comps=None):
        if poly_or_comps and () not in poly_or_comps:
            poly_or_comps = {(): poly_or_comps}
        super().__init__(m, poly_or_comps)

    @property
    def poly(self) -> dict:
        return self.comps.get((), {})

    def keys(self):
        return [()]

    def _split(self, key):
        return (), ()

    def _join(self, upper, lower):
        return ()


class PolynomialVectorField(TensorField):
    """``X = sum_i X^i(x) d_i``."""

    kind = "vector"
    upper = 1

    def _key(self, key):
        return int(key)

    def keys(self):
        return list(range(self.m))

    def _split(self, key):
        return (key,), ()

    def _join(self, upper, lower):
        return int(upper[0])

    @classmethod
    def monomial(cls, m: int, i: int, e: tuple, c=1):
        return cls(m, {i: {tuple(e): Fraction(c)}})

    @classmethod
    def euler(cls, m: int):
        return cls(m, {u: {tuple(int(v == u) for v in range(m)): Fraction(1)} for u in range(m)})


class OneFormField(TensorField):
    """``alpha = sum_i alpha_i(x) dx^i``."""

    kind = "one_form"
    lower = 1

    def _key(self, key):
        return int(key)

    def keys(self):
        return list(range(self.m))

    def _split(self, key):
        return (), (key,)

    def _join(self, upper, lower):
        return int(lower[0])


class _Sym12(TensorField):
    upper = 1
    lower = 2

    def _key(self, key):
        k, i, j = key
        return (int(k), min(i, j), max(i, j))

    def keys(self):
        return [(k, i, j) for k in range(self.m) for i in range(self.m) for j in range(i, self.m)]

    def _split(self, key):
        return (key[0],), (key[1], key[2])

    def _join(self, upper, lower):
        return (int(upper[0]), int(lower[0]), int(lower[1]))

    def get(self, k, i, j) -> dict:
        return self.comps.get((k, min(i, j), max(i, j)), {})


class SymTensor12Field(_Sym12):
    """Symmetric (1,2)-tensor ``S^k_ij``; the dual basis pair ``{i, j}`` is unordered."""

    kind = "s12"

    @classmethod
    def monomial(cls, m: int, k: int, i: int, j: int, e: tuple, c=1):
        return cls(m, {(k, i, j): {tuple(e): Fraction(c)}})


class Connection(_Sym12):
    """Torsion-free connection given by Christoffel symbols ``Gamma^k_ij``."""

    kind = "connection"

    @classmethod
    def flat(cls, m: int):
        return cls(m)

    def difference(self, other: "Connection") -> SymTensor12Field:
        """``self - other`` as a tensor field."""
        return SymTensor12Field(self.m, (self._combine(other, -1)).comps)

    def shifted(self, S: SymTensor12Field) -> "Connection":
        out = {k: dict(p) for k, p in self.comps.items()}
        for k, p in S.comps.items():
            padd_into(out.setdefault(k, {}), p)
        return Connection(self.m, out)


class SymContravariantField(TensorField):
    """Symmetric contravariant field ``P^{i_1..i_p}`` of degree ``p``."""

    kind = "sym_contravariant"

    def __init__(self, m: int, comps=None, p: int | None = None):
        if p is None:
            lens = {len(k) for k in (comps or {})}
            if len(lens) > 1:
                raise ValueError("mixed degrees")
            p = lens.pop() if lens else 0
        self.p = int(p)
        super().__init__(m, comps)
        for k in self.comps:
            if len(k) != self.p:
                raise ValueError(f"index {k} does not have degree {self.p}")

    def _new(self, comps):
        return SymContravariantField(self.m, comps, self.p)

    def _key(self, key):
        return tuple(sorted(int(i) for i in key))

    def keys(self):
        return list(combinations_with_replacement(range(self.m), self.p))

    def _split(self, key):
        return key, ()

    def _join(self, upper, lower):
        return tuple(sorted(int(i) for i in upper))

    def get(self, *idx) -> dict:
        return self.comps.get(tuple(sorted(idx)), {})

    def to_json(self):
        d = super().to_json()
        d["p"] = self.p
        return d

    @classmethod
    def from_json(cls, data):
        comps = {}
        for up, low, e, x in data["entries"]:
            comps.setdefault(tuple(sorted(up)), {})[tuple(e)] = parse_rational(x)
        return cls(data["m"], comps, data.get("p"))


_KINDS = {c.kind: c for c in (ScalarField, PolynomialVectorField, OneFormField, SymTensor12Field,
                               Connection, SymContravariantField)}


def field_from_json(data: dict) -> TensorField:
    return _KINDS[data["kind"]].from_json(data)


def _check_m(*fields):
    ms = {f.m for f in fields}
    if len(ms) != 1:
        raise ValueError(f"dimension mismatch: {sorted(ms)}")


def _directional(X: PolynomialVectorField, p: dict) -> dict:
    """``X^u d_u p``."""
    out = {}
    for u, xu in X.comps.items():
        padd_into(out, pmul(xu, pderiv(p, u)))
    return out


# ---------------------------------------------------------------------------
# Lie derivatives

def bracket(X: PolynomialVectorField, Y: PolynomialVectorField) -> PolynomialVectorField:
    """``[X,Y]^i = X^u d_u Y^i - Y^u d_u X^i``."""
    _check_m(X, Y)
    out = {}
    for i in range(X.m):
        c = padd(_directional(X, Y.component(i)), _directional(Y, X.component(i)), -1)
        if c:
            out[i] = c
    return PolynomialVectorField(X.m, out)


def lie_derivative_function(X: PolynomialVectorField, f) -> ScalarField:
    poly = f.poly if isinstance(f, ScalarField) else f
    return ScalarField(X.m, {(): _directional(X, poly)})


def lie_derivative_one_form(X: PolynomialVectorField, a: OneFormField) -> OneFormField:
    """``(L_X a)_i = X^u d_u a_i + a_u d_i X^u``."""
    _check_m(X, a)
    m = X.m
    out = {}
    for i in range(m):
        c = _directional(X, a.component(i))
        for u in range(m):
            padd_into(c, pmul(a.component(u), pderiv(X.component(u), i)))
        if c:
            out[i] = c
    return OneFormField(m, out)


def lie_derivative_s12(X: PolynomialVectorField, S: _Sym12) -> SymTensor12Field:
    """``(L_X S)^k_ij = X^u d_u S^k_ij + S^k_uj d_i X^u + S^k_iu d_j X^u - S^u_ij d_u X^k``."""
    _check_m(X, S)
    m = X.m
    dX = [[pderiv(X.component(u), i) for i in range(m)] for u in range(m)]  # dX[u][i] = d_i X^u
    out = {}
    for k in range(m):
        for i in range(m):
            for j in range(i, m):
                c = _directional(X, S.get(k, i, j))
                for u in range(m):
                    if dX[u][i]:
                        padd_into(c, pmul(S.get(k, u, j), dX[u][i]))
                    if dX[u][j]:
                        padd_into(c, pmul(S.get(k, i, u), dX[u][j]))
                    if dX[k][u]:
                        padd_into(c, pmul(S.get(u, i, j), dX[k][u]), -1)
                if c:
                    out[(k, i, j)] = c
    return SymTensor12Field(m, out)


def lie_derivative_contravariant(X: PolynomialVectorField, P: SymContravariantField) -> SymContravariantField:
    """``(L_X P)^I = X^u d_u P^I - sum_l P^(I, i_l -> u) d_u X^(i_l)``."""
    _check_m(X, P)
    m = X.m
    out = {}
    for I in P.keys():
        c = _directional(X, P.get(*I))
        for l, il in enumerate(I):
            for u in range(m):
                d = pderiv(X.component(il), u)
                if d:
                    J = I[:l] + (u,) + I[l + 1:]
                    padd_into(c, pmul(P.get(*J), d), -1)
        if c:
            out[I] = c
    return SymContravariantField(m, out, P.p)


def lie_derivative_connection(X: PolynomialVectorField, nabla: Connection) -> SymTensor12Field:
    """Coordinate expression

    ``(L_X nabla)^k_ij = d_i d_j X^k + d_i X^u G^k_uj + d_j X^u G^k_iu - d_u X^k G^u_ij + X^u d_u G^k_ij``.
    """
    _check_m(X, nabla)
    m = X.m
    G = nabla
    out = {}
    for k in range(m):
        Xk = X.component(k)
        for i in range(m):
            for j in range(i, m):
                c = pderiv(pderiv(Xk, i), j)
                padd_into(c, _directional(X, G.get(k, i, j)))
                for u in range(m):
                    Xu = X.component(u)
                    padd_into(c, pmul(pderiv(Xu, i), G.get(k, u, j)))
                    padd_into(c, pmul(pderiv(Xu, j), G.get(k, i, u)))
                    padd_into(c, pmul(pderiv(Xk, u), G.get(u, i, j)), -1)
                if c:
                    out[(k, i, j)] = c
    return SymTensor12Field(m, out)


def covariant_derivative(nabla: Connection, Y: PolynomialVectorField, Z: PolynomialVectorField) -> PolynomialVectorField:
    """``nabla_Y Z = Y^u (d_u Z^k + G^k_uv Z^v) d_k``."""
    m = nabla.m
    out = {}
    for k in range(m):
        c = _directional(Y, Z.component(k))
        for u, yu in Y.comps.items():
            for v, zv in Z.comps.items():
                g = nabla.get(k, u, v)
                if g:
                    padd_into(c, pmul(pmul(yu, g), zv))
        if c:
            out[k] = c
    return PolynomialVectorField(m, out)


def lie_derivative_connection_bracket(X: PolynomialVectorField, nabla: Connection) -> SymTensor12Field:
    """``(L_X nabla)(Y, Z) = [X, nabla_Y Z] - nabla_[X,Y] Z - nabla_Y [X, Z]`` on coordinate fields."""
    m = X.m
    coord = [PolynomialVectorField(m, {i: {(0,) * m: Fraction(1)}}) for i in range(m)]
    out = {}
    for i in range(m):
        for j in range(i, m):
            Y, Z = coord[i], coord[j]
            v = bracket(X, covariant_derivative(nabla, Y, Z))
            v = v - covariant_derivative(nabla, bracket(X, Y), Z)
            v = v - covariant_derivative(nabla, Y, bracket(X, Z))
            for k, p in v.comps.items():
                out[(k, i, j)] = p
    return SymTensor12Field(m, out)


# ---------------------------------------------------------------------------
# trace decomposition

def trace(S: _Sym12) -> OneFormField:
    """``tr(S)_i = sum_k S^k_ki``."""
    m = S.m
    out = {}
    for i in range(m):
        c = {}
        for k in range(m):
            padd_into(c, S.get(k, k, i))
        if c:
            out[i] = c
    return OneFormField(m, out)


def alpha_one(a: OneFormField) -> SymTensor12Field:
    """``(a.1)(u, v) = a(u) v + a(v) u``, i.e. ``(a.1)^k_ij = a_i d^k_j + a_j d^k_i``."""
    m = a.m
    out = {}
    for k in range(m):
        for i in range(m):
            for j in range(i, m):
                c = {}
                if j == k:
                    padd_into(c, a.component(i))
                if i == k:
                    padd_into(c, a.component(j))
                if c:
                    out[(k, i, j)] = c
    return SymTensor12Field(m, out)


def pr(S: _Sym12) -> SymTensor12Field:
    """Trace-free part ``S - tr(S).1 / (m+1)``."""
    S = SymTensor12Field(S.m, S.comps)
    return S - alpha_one(trace(S)).scale(Fraction(1, S.m + 1))


def projectively_equivalent(n1: Connection, n2: Connection) -> bool:
    """True when ``n2 - n1 = a.1`` for a 1-form ``a``."""
    _check_m(n1, n2)
    return pr(n2.difference(n1)).is_zero()


def divergence(X: PolynomialVectorField) -> dict:
    """``div X = tr(dX) = sum_i d_i X^i`` (flat volume)."""
    out = {}
    for i in range(X.m):
        padd_into(out, pderiv(X.component(i), i))
    return out


jacobian_trace = divergence


def poly_times_s12(f: dict, S: _Sym12) -> SymTensor12Field:
    return SymTensor12Field(S.m, {k: pmul(f, p) for k, p in S.comps.items()})


# ---------------------------------------------------------------------------
# cocycles on vector fields

def connection_cocycle(nabla: Connection):
    """``X -> L_X nabla``."""
    return lambda X: lie_derivative_connection(X, nabla)


def cocycles_pr_tr(nabla: Connection):
    """The pair ``(X -> pr(L_X nabla), X -> tr(L_X nabla).1)``."""
    def l_pr(X):
        return pr(lie_derivative_connection(X, nabla))

    def l_tr(X):
        return alpha_one(trace(lie_derivative_connection(X, nabla)))

    return l_pr, l_tr


def kappa_cocycle(a, b, m: int | None = None):
    """``kappa(X,Y) = a div X tr(L_Y n0).1 + b div X pr(L_Y n0) - (X <-> Y)`` with ``n0`` flat."""
    a, b = Fraction(a), Fraction(b)

    def half(X, Y):
        L = lie_derivative_connection(Y, Connection(Y.m))
        dX = divergence(X)
        out = SymTensor12Field(Y.m)
        if a:
            out = out + poly_times_s12(dX, alpha_one(trace(L))).scale(a)
        if b:
            out = out + poly_times_s12(dX, pr(L)).scale(b)
        return out

    def kappa(X, Y):
        return half(X, Y) - half(Y, X)

    return kappa


# ---------------------------------------------------------------------------
# contraction and the flat divergence operator

def contraction_zero(S: _Sym12, P: SymContravariantField) -> SymContravariantField:
    """``(S . P)^k = sum_{i,j} S^k_ij P^ij`` (sum over ordered pairs)."""
    if P.p != 2:
        raise ValueError("P must have degree 2")
    _check_m(S, P)
    m = S.m
    out = {}
    for k in range(m):
        c = {}
        for i in range(m):
            for j in range(m):
                s = S.get(k, i, j)
                if s:
                    padd_into(c, pmul(s, P.get(i, j)))
        if c:
            out[(k,)] = c
    return SymContravariantField(m, out, 1)


def d_nabla0(P: SymContravariantField) -> SymContravariantField:
    """``D(P)^i = d_j P^ji``."""
    if P.p != 2:
        raise ValueError("P must have degree 2")
    m = P.m
    out = {}
    for i in range(m):
        c = {}
        for j in range(m):
            padd_into(c, pderiv(P.get(j, i), j))
        if c:
            out[(i,)] = c
    return SymContravariantField(m, out, 1)


def monomial_fields(m: int, d: int) -> list:
    """All monomial vector fields ``x^e d_i`` of degree exactly ``d``."""
    return [PolynomialVectorField.monomial(m, i, e) for e in exponents(m, d) for i in range(m)]
