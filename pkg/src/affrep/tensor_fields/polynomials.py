"""Sparse multivariate polynomials with rational coefficients.

A polynomial in ``m`` variables is a dict ``{exponent tuple: Fraction}``
with no stored zeros.  All helpers return fresh dicts.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial, prod

Poly = dict


def padd_into(out: dict, p: dict, a=1) -> dict:
    """``out += a * p`` in place."""
    if not a:
        return out
    for e, c in p.items():
        s = out.get(e, 0) + a * c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def padd(p: dict, q: dict, a=1) -> dict:
    return padd_into(dict(p), q, a)


def pscale(p: dict, a) -> dict:
    a = Fraction(a)
    return {e: a * c for e, c in p.items()} if a else {}


def pmul(p: dict, q: dict) -> dict:
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            s = out.get(e, 0) + c1 * c2
            if s:
                out[e] = s
            else:
                out.pop(e)
    return out


def pderiv(p: dict, u: int) -> dict:
    out = {}
    for e, c in p.items():
        k = e[u]
        if k:
            out[e[:u] + (k - 1,) + e[u + 1:]] = c * k
    return out


def pderiv_multi(p: dict, beta: tuple) -> dict:
    """``d^beta p`` for a multi-index ``beta``."""
    out = {}
    for e, c in p.items():
        if all(x >= b for x, b in zip(e, beta)):
            f = prod(factorial(x) // factorial(x - b) for x, b in zip(e, beta))
            out[tuple(x - b for x, b in zip(e, beta))] = c * f
    return out


def monomial(e: tuple, c=1) -> dict:
    c = Fraction(c)
    return {tuple(e): c} if c else {}


def constant(m: int, c=1) -> dict:
    return monomial((0,) * m, c)


def variable(m: int, u: int) -> dict:
    return {tuple(int(i == u) for i in range(m)): Fraction(1)}


def exponents(m: int, d: int) -> list:
    """Exponents of total degree exactly ``d`` in lexicographic order."""
    out = []
    for combo in combinations_with_replacement(range(m), d):
        e = [0] * m
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def exponents_upto(m: int, d: int) -> list:
    return [e for k in range(d + 1) for e in exponents(m, k)]


def pdegree(p: dict) -> int:
    """Total degree; ``-1`` for the zero polynomial."""
    return max((sum(e) for e in p), default=-1)


def peval(p: dict, point) -> Fraction:
    return sum((c * prod(Fraction(x) ** k for x, k in zip(point, e)) for e, c in p.items()), Fraction(0))
