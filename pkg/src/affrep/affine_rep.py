"""Affine representations of a Lie algebra.

An affine space is charted by its model vector space with the base point
at the origin, so an affine representation is a pair ``(rho, gamma0)``:
the action is ``x.(a0 + u) = gamma0(x) + rho(x) u``.  Changing the base
point changes ``gamma0`` by an exact coboundary, which is how base-point
freedom shows up here.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .ce_cohomology import (
    Cochain,
    CohomologyError,
    class_coordinates,
    coboundary,
    cohomology,
    full_complex,
    is_coboundary,
)
from .exact_linalg import SparseMatrix, as_vector, dense, kernel_basis, rank, solve
from .lie_core import (
    Representation,
    RepresentationError,
    direct_sum_rep,
    hom_module,
    hom_vector_to_matrix,
    invariants,
)

__all__ = [
    "AffineError",
    "AffineRepresentation",
    "AffineMap",
    "check_affine_axiom",
    "from_pair",
    "linear_as_affine",
    "rebase",
    "is_intertwining",
    "equivalent",
    "direct_sum",
    "canonical_on_class",
    "ClassAffineRepresentation",
    "phi_map",
    "classify_affine_reps",
    "classify_from_action",
    "Classification",
]


class AffineError(ValueError):
    pass


def _vadd(*terms) -> dict:
    out = {}
    for coef, vec in terms:
        for k, x in vec.items():
            s = out.get(k, 0) + coef * x
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


class AffineRepresentation:
    """``model`` is the linear representation on the direction space and
    ``gamma0`` the 1-cochain ``x -> x.a0`` at the chart origin ``a0``."""

    def __init__(self, model: Representation, gamma0: Cochain, validate: bool = True):
        if gamma0.degree != 1:
            raise AffineError("base cocycle must have degree 1")
        self.model = model
        self.gamma0 = Cochain(1, model, gamma0.coords)
        if validate and not coboundary(self.gamma0).is_zero():
            raise AffineError("base cochain is not a 1-cocycle")

    @property
    def algebra(self):
        return self.model.algebra

    @property
    def dim(self) -> int:
        return self.model.space_dim

    def gamma(self, x: int) -> dict:
        return self.gamma0.value((x,))

    def act(self, x, a) -> dict:
        """``x.a`` for a point ``a`` (coordinates relative to the origin)."""
        a = as_vector(a)
        if isinstance(x, int):
            return _vadd((1, self.gamma(x)), (1, self.model.act(x, a)))
        g = self.gamma0.evaluate([x])
        return _vadd((1, g), (1, self.model.act(x, a)))

    def __repr__(self):
        return f"AffineRepresentation(dim={self.dim}, algebra_dim={self.algebra.dim})"


@dataclass(frozen=True)
class AffineMap:
    """``f(a0 + u) = b0 + translation + linear_part u``."""

    linear_part: SparseMatrix
    translation: dict

    def __call__(self, a) -> dict:
        return _vadd((1, self.translation), (1, self.linear_part.apply(a)))

    def compose(self, first: "AffineMap") -> "AffineMap":
        """``self o first``."""
        return AffineMap(self.linear_part @ first.linear_part, self(first.translation))

    @classmethod
    def identity(cls, n: int):
        return cls(SparseMatrix.identity(n), {})


def linear_as_affine(rho: Representation) -> AffineRepresentation:
    return AffineRepresentation(rho, Cochain.zero(1, rho))


def from_pair(rho: Representation, gamma0: Cochain) -> AffineRepresentation:
    """The affine representation ``(x, u) -> gamma0(x) + rho(x) u``."""
    if not coboundary(Cochain(1, rho, gamma0.coords)).is_zero():
        raise AffineError("gamma0 is not a 1-cocycle")
    return AffineRepresentation(rho, gamma0)


def check_affine_axiom(A: AffineRepresentation, samples: Sequence) -> list:
    """Violations of ``rho(x)(y.a) - rho(y)(x.a) - [x,y].a = 0``.

    Returns ``(x, y, a_index, defect)`` tuples; empty means the axiom holds
    on every basis pair at every sample point.
    """
    L = A.algebra
    bad = []
    for s, a in enumerate(samples):
        a = as_vector(a)
        ya = [A.act(y, a) for y in range(L.dim)]
        for x in range(L.dim):
            for y in range(x + 1, L.dim):
                lhs = _vadd(
                    (1, A.model.act(x, ya[y])),
                    (-1, A.model.act(y, ya[x])),
                    (-1, A.act(L.bracket_basis(x, y), a) if L.bracket_basis(x, y) else {}),
                )
                if lhs:
                    bad.append((x, y, s, lhs))
    return bad


def rebase(A: AffineRepresentation, a) -> Cochain:
    """The cocycle ``gamma_a = gamma0 + d(a - a0)``."""
    a = as_vector(a)
    shift = coboundary(Cochain(0, A.model, {((), v): x for v, x in a.items()}))
    return A.gamma0 + shift


def is_intertwining(f: AffineMap, A: AffineRepresentation, B: AffineRepresentation,
                    samples: Sequence | None = None) -> bool:
    """Whether ``x.f(a) = f_lin(x.a)``.

    Checked pointwise on basis elements at sample points and, independently,
    through the two conditions ``f_lin rho_A = rho_B f_lin`` and
    ``gamma_B + d(translation) = f_lin gamma_A``; the two verdicts must agree.
    """
    T = f.linear_part
    if T.shape != (B.dim, A.dim):
        raise AffineError(f"linear part has shape {T.shape}, expected {(B.dim, A.dim)}")
    if A.algebra.dim != B.algebra.dim:
        raise AffineError("different algebras")
    L = A.algebra
    if samples is None:
        rng = random.Random(0)
        samples = [{}] + [{i: Fraction(rng.randint(-5, 5)) for i in range(A.dim)} for _ in range(3)]
        samples += [{i: Fraction(1)} for i in range(A.dim)]
    pointwise = True
    for a in samples:
        fa = f(a)
        for x in range(L.dim):
            if B.act(x, fa) != T.apply(A.act(x, a)):
                pointwise = False
                break
        if not pointwise:
            break
    structural = all(T @ A.model.action[x] == B.model.action[x] @ T for x in range(L.dim))
    if structural:
        gB = rebase(B, f.translation)
        gA = A.gamma0.map_values(T, B.model)
        structural = Cochain(1, B.model, gB.coords) == gA
    if pointwise != structural:
        raise AffineError("pointwise and structural intertwining tests disagree")
    return structural


def _intertwiner_system(A: AffineRepresentation, B: AffineRepresentation) -> SparseMatrix:
    """Linear equations on ``(T, v)`` for an intertwining affine map.

    Unknown ``T[r, c]`` sits at ``r * nA + c``; ``v[r]`` at ``nB * nA + r``.
    Equations: ``T rho_A(x) - rho_B(x) T = 0`` and
    ``T gamma_A(x) - gamma_B(x) - rho_B(x) v = 0`` (homogenized with an
    extra unknown standing for the constant 1).
    """
    nA, nB = A.dim, B.dim
    L = A.algebra
    nT = nA * nB
    one = nT + nB
    rows = []
    for x in range(L.dim):
        RA, RB = A.model.action[x], B.model.action[x]
        for r in range(nB):
            for c in range(nA):
                row = {}
                for (k, cc), val in RA.items():  # (T RA)[r, c] = sum_k T[r,k] RA[k,c]
                    if cc == c:
                        row[r * nA + k] = row.get(r * nA + k, 0) + val
                for (rr, k), val in RB.items():  # (RB T)[r, c] = sum_k RB[r,k] T[k,c]
                    if rr == r:
                        row[k * nA + c] = row.get(k * nA + c, 0) - val
                rows.append(row)
        gA, gB = A.gamma(x), B.gamma(x)
        for r in range(nB):
            row = {}
            for k, val in gA.items():
                row[r * nA + k] = row.get(r * nA + k, 0) + val
            if gB.get(r):
                row[one] = row.get(one, 0) - gB[r]
            for (rr, k), val in RB.items():
                if rr == r:
                    row[nT + k] = row.get(nT + k, 0) - val
            rows.append(row)
    rows = [{k: v for k, v in r.items() if v} for r in rows]
    return SparseMatrix(len(rows), one + 1, {(i, k): v for i, r in enumerate(rows) for k, v in r.items()})


def _det(M: list) -> Fraction:
    """Exact determinant by fraction Gaussian elimination (small dense)."""
    n = len(M)
    M = [list(r) for r in M]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        inv = 1 / M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] * inv
            if f:
                for k in range(c, n):
                    M[r][k] -= f * M[c][k]
    return det


def equivalent(A: AffineRepresentation, B: AffineRepresentation, max_grid: int = 20000,
               seed: int = 0) -> AffineMap | None:
    """A bijective intertwining map ``A -> B``, or None.

    The intertwiners form an affine space ``K`` (solution set of a linear
    system).  ``det T`` is a polynomial of degree ``n`` on ``K``; it is
    identically zero exactly when it vanishes on the grid ``{0..n}^dim K``,
    which is searched exhaustively when small enough and sampled
    otherwise.
    """
    if A.algebra.dim != B.algebra.dim:
        raise AffineError("different algebras")
    if A.dim != B.dim:
        return None
    n = A.dim
    nT = n * n
    M = _intertwiner_system(A, B)
    K = kernel_basis(M).basis
    one = nT + n
    # solutions with the constant coordinate equal to 1
    base = next((k for k in K if k.get(one)), None)
    if base is None:
        return None
    base = {i: x / base[one] for i, x in base.items()}
    hom = [_vadd((1, k), (-k.get(one, 0), base)) for k in K]
    hom = [{i: x for i, x in h.items() if x and i != one} for h in hom]
    # independent homogeneous directions
    from .exact_linalg import Echelon

    ech = Echelon(one + 1)
    dirs = []
    for h in hom:
        if h and ech.add(h):
            dirs.append(h)

    def mapping(coefs):
        vec = dict(base)
        for c, d in zip(coefs, dirs):
            if c:
                for i, x in d.items():
                    vec[i] = vec.get(i, 0) + c * x
        T = SparseMatrix(n, n, {(i // n, i % n): x for i, x in vec.items() if i < nT and x})
        v = {i - nT: x for i, x in vec.items() if nT <= i < one and x}
        return T, v

    def candidates():
        r = len(dirs)
        if (n + 1) ** r <= max_grid:
            yield from itertools.product(range(n + 1), repeat=r)
        else:
            rng = random.Random(seed)
            for _ in range(max_grid):
                yield tuple(rng.randint(-50, 50) for _ in range(r))

    for coefs in candidates():
        T, v = mapping(coefs)
        if n == 0 or _det(T.to_dense()) != 0:
            return AffineMap(T, v)
    return None


def direct_sum(A1: AffineRepresentation, A2: AffineRepresentation) -> AffineRepresentation:
    """``A1 (+) A2`` with block-diagonal ``rho`` and concatenated cocycle."""
    if A1.algebra.dim != A2.algebra.dim:
        raise AffineError("different algebras")
    rho = direct_sum_rep(A1.model, A2.model)
    n1 = A1.dim
    coords = dict(A1.gamma0.coords)
    for (I, v), x in A2.gamma0.coords.items():
        coords[(I, v + n1)] = x
    return AffineRepresentation(rho, Cochain(1, rho, coords))


class ClassAffineRepresentation(AffineRepresentation):
    """The canonical affine representation on a cohomology class ``gamma + dV``.

    Points are 1-cocycles ``gamma + dv``; the chart coordinate of such a
    point is the coordinate vector of ``dv`` in a basis of ``dV``.
    """

    def __init__(self, rho: Representation, gamma: Cochain):
        cx = full_complex(rho, 1)
        d0 = cx.differential(0)
        if kernel_basis(d0).dim:
            raise AffineError("H^0(L, V) != 0: the class is not modeled on V")
        self.rho = rho
        self.class_point = Cochain(1, rho, gamma.coords)
        self._cx = cx
        self._d0 = d0  # columns: dv for v = basis vectors, a basis of dV
        n = rho.space_dim
        # the transported action on dV, in the basis {d e_v}: d(rho(x) v)
        model = Representation(rho.algebra, n, list(rho.action), validate=False)
        gamma0 = {}
        for x in range(rho.algebra.dim):
            # x.gamma = d(gamma(x)) in coordinates of the basis d e_v is gamma(x)
            for v, c in gamma.value((x,)).items():
                gamma0[((x,), v)] = c
        super().__init__(model, Cochain(1, model, gamma0))

    def point(self, coords) -> Cochain:
        """The cocycle ``gamma + d(sum coords_v e_v)``."""
        vec = self._d0.apply(coords)
        return self.class_point + self._cx.cochain(1, vec)

    def chart(self, cocycle: Cochain) -> list:
        diff = Cochain(1, self.rho, cocycle.coords) - self.class_point
        x = solve(self._d0, self._cx.vector(diff))
        if x is None:
            raise AffineError("cocycle does not lie in this class")
        return x

    def evaluate_action(self, x: int, cocycle: Cochain) -> Cochain:
        """``x.gamma' = d(gamma'(x))`` as an element of dV."""
        val = cocycle.value((x,))
        return coboundary(Cochain(0, self.rho, {((), v): c for v, c in val.items()}))


def canonical_on_class(rho: Representation, gamma: Cochain) -> ClassAffineRepresentation:
    """Affine representation carried by the class of ``gamma`` (needs ``H^0 = 0``)."""
    if not coboundary(Cochain(1, rho, gamma.coords)).is_zero():
        raise AffineError("gamma is not a 1-cocycle")
    return ClassAffineRepresentation(rho, gamma)


def phi_map(A: AffineRepresentation, C: ClassAffineRepresentation) -> AffineMap:
    """``a -> gamma_a`` written in the chart of ``C`` (needs ``A.gamma0`` in C's class)."""
    n = A.dim
    trans = C.chart(Cochain(1, C.rho, A.gamma0.coords))
    return AffineMap(SparseMatrix.identity(n), as_vector(trans))


# classification -------------------------------------------------------------


@dataclass
class Classification:
    count: int | None
    classes: list  # each: {"class_id", "support", "representative"}
    characters: list  # per H^1 basis vector: eigenvalue under each invariant map
    implemented: bool
    note: str = ""

    def to_json(self, serialize=None) -> list:
        out = []
        for c in self.classes:
            rep = c["representative"]
            out.append({
                "class_id": c["class_id"],
                "support": list(c["support"]),
                "representative_cocycle": serialize(rep) if serialize else rep,
                "invariant_action": [[str(x) for x in row] for row in self.characters],
            })
        return out


def _char_poly(M: list) -> list:
    """Coefficients (highest first) of det(t I - M), Faddeev-LeVerrier."""
    n = len(M)
    coeffs = [Fraction(1)]
    Mk = [[Fraction(0)] * n for _ in range(n)]
    I = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    c = Fraction(1)
    for k in range(1, n + 1):
        # Mk = M (M_{k-1} + c_{k-1} I)
        A = [[Mk[i][j] + c * I[i][j] for j in range(n)] for i in range(n)]
        Mk = [[sum(M[i][t] * A[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        c = -sum(Mk[i][i] for i in range(n)) / k
        coeffs.append(c)
    return coeffs


def _rational_roots(coeffs: list) -> list:
    """Distinct rational roots of a polynomial with rational coefficients."""
    from math import gcd, lcm

    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    roots = set()
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    k = 0
    while ints and ints[-1] == 0:
        ints.pop()
        k += 1
    if k:
        roots.add(Fraction(0))
    if len(ints) <= 1:
        return sorted(roots)
    lead, const = abs(ints[0]), abs(ints[-1])

    def divisors(m):
        return [d for d in range(1, m + 1) if m % d == 0]

    for p in divisors(const):
        for q in divisors(lead):
            if gcd(p, q) != 1:
                continue
            for r in (Fraction(p, q), Fraction(-p, q)):
                val = Fraction(0)
                for c in ints:
                    val = val * r + c
                if val == 0:
                    roots.add(r)
    return sorted(roots)


def classify_from_action(action: Sequence[list], s: int, basis_labels=None) -> Classification:
    """Orbits of ``H^1 = Q^s`` under invertible elements of a commutative algebra.

    ``action[j]`` is the ``s x s`` matrix by which the j-th invariant map
    acts on the classes.  The action must be simultaneously diagonalizable
    over Q; when the resulting characters are linearly independent each
    coordinate scales independently and the orbits are the ``2^s`` zero
    patterns.  Other cases are reported as not implemented.
    """
    if s == 0:
        return Classification(1, [{"class_id": 0, "support": (), "representative": ()}], [], True)
    # joint eigenbasis from a generic combination
    r = len(action)
    generic = [[sum((k + 1) ** 2 * Fraction(action[k][i][j]) for k in range(r)) for j in range(s)]
               for i in range(s)]
    roots = _rational_roots(_char_poly(generic))
    eigvecs = []
    for lam in roots:
        shifted = SparseMatrix.from_rows([[generic[i][j] - (lam if i == j else 0) for j in range(s)]
                                          for i in range(s)])
        eigvecs.extend(kernel_basis(shifted).basis)
    if len(eigvecs) != s:
        return Classification(None, [], [], False, "invariant algebra does not act diagonalizably over Q")
    chars = []
    for v in eigvecs:
        row = []
        for k in range(r):
            Av = SparseMatrix.from_rows(action[k]).apply(v)
            i0 = next(iter(v))
            lam = Av.get(i0, Fraction(0)) / v[i0]
            if {i: lam * x for i, x in v.items() if lam * x} != Av:
                return Classification(None, [], [], False,
                                      "invariant maps are not simultaneously diagonal on a computed basis")
            row.append(lam)
        chars.append(row)
    if rank(SparseMatrix.from_rows(chars)) < s:
        return Classification(None, [], chars, False,
                              "classification not implemented for this case: characters are dependent")
    classes = []
    for cid, support in enumerate(itertools.product((0, 1), repeat=s)):
        vec = {}
        for bit, v in zip(support, eigvecs):
            if bit:
                for i, x in v.items():
                    vec[i] = vec.get(i, 0) + x
        classes.append({"class_id": cid, "support": support,
                        "representative": tuple(dense(vec, s))})
    return Classification(2 ** s, classes, chars, True)


def classify_affine_reps(rho: Representation) -> Classification:
    """Equivalence classes of affine representations inducing ``rho``."""
    if invariants(rho).dim:
        raise AffineError("H^0(L, V) != 0")
    H1 = cohomology(rho, 1)
    s = H1.dimension
    hom = hom_module(rho, rho)
    inv = invariants(hom).basis
    n = rho.space_dim
    mats = [hom_vector_to_matrix(t, n, n) for t in inv]
    action = []
    for T in mats:
        cols = []
        for g in H1.representatives:
            cols.append(class_coordinates(H1, g.map_values(T, rho)))
        action.append([[cols[j][i] for j in range(s)] for i in range(s)])
    result = classify_from_action(action, s)
    # express representatives as cocycles
    for c in result.classes:
        coeffs = c["representative"]
        cochain = Cochain.zero(1, rho)
        for a, g in zip(coeffs, H1.representatives):
            if a:
                cochain = cochain + g.scale(a)
        c["representative"] = cochain
    return result
