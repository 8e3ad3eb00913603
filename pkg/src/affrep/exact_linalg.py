"""Exact rational sparse linear algebra.

Scalars are :class:`fractions.Fraction`.  Vectors are sparse dicts
``{index: Fraction}`` with no stored zeros; dense sequences are accepted
wherever a vector is expected.  Row reduction is done fraction-free on
primitive integer rows, which keeps coefficient growth under control and
never rounds.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "SparseMatrix",
    "Subspace",
    "Echelon",
    "parse_rational",
    "format_rational",
    "as_vector",
    "dense",
    "rank",
    "kernel_basis",
    "image_basis",
    "quotient_dim",
    "solve",
    "in_span",
    "complete_basis",
]


def parse_rational(text) -> Fraction:
    """Parse ``"num/den"`` (or an int) into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(str(text))


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_vector(v) -> dict:
    """Normalize a dense sequence or sparse mapping into a sparse dict."""
    if isinstance(v, Mapping):
        return {int(k): Fraction(x) for k, x in v.items() if x != 0}
    return {i: Fraction(x) for i, x in enumerate(v) if x != 0}


def dense(v, n: int) -> list:
    out = [Fraction(0)] * n
    for i, x in as_vector(v).items():
        out[i] = x
    return out


def _axpy(a, x: Mapping, y: dict) -> None:
    """y += a*x in place, dropping cancelled entries."""
    for k, v in x.items():
        s = y.get(k, 0) + a * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)


class SparseMatrix:
    """An immutable ``rows x cols`` matrix over Q stored as ``{(r, c): q}``."""

    __slots__ = ("rows", "cols", "_entries", "_by_col")

    def __init__(self, rows: int, cols: int, entries: Mapping | None = None):
        self.rows = int(rows)
        self.cols = int(cols)
        clean = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            v = Fraction(v)
            if v:
                clean[(int(r), int(c))] = v
        self._entries = clean
        self._by_col = None

    # construction -----------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None):
        nrows = len(rows)
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        ent = {}
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                if x:
                    ent[(i, j)] = x
        return cls(nrows, ncols, ent)

    @classmethod
    def from_columns(cls, columns: Sequence, rows: int):
        ent = {}
        for j, col in enumerate(columns):
            for i, x in as_vector(col).items():
                ent[(i, j)] = x
        return cls(rows, len(columns), ent)

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls(rows, cols)

    @classmethod
    def diagonal(cls, values: Sequence):
        n = len(values)
        return cls(n, n, {(i, i): v for i, v in enumerate(values)})

    # access -----------------------------------------------------------
    @property
    def entries(self) -> dict:
        return dict(self._entries)

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def __getitem__(self, rc) -> Fraction:
        return self._entries.get(rc, Fraction(0))

    def items(self):
        return self._entries.items()

    def nnz(self) -> int:
        return len(self._entries)

    def _columns(self) -> dict:
        if self._by_col is None:
            by = {}
            for (r, c), v in self._entries.items():
                by.setdefault(c, {})[r] = v
            self._by_col = by
        return self._by_col

    def column(self, j: int) -> dict:
        return dict(self._columns().get(j, {}))

    def row_dicts(self) -> list:
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out

    def to_dense(self) -> list:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out

    def triplets(self) -> list:
        """Serializable ``[row, col, "num/den"]`` list in row-major order."""
        return [[r, c, format_rational(v)] for (r, c), v in sorted(self._entries.items())]

    @classmethod
    def from_triplets(cls, rows: int, cols: int, triplets):
        return cls(rows, cols, {(int(r), int(c)): parse_rational(v) for r, c, v in triplets})

    def is_zero(self) -> bool:
        return not self._entries

    def is_diagonal(self) -> bool:
        return all(r == c for r, c in self._entries)

    # arithmetic -------------------------------------------------------
    def apply(self, v) -> dict:
        """Matrix-vector product; returns a sparse dict."""
        out = {}
        cols = self._columns()
        for j, x in as_vector(v).items():
            col = cols.get(j)
            if col:
                _axpy(x, col, out)
        return out

    def __matmul__(self, other):
        if not isinstance(other, SparseMatrix):
            return self.apply(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ent = {}
        cols = self._columns()
        for (k, j), b in other._entries.items():
            col = cols.get(k)
            if not col:
                continue
            for i, a in col.items():
                s = ent.get((i, j), 0) + a * b
                if s:
                    ent[(i, j)] = s
                else:
                    ent.pop((i, j), None)
        return SparseMatrix(self.rows, other.cols, ent)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        ent = dict(self._entries)
        _axpy(1, other._entries, ent)
        return SparseMatrix(self.rows, self.cols, ent)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        ent = dict(self._entries)
        _axpy(-1, other._entries, ent)
        return SparseMatrix(self.rows, self.cols, ent)

    def __neg__(self):
        return SparseMatrix(self.rows, self.cols, {k: -v for k, v in self._entries.items()})

    def scale(self, a):
        a = Fraction(a)
        return SparseMatrix(self.rows, self.cols, {k: a * v for k, v in self._entries.items()})

    def __mul__(self, a):
        return self.scale(a)

    __rmul__ = __mul__

    def transpose(self):
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self._entries.items()})

    @property
    def T(self):
        return self.transpose()

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self._entries.items())))

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self._entries)})"

    @staticmethod
    def hstack(blocks: Sequence["SparseMatrix"]):
        rows = blocks[0].rows
        ent, off = {}, 0
        for b in blocks:
            if b.rows != rows:
                raise ValueError("row mismatch in hstack")
            for (r, c), v in b._entries.items():
                ent[(r, c + off)] = v
            off += b.cols
        return SparseMatrix(rows, off, ent)

    @staticmethod
    def vstack(blocks: Sequence["SparseMatrix"]):
        cols = blocks[0].cols
        ent, off = {}, 0
        for b in blocks:
            if b.cols != cols:
                raise ValueError("column mismatch in vstack")
            for (r, c), v in b._entries.items():
                ent[(r + off, c)] = v
            off += b.rows
        return SparseMatrix(off, cols, ent)

    @staticmethod
    def block_diag(blocks: Sequence["SparseMatrix"]):
        ent, ro, co = {}, 0, 0
        for b in blocks:
            for (r, c), v in b._entries.items():
                ent[(r + ro, c + co)] = v
            ro += b.rows
            co += b.cols
        return SparseMatrix(ro, co, ent)


class Subspace:
    """A subspace of Q^n given by a linearly independent spanning list."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: Iterable = (), check: bool = True):
        self.ambient_dim = int(ambient_dim)
        self.basis = tuple(as_vector(b) for b in basis)
        for b in self.basis:
            if b and max(b) >= self.ambient_dim:
                raise IndexError("basis vector outside ambient space")
        if check and rank(self.basis, self.ambient_dim) != len(self.basis):
            raise ValueError("basis vectors are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def contains(self, v) -> bool:
        return in_span(self.basis, v, self.ambient_dim)

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            return False
        ech = Echelon(self.ambient_dim)
        for b in self.basis:
            ech.add(b)
        return all(ech.reduce(v)[0] == {} for v in other.basis)

    def as_matrix(self) -> SparseMatrix:
        """Basis vectors as the columns of an ``ambient x dim`` matrix."""
        return SparseMatrix.from_columns(self.basis, self.ambient_dim)

    def coordinates(self, v) -> list | None:
        """Coordinates of ``v`` in this basis, or None if ``v`` is outside."""
        return solve(self.as_matrix(), v)

    def __repr__(self):
        return f"Subspace(dim={self.dim} in Q^{self.ambient_dim})"


def _integer_row(v: Mapping) -> dict:
    """Scale a rational sparse row to a primitive integer row."""
    if not v:
        return {}
    den = 1
    for x in v.values():
        den = lcm(den, Fraction(x).denominator)
    row = {k: int(Fraction(x) * den) for k, x in v.items() if x}
    return _primitive(row)


def _primitive(row: dict) -> dict:
    g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g not in (0, 1):
        row = {k: x // g for k, x in row.items()}
    return row


class Echelon:
    """Incremental reduced row echelon form over Z (fraction-free).

    Each stored row is primitive with a positive leading entry and is
    zero in every other pivot column.  The pivot of a row is its smallest
    column index, so the final form depends only on the row space.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict = {}  # pivot column -> integer row

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v) -> tuple:
        """Reduce ``v`` against the pivots; returns (residual, multiplier).

        The residual equals ``multiplier * v`` minus a combination of the
        stored rows; it is an integer row with no entries in pivot columns.
        """
        row = _integer_row(as_vector(v))
        if not row:
            return {}, 1
        # multiplier tracking only matters for callers needing v's scale
        mult = Fraction(1)
        first = as_vector(v)
        if first:
            k0 = next(iter(row))
            mult = Fraction(row[k0]) / first[k0]
        hits = sorted(c for c in row if c in self.pivots)
        for c in hits:
            a = row.get(c)
            if not a:
                continue
            prow = self.pivots[c]
            b = prow[c]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            mult *= fa
            new = {k: x * fa for k, x in row.items()}
            for k, x in prow.items():
                s = new.get(k, 0) - fb * x
                if s:
                    new[k] = s
                else:
                    new.pop(k, None)
            row = new
        if row:
            g = 0
            for x in row.values():
                g = gcd(g, x)
            if g > 1:
                row = {k: x // g for k, x in row.items()}
                mult /= g
        return row, mult

    def add(self, v) -> bool:
        """Insert a row; returns True if the rank increased."""
        row, _ = self.reduce(v)
        if not row:
            return False
        row = _primitive(row)
        c0 = min(row)
        lead = row[c0]
        for c, prow in list(self.pivots.items()):
            a = prow.get(c0)
            if not a:
                continue
            g = gcd(a, lead)
            fa, fb = lead // g, a // g
            new = {k: x * fa for k, x in prow.items()}
            for k, x in row.items():
                s = new.get(k, 0) - fb * x
                if s:
                    new[k] = s
                else:
                    new.pop(k, None)
            self.pivots[c] = _primitive(new)
        self.pivots[c0] = row
        return True

    def pivot_columns(self) -> list:
        return sorted(self.pivots)

    def kernel(self) -> list:
        """Basis of the null space of the stored rows, one vector per free column."""
        piv = self.pivots
        free = [j for j in range(self.ncols) if j not in piv]
        # column index -> [(pivot col, coefficient)] for fast assembly
        hits = {}
        for c, row in piv.items():
            for k, x in row.items():
                if k != c:
                    hits.setdefault(k, []).append((c, x))
        basis = []
        for f in free:
            vec = {f: Fraction(1)}
            for c, x in hits.get(f, ()):
                vec[c] = Fraction(-x, piv[c][c])
            basis.append(vec)
        return basis


def _echelon_of_rows(rows: Iterable, ncols: int) -> Echelon:
    rows = [r for r in (as_vector(r) for r in rows) if r]
    # sparsest rows first; the reduced form does not depend on this order
    rows.sort(key=len)
    ech = Echelon(ncols)
    for r in rows:
        ech.add(r)
    return ech


def rank(vectors_or_matrix, ncols: int | None = None) -> int:
    if isinstance(vectors_or_matrix, SparseMatrix):
        A = vectors_or_matrix
        return _echelon_of_rows(A.row_dicts(), A.cols).rank
    vecs = list(vectors_or_matrix)
    if ncols is None:
        ncols = 1 + max((max(as_vector(v)) for v in vecs if as_vector(v)), default=-1)
    return _echelon_of_rows(vecs, ncols).rank


def kernel_basis(A: SparseMatrix) -> Subspace:
    """Basis of ``{v : A v = 0}``; dimension ``cols - rank(A)``."""
    ech = _echelon_of_rows(A.row_dicts(), A.cols)
    return Subspace(A.cols, ech.kernel(), check=False)


def image_basis(A: SparseMatrix) -> Subspace:
    """Basis of the column space made of the first independent columns of A."""
    ech = _echelon_of_rows(A.row_dicts(), A.cols)
    return Subspace(A.rows, [A.column(j) for j in ech.pivot_columns()], check=False)


def quotient_dim(W: Subspace, U: Subspace) -> int:
    """``dim W - dim U`` after checking ``U`` is contained in ``W``."""
    if W.ambient_dim != U.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    if not W.contains_subspace(U):
        raise ValueError("U is not contained in W")
    return W.dim - U.dim


def solve(A: SparseMatrix, b) -> list | None:
    """Some ``x`` with ``A x = b`` (free variables set to 0), or None."""
    b = as_vector(b)
    if b and max(b) >= A.rows:
        raise IndexError("right-hand side longer than the matrix")
    n = A.cols
    rows = A.row_dicts()
    for i, x in b.items():
        rows[i][n] = x
    ech = _echelon_of_rows(rows, n + 1)
    if n in ech.pivots:
        return None
    x = [Fraction(0)] * n
    for c, row in ech.pivots.items():
        x[c] = Fraction(row.get(n, 0), row[c])
    return x


def in_span(vectors: Sequence, v, ncols: int) -> bool:
    ech = _echelon_of_rows(vectors, ncols)
    return ech.reduce(v)[0] == {}


def complete_basis(base: Sequence, candidates: Sequence, ncols: int) -> list:
    """Residuals of the candidates that extend ``span(base)``.

    Each candidate is reduced against ``base`` and the earlier accepted
    residuals; nonzero residuals are kept.  Residuals lie in
    ``span(base + candidates)``.
    """
    ech = Echelon(ncols)
    for b in base:
        ech.add(b)
    out = []
    for c in candidates:
        res, _ = ech.reduce(c)
        if res:
            ech.add(res)
            out.append({k: Fraction(x) for k, x in _primitive(res).items()})
    return out
