"""Exact linear algebra over the rationals.

Matrices are stored sparsely as ``{(row, col): Fraction}`` with no zero
entries.  Coordinate vectors handed across the public API are plain tuples
of :class:`fractions.Fraction`.

Conventions are fixed so that everything downstream is reproducible:

* ``rref`` returns the unique reduced row echelon form, pivots ascending;
* ``nullspace_basis`` produces one vector per free column (ascending), with
  that free variable set to 1 and the other free variables to 0;
* ``solve`` sets every free variable to 0;
* ``complement_basis`` returns the non-pivot coordinates of the subspace.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction
Vector = tuple  # tuple[Fraction, ...]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not allowed in exact linear algebra")
    return Fraction(x)


class QMatrix:
    """Immutable sparse matrix with rational entries."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix shape")
        data = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
            v = _frac(v)
            if v:
                data[(i, j)] = v
        self.rows = rows
        self.cols = cols
        self._entries = data

    # -- constructors ---------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> QMatrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> QMatrix:
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = v
        return cls(len(rows), cols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> QMatrix:
        entries = {}
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError("column length does not match row count")
            for i, v in enumerate(col):
                if v:
                    entries[(i, j)] = v
        return cls(rows, len(columns), entries)

    # -- access ---------------------------------------------------------
    @property
    def entries(self) -> dict:
        return dict(self._entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key) -> Fraction:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(key)
        return self._entries.get((i, j), Fraction(0))

    def nnz(self) -> int:
        return len(self._entries)

    def is_zero(self) -> bool:
        return not self._entries

    def row_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.rows)]
        for (i, j), v in self._entries.items():
            out[i][j] = v
        return out

    def column(self, j: int) -> Vector:
        return tuple(self._entries.get((i, j), Fraction(0)) for i in range(self.rows))

    def row(self, i: int) -> Vector:
        return tuple(self._entries.get((i, j), Fraction(0)) for j in range(self.cols))

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> QMatrix:
        return QMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self._entries.items()})

    # -- arithmetic -----------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self._entries.items())))

    def __add__(self, other: QMatrix) -> QMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out.get(k, 0) + v
        return QMatrix(self.rows, self.cols, out)

    def __neg__(self) -> QMatrix:
        return QMatrix(self.rows, self.cols, {k: -v for k, v in self._entries.items()})

    def __sub__(self, other: QMatrix) -> QMatrix:
        return self + (-other)

    def scale(self, c) -> QMatrix:
        c = _frac(c)
        return QMatrix(self.rows, self.cols, {k: c * v for k, v in self._entries.items()})

    def __matmul__(self, other: QMatrix) -> QMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        right = other.row_dicts()
        out: dict = {}
        for (i, k), a in self._entries.items():
            for j, b in right[k].items():
                out[(i, j)] = out.get((i, j), 0) + a * b
        return QMatrix(self.rows, other.cols, out)

    def apply(self, vec: Sequence) -> Vector:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        out = [Fraction(0)] * self.rows
        for (i, j), a in self._entries.items():
            if vec[j]:
                out[i] += a * vec[j]
        return tuple(out)

    def __pow__(self, k: int) -> QMatrix:
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        result = QMatrix.identity(self.rows)
        for _ in range(k):
            result = result @ self
        return result

    def __repr__(self):
        return f"QMatrix({self.rows}x{self.cols}, {self.to_rows()})"


class EchelonBasis:
    """Incrementally maintained fully reduced echelon basis of a subspace.

    Rows are sparse dicts keyed by column, each normalised to 1 at its pivot
    with zeros in every other pivot column.  The basis is unique for the
    spanned subspace, so it doubles as a canonical form.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: dict[int, dict] = {}  # pivot column -> row

    def __len__(self):
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def reduce(self, vec) -> dict:
        """Remainder of ``vec`` after clearing every pivot column."""
        v = _as_sparse(vec)
        for p, row in self._rows.items():
            c = v.get(p)
            if c:
                for j, a in row.items():
                    x = v.get(j, 0) - c * a
                    if x:
                        v[j] = x
                    else:
                        v.pop(j, None)
        return v

    def contains(self, vec) -> bool:
        return not self.reduce(vec)

    def add(self, vec) -> bool:
        """Insert ``vec``; return True when it enlarged the span."""
        v = self.reduce(vec)
        if not v:
            return False
        p = min(v)
        inv = 1 / v[p]
        v = {j: a * inv for j, a in v.items()}
        for q, row in self._rows.items():
            c = row.get(p)
            if c:
                for j, a in v.items():
                    x = row.get(j, 0) - c * a
                    if x:
                        row[j] = x
                    else:
                        row.pop(j, None)
        self._rows[p] = v
        return True

    def coordinates(self, vec) -> Vector | None:
        """Coefficients of ``vec`` on the rows (pivot order), or None if outside."""
        v = _as_sparse(vec)
        if self.reduce(v):
            return None
        return tuple(v.get(p, Fraction(0)) for p in self.pivots)

    def rows(self) -> list[Vector]:
        return [_as_dense(self._rows[p], self.dim) for p in self.pivots]


def _as_sparse(vec) -> dict:
    if isinstance(vec, dict):
        return {j: _frac(a) for j, a in vec.items() if a}
    return {j: _frac(a) for j, a in enumerate(vec) if a}


def _as_dense(row: dict, dim: int) -> Vector:
    out = [Fraction(0)] * dim
    for j, a in row.items():
        out[j] = a
    return tuple(out)


def rref(m: QMatrix) -> tuple[QMatrix, list[int]]:
    eb = EchelonBasis(m.cols)
    for row in m.row_dicts():
        if row:
            eb.add(row)
    pivots = eb.pivots
    entries = {}
    for i, p in enumerate(pivots):
        for j, a in eb._rows[p].items():
            entries[(i, j)] = a
    return QMatrix(m.rows, m.cols, entries), pivots


def rank(m: QMatrix) -> int:
    return len(rref(m)[1])


def nullspace_basis(m: QMatrix) -> list[Vector]:
    r, pivots = rref(m)
    pivot_set = set(pivots)
    rows = r.row_dicts()
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            a = rows[i].get(f)
            if a:
                v[p] = -a
        basis.append(tuple(v))
    return basis


def solve(m: QMatrix, b: Sequence) -> Vector | None:
    if len(b) != m.rows:
        raise ValueError("right-hand side length does not match row count")
    # rref of the augmented matrix [m | b]
    aug = m.row_dicts()
    for i, bi in enumerate(b):
        bi = _frac(bi)
        if bi:
            aug[i][m.cols] = bi
    eb = EchelonBasis(m.cols + 1)
    for row in aug:
        if row:
            eb.add(row)
    if m.cols in eb._rows:
        return None
    x = [Fraction(0)] * m.cols
    for p, row in eb._rows.items():
        x[p] = row.get(m.cols, Fraction(0))
    return tuple(x)


def complement_basis(subspace: Iterable[Sequence], ambient_dim: int) -> list[int]:
    eb = EchelonBasis(ambient_dim)
    for v in subspace:
        if len(v) != ambient_dim:
            raise ValueError("vector length does not match ambient dimension")
        eb.add(v)
    pivots = set(eb.pivots)
    return [j for j in range(ambient_dim) if j not in pivots]


def span_rank(vectors: Iterable[Sequence], dim: int) -> int:
    eb = EchelonBasis(dim)
    for v in vectors:
        eb.add(v)
    return len(eb)
