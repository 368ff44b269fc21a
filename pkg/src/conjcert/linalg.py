"""Dense exact linear algebra over the scalar fields in :mod:`conjcert.fields`.

Matrices and vectors are immutable value types with structural equality.
Elimination uses the first nonzero pivot in column order; with exact
scalars there is no need for magnitude-based pivoting.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Optional

from .errors import DimensionMismatch, SingularMatrixError, UsageError
from .fields import Field

__all__ = [
    "Matrix",
    "Vector",
    "solve_linear",
    "kernel_basis",
    "has_fixed_point",
    "matrix_power",
    "matrix_inverse",
    "matrix_det",
    "column_space_basis",
    "kron",
]


@dataclass(frozen=True)
class Vector:
    field: Field = dc_field(repr=False)
    entries: tuple

    @staticmethod
    def of(field: Field, values: Iterable) -> "Vector":
        return Vector(field, tuple(field.coerce(v) for v in values))

    @staticmethod
    def zero(field: Field, dim: int) -> "Vector":
        z = field.zero()
        return Vector(field, (z,) * dim)

    @staticmethod
    def unit(field: Field, dim: int, i: int) -> "Vector":
        z, o = field.zero(), field.one()
        return Vector(field, tuple(o if j == i else z for j in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __add__(self, other: "Vector") -> "Vector":
        self._same_shape(other)
        return Vector(self.field, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Vector") -> "Vector":
        self._same_shape(other)
        return Vector(self.field, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Vector":
        return Vector(self.field, tuple(-a for a in self.entries))

    def scale(self, c) -> "Vector":
        c = self.field.coerce(c)
        return Vector(self.field, tuple(c * a for a in self.entries))

    def dot(self, other: "Vector"):
        self._same_shape(other)
        total = self.field.zero()
        for a, b in zip(self.entries, other.entries):
            total = total + a * b
        return total

    def is_zero(self) -> bool:
        return all(not a for a in self.entries)

    def _same_shape(self, other):
        if not isinstance(other, Vector) or other.dim != self.dim:
            raise DimensionMismatch(f"vector dims {self.dim} vs {getattr(other, 'dim', '?')}")

    def __repr__(self):
        return "Vector(" + ", ".join(str(e) for e in self.entries) + ")"


@dataclass(frozen=True)
class Matrix:
    field: Field = dc_field(repr=False)
    rows: int
    cols: int
    entries: tuple  # row-major

    @staticmethod
    def from_rows(field: Field, rows: Iterable[Iterable]) -> "Matrix":
        data = [tuple(field.coerce(v) for v in row) for row in rows]
        nrows = len(data)
        ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise DimensionMismatch("ragged rows")
        return Matrix(field, nrows, ncols, tuple(v for row in data for v in row))

    @staticmethod
    def identity_of(field: Field, n: int) -> "Matrix":
        z, o = field.zero(), field.one()
        return Matrix(field, n, n, tuple(o if i == j else z for i in range(n) for j in range(n)))

    @staticmethod
    def zero_of(field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero()
        return Matrix(field, rows, cols, (z,) * (rows * cols))

    @staticmethod
    def from_columns(field: Field, columns: Iterable[Vector]) -> "Matrix":
        cols = list(columns)
        if not cols:
            return Matrix(field, 0, 0, ())
        n = cols[0].dim
        if any(c.dim != n for c in cols):
            raise DimensionMismatch("ragged columns")
        return Matrix(field, n, len(cols), tuple(cols[j][i] for i in range(n) for j in range(len(cols))))

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch("entry count does not match shape")

    def __getitem__(self, ij) -> object:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return Vector(self.field, tuple(self.entries[i * self.cols + j] for i in range(self.rows)))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def identity(self) -> "Matrix":
        """Identity of the same shape; lets matrices act as group elements."""
        self._require_square("identity")
        return Matrix.identity_of(self.field, self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.field, self.rows, self.cols,
                      tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.field, self.rows, self.cols,
                      tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> "Matrix":
        c = self.field.coerce(c)
        return Matrix(self.field, self.rows, self.cols, tuple(c * a for a in self.entries))

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionMismatch(f"{self.rows}x{self.cols} times {other.rows}x{other.cols}")
            n, m, k = self.rows, other.cols, self.cols
            a, b = self.entries, other.entries
            out = []
            for i in range(n):
                arow = a[i * k : (i + 1) * k]
                for j in range(m):
                    total = self.field.zero()
                    for t in range(k):
                        total = total + arow[t] * b[t * m + j]
                    out.append(total)
            return Matrix(self.field, n, m, tuple(out))
        if isinstance(other, Vector):
            return self.apply(other)
        return NotImplemented

    def apply(self, v: Vector) -> Vector:
        if self.cols != v.dim:
            raise DimensionMismatch(f"{self.rows}x{self.cols} applied to dim {v.dim}")
        out = []
        for i in range(self.rows):
            total = self.field.zero()
            row = self.row(i)
            for t in range(self.cols):
                total = total + row[t] * v[t]
            out.append(total)
        return Vector(self.field, tuple(out))

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows,
                      tuple(self.entries[j * self.cols + i]
                            for i in range(self.cols) for j in range(self.rows)))

    def trace(self):
        self._require_square("trace")
        total = self.field.zero()
        for i in range(self.rows):
            total = total + self[i, i]
        return total

    def det(self):
        self._require_square("det")
        n = self.rows
        if n == 0:
            return self.field.one()
        rows = [list(self.row(i)) for i in range(n)]
        det = self.field.one()
        for col in range(n):
            pivot_row = None
            for r in range(col, n):
                if rows[r][col]:
                    pivot_row = r
                    break
            if pivot_row is None:
                return self.field.zero()
            if pivot_row != col:
                rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
                det = -det
            pivot = rows[col][col]
            det = det * pivot
            for r in range(col + 1, n):
                factor = rows[r][col] / pivot
                if factor:
                    rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
        return det

    def inverse(self) -> "Matrix":
        self._require_square("inverse")
        n = self.rows
        if n == 0:
            return self
        aug = [list(self.row(i)) + [self.field.one() if i == j else self.field.zero()
                                    for j in range(n)] for i in range(n)]
        row = 0
        for col in range(n):
            pivot_row = None
            for r in range(row, n):
                if aug[r][col]:
                    pivot_row = r
                    break
            if pivot_row is None:
                raise SingularMatrixError("matrix is singular")
            aug[row], aug[pivot_row] = aug[pivot_row], aug[row]
            pivot = aug[row][col]
            aug[row] = [x / pivot for x in aug[row]]
            for r in range(n):
                if r != row and aug[r][col]:
                    factor = aug[r][col]
                    aug[r] = [x - factor * y for x, y in zip(aug[r], aug[row])]
            row += 1
        return Matrix(self.field, n, n, tuple(aug[i][n + j] for i in range(n) for j in range(n)))

    def __pow__(self, k: int) -> "Matrix":
        self._require_square("power")
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity_of(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return self.is_square and self == Matrix.identity_of(self.field, self.rows)

    def _same_shape(self, other):
        if not isinstance(other, Matrix) or (other.rows, other.cols) != (self.rows, self.cols):
            raise DimensionMismatch("shape mismatch")

    def _require_square(self, what: str):
        if not self.is_square:
            raise UsageError(f"{what} requires a square matrix, got {self.rows}x{self.cols}")

    def __repr__(self):
        rows = [" ".join(str(self[i, j]) for j in range(self.cols)) for i in range(self.rows)]
        return "Matrix[" + "; ".join(rows) + "]"


def _echelon(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """In-place reduced row echelon form; returns (rows, pivot_columns)."""
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][col]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pivot = rows[r][col]
        rows[r] = [x / pivot for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def solve_linear(A: Matrix, b: Vector) -> Optional[Vector]:
    """A particular solution of A w = b, or None when inconsistent.

    Free variables are set to zero, so the result is deterministic."""
    if A.rows != b.dim:
        raise DimensionMismatch(f"{A.rows}x{A.cols} system with rhs dim {b.dim}")
    n = A.cols
    rows = [list(A.row(i)) + [b[i]] for i in range(A.rows)]
    rows, pivots = _echelon(rows, n)
    rank = len(pivots)
    for i in range(rank, A.rows):
        if rows[i][n]:
            return None
    sol = [A.field.zero()] * n
    for r, col in enumerate(pivots):
        sol[col] = rows[r][n]
    return Vector(A.field, tuple(sol))


def kernel_basis(A: Matrix) -> list[Vector]:
    """Exact basis of the null space; empty iff A is injective."""
    n = A.cols
    rows = [list(A.row(i)) for i in range(A.rows)]
    rows, pivots = _echelon(rows, n)
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        vec = [A.field.zero()] * n
        vec[free] = A.field.one()
        for r, col in enumerate(pivots):
            vec[col] = -rows[r][free]
        basis.append(Vector(A.field, tuple(vec)))
    return basis


def column_space_basis(A: Matrix) -> list[Vector]:
    """Basis of the column space: the columns at the pivot positions."""
    rows = [list(A.row(i)) for i in range(A.rows)]
    _, pivots = _echelon(rows, A.cols)
    return [A.column(j) for j in pivots]


def has_fixed_point(A: Matrix) -> bool:
    """Whether A fixes a nonzero vector, i.e. det(A - I) = 0."""
    A._require_square("has_fixed_point")
    return not (A - Matrix.identity_of(A.field, A.rows)).det()


def matrix_power(A: Matrix, k: int) -> Matrix:
    return A ** k


def matrix_inverse(A: Matrix) -> Matrix:
    return A.inverse()


def matrix_det(A: Matrix):
    return A.det()


def kron(A: Matrix, B: Matrix) -> Matrix:
    """Kronecker product, used to flatten matrix equations like gX = Yg."""
    if A.field != B.field:
        raise UsageError("kron over mixed fields")
    rows = A.rows * B.rows
    cols = A.cols * B.cols
    out = []
    for i in range(rows):
        ia, ib = divmod(i, B.rows)
        for j in range(cols):
            ja, jb = divmod(j, B.cols)
            out.append(A[ia, ja] * B[ib, jb])
    return Matrix(A.field, rows, cols, tuple(out))
