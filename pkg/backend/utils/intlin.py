"""Exact integer linear algebra.

Matrices hold Python ints only, so every computation here is exact and never
overflows. The Smith normal form routine follows the usual two-by-two
unimodular clearing scheme: clear the pivot column with row operations, clear
the pivot row with column operations, repeat until both are clear, then repair
the divisibility chain.
"""

import operator
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from core.errors import IntLinError


def _as_int(value) -> int:
    try:
        return operator.index(value)
    except TypeError:
        raise IntLinError(f"non-integer entry {value!r}")


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise IntLinError("negative matrix dimension")
        entries = tuple(_as_int(e) for e in self.entries)
        if len(entries) != self.rows * self.cols:
            raise IntLinError(
                f"expected {self.rows * self.cols} entries for a {self.rows}x{self.cols} matrix, got {len(entries)}"
            )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise IntLinError("ragged rows")
        return cls(len(rows), cols, tuple(e for r in rows for e in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntMatrix":
        columns = [list(c) for c in columns]
        if rows is None:
            rows = len(columns[0]) if columns else 0
        return cls.from_rows(columns, rows).transpose()

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: Optional[int] = None, cols: Optional[int] = None) -> "IntMatrix":
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        data = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            data[i][i] = v
        return cls.from_rows(data, cols)

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(index)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[List[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> List[Tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(self.columns(), self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise IntLinError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols = other.columns()
        data = [[sum(a * b for a, b in zip(self.row(i), c)) for c in cols] for i in range(self.rows)]
        return IntMatrix.from_rows(data, other.cols)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise IntLinError("hstack needs equal row counts")
        data = [list(self.row(i)) + list(other.row(i)) for i in range(self.rows)]
        return IntMatrix.from_rows(data, self.cols + other.cols)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise IntLinError("vstack needs equal column counts")
        return IntMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def select_columns(self, indices: Sequence[int]) -> "IntMatrix":
        return IntMatrix.from_columns([self.column(j) for j in indices], self.rows)

    def select_rows(self, indices: Sequence[int]) -> "IntMatrix":
        return IntMatrix.from_rows([self.row(i) for i in indices], self.cols)

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal_entries(self) -> Tuple[int, ...]:
        return tuple(self[i, i] for i in range(min(self.rows, self.cols)))


@dataclass(frozen=True)
class SmithDecomposition:
    U: IntMatrix
    V: IntMatrix
    D: IntMatrix

    @property
    def diagonal(self) -> Tuple[int, ...]:
        return self.D.diagonal_entries()

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


@dataclass(frozen=True)
class FGAbelianGroup:
    """Z^free_rank plus cyclic torsion, stored by invariant factors."""

    free_rank: int = 0
    torsion: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        torsion = tuple(_as_int(t) for t in self.torsion)
        if self.free_rank < 0:
            raise IntLinError("negative free rank")
        if any(t < 2 for t in torsion):
            raise IntLinError(f"torsion coefficients must be at least 2, got {torsion}")
        if any(b % a for a, b in zip(torsion, torsion[1:])):
            raise IntLinError(f"torsion coefficients {torsion} do not form a divisibility chain")
        object.__setattr__(self, "torsion", torsion)

    @classmethod
    def trivial(cls) -> "FGAbelianGroup":
        return cls(0, ())

    @classmethod
    def cyclic(cls, n: int) -> "FGAbelianGroup":
        n = abs(n)
        if n == 0:
            return cls(1, ())
        return cls(0, (n,) if n > 1 else ())

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> Optional[int]:
        if not self.is_finite:
            return None
        result = 1
        for t in self.torsion:
            result *= t
        return result

    @property
    def generator_count(self) -> int:
        return self.free_rank + len(self.torsion)

    def __str__(self) -> str:
        if self.is_trivial:
            return "0"
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z_{t}" for t in self.torsion)
        return " + ".join(parts)


def _exgcd(a: int, b: int) -> Tuple[int, int, int, int]:
    """Returns (x, y, u, v) with det [[x, y], [u, v]] = 1, x*a + y*b = gcd and u*a + v*b = 0.

    When a divides b the first row is (1, 0), so the pivot row is left untouched.
    """
    if a == 0 and b == 0:
        return 1, 0, 0, 1
    if a != 0 and b % a == 0:
        return 1, 0, -(b // a), 1
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    g = old_r
    return old_s, old_t, -b // g, a // g


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    m, n = A.rows, A.cols
    D = A.to_rows()
    U = IntMatrix.identity(m).to_rows()
    V = IntMatrix.identity(n).to_rows()

    def row_op(i, j, x, y, u, v):
        for M in (D, U):
            ri, rj = M[i], M[j]
            M[i] = [x * a + y * b for a, b in zip(ri, rj)]
            M[j] = [u * a + v * b for a, b in zip(ri, rj)]

    def col_op(i, j, x, y, u, v):
        for M in (D, V):
            for row in M:
                a, b = row[i], row[j]
                row[i] = x * a + y * b
                row[j] = u * a + v * b

    def swap_rows(i, j):
        for M in (D, U):
            M[i], M[j] = M[j], M[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] != 0 and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])

        while True:
            for i in range(t + 1, m):
                if D[i][t] != 0:
                    row_op(t, i, *_exgcd(D[t][t], D[i][t]))
            for j in range(t + 1, n):
                if D[t][j] != 0:
                    col_op(t, j, *_exgcd(D[t][t], D[t][j]))
            if any(D[i][t] != 0 for i in range(t + 1, m)):
                continue
            p = D[t][t]
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p != 0), None)
            if bad is None:
                break
            row_op(t, bad, 1, 1, 0, 1)

        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        t += 1

    return SmithDecomposition(
        U=IntMatrix.from_rows(U, m),
        V=IntMatrix.from_rows(V, n),
        D=IntMatrix.from_rows(D, n),
    )


def rank(A: IntMatrix) -> int:
    return smith_normal_form(A).rank


def determinant(A: IntMatrix) -> int:
    if A.rows != A.cols:
        raise IntLinError("determinant of a non-square matrix")
    n = A.rows
    if n == 0:
        return 1
    M = A.to_rows()
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def cokernel(A: IntMatrix) -> FGAbelianGroup:
    """Z^rows / image(A)."""
    diag = smith_normal_form(A).diagonal
    nonzero = [d for d in diag if d != 0]
    return FGAbelianGroup(A.rows - len(nonzero), tuple(d for d in nonzero if d > 1))


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a basis of the integer kernel of A."""
    snf = smith_normal_form(A)
    return snf.V.select_columns(range(snf.rank, A.cols))


def presentation_relations(target: FGAbelianGroup) -> IntMatrix:
    n = target.generator_count
    columns = []
    for k, t in enumerate(target.torsion):
        col = [0] * n
        col[target.free_rank + k] = t
        columns.append(col)
    return IntMatrix.from_columns(columns, n)


def is_surjective_onto(A: IntMatrix, target: FGAbelianGroup) -> bool:
    """True iff the columns of A, read in the standard presentation of target, generate it."""
    if A.rows != target.generator_count:
        raise IntLinError(
            f"matrix has {A.rows} rows but the presentation of {target} has {target.generator_count} generators"
        )
    return cokernel(A.hstack(presentation_relations(target))).is_trivial


def solve_integer(A: IntMatrix, b: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """An integer solution of A x = b, or None."""
    b = [_as_int(x) for x in b]
    if len(b) != A.rows:
        raise IntLinError("right-hand side length does not match the matrix")
    snf = smith_normal_form(A)
    c = [sum(u * x for u, x in zip(snf.U.row(i), b)) for i in range(A.rows)]
    diag = snf.diagonal
    y = [0] * A.cols
    for i in range(A.rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if c[i] != 0:
                return None
        elif c[i] % d != 0:
            return None
        else:
            y[i] = c[i] // d
    return tuple(sum(v * w for v, w in zip(snf.V.row(i), y)) for i in range(A.cols))


def hermite_rows(vectors: Sequence[Sequence[int]], width: int) -> Tuple[Tuple[int, ...], ...]:
    """Row Hermite normal form of the lattice spanned by vectors; zero rows dropped."""
    M = [[_as_int(e) for e in v] for v in vectors]
    if any(len(v) != width for v in M):
        raise IntLinError(f"lattice vectors must have length {width}")
    r = 0
    for c in range(width):
        pivot = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        for i in range(r + 1, len(M)):
            if M[i][c] != 0:
                x, y, u, v = _exgcd(M[r][c], M[i][c])
                top, low = M[r], M[i]
                M[r] = [x * a + y * b for a, b in zip(top, low)]
                M[i] = [u * a + v * b for a, b in zip(top, low)]
        if M[r][c] < 0:
            M[r] = [-a for a in M[r]]
        for i in range(r):
            q = M[i][c] // M[r][c]
            if q:
                M[i] = [a - q * b for a, b in zip(M[i], M[r])]
        r += 1
    return tuple(tuple(row) for row in M[:r])


def lattice_contains(basis: Sequence[Sequence[int]], vector: Sequence[int]) -> bool:
    width = len(vector)
    if not basis:
        return all(v == 0 for v in vector)
    return solve_integer(IntMatrix.from_rows(basis, width).transpose(), vector) is not None


def saturation(A: IntMatrix) -> IntMatrix:
    """Columns span the saturation of the column lattice of A."""
    annihilators = kernel_basis(A.transpose())
    return kernel_basis(annihilators.transpose())
