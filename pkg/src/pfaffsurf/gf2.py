"""Dense linear algebra over GF(2) and exact integer determinants.

GF(2) rows are packed into Python ints: bit ``j`` of a row is column ``j``.
Bit-vectors passed in and out use the same convention (bit ``i`` is
coordinate ``i``); ``to_bits``/``from_bits`` convert to explicit 0/1 lists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import Inconsistent, NotSquare


def from_bits(bits: Iterable[int]) -> int:
    value = 0
    for i, b in enumerate(bits):
        if b & 1:
            value |= 1 << i
    return value


def to_bits(value: int, n: int) -> list[int]:
    return [(value >> i) & 1 for i in range(n)]


def parity(value: int) -> int:
    return bin(value).count("1") & 1


@dataclass(frozen=True)
class Gf2Matrix:
    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.nrows:
            raise ValueError("row count does not match nrows")
        mask = (1 << self.ncols) - 1
        if any(r & ~mask for r in self.rows):
            raise ValueError("row has bits beyond ncols")

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "Gf2Matrix":
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(len(rows), ncols, tuple(from_bits(r) for r in rows))

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> "Gf2Matrix":
        rows = [0] * nrows
        for j, col in enumerate(columns):
            for i in range(nrows):
                if (col >> i) & 1:
                    rows[i] |= 1 << j
        return cls(nrows, len(columns), tuple(rows))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Gf2Matrix":
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    def to_lists(self) -> list[list[int]]:
        return [to_bits(r, self.ncols) for r in self.rows]

    def columns(self) -> list[int]:
        """Columns packed as ints over the row index."""
        cols = [0] * self.ncols
        for i, row in enumerate(self.rows):
            j = 0
            while row:
                if row & 1:
                    cols[j] |= 1 << i
                row >>= 1
                j += 1
        return cols

    def transpose(self) -> "Gf2Matrix":
        return Gf2Matrix(self.ncols, self.nrows, tuple(self.columns()))

    def get(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Gf2Matrix":
        picked = [[self.get(i, j) for j in cols] for i in rows]
        return Gf2Matrix.from_lists(picked, len(cols))

    def apply(self, x: int) -> int:
        """Matrix-vector product ``self @ x`` as a packed bit-vector."""
        out = 0
        for i, row in enumerate(self.rows):
            if parity(row & x):
                out |= 1 << i
        return out

    def dump(self) -> str:
        return "\n".join("".join(str(b) for b in row) for row in self.to_lists())


@dataclass(frozen=True)
class Echelon:
    """Reduced row echelon form: ``rows[k]`` has its leading one at ``pivots[k]``."""

    rows: tuple[int, ...]
    pivots: tuple[int, ...]
    rhs: int = 0

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rref(m: Gf2Matrix, rhs: int = 0) -> Echelon:
    """Gauss-Jordan elimination; ``rhs`` is carried along as an extra column.

    Pivots are taken column by column, the first nonzero row at or below the
    current position is swapped upward.
    """
    work = list(m.rows)
    b = [(rhs >> i) & 1 for i in range(m.nrows)]
    pivots: list[int] = []
    top = 0
    for col in range(m.ncols):
        if top == m.nrows:
            break
        bit = 1 << col
        pivot = next((r for r in range(top, m.nrows) if work[r] & bit), None)
        if pivot is None:
            continue
        work[top], work[pivot] = work[pivot], work[top]
        b[top], b[pivot] = b[pivot], b[top]
        for r in range(m.nrows):
            if r != top and work[r] & bit:
                work[r] ^= work[top]
                b[r] ^= b[top]
        pivots.append(col)
        top += 1
    return Echelon(tuple(work), tuple(pivots), from_bits(b))


def rank_gf2(m: Gf2Matrix) -> int:
    return rref(m).rank


def nullspace(m: Gf2Matrix) -> list[int]:
    """Basis of ``ker(m)``, one vector per free column in increasing order."""
    ech = rref(m)
    pivot_set = set(ech.pivots)
    basis = []
    for free in range(m.ncols):
        if free in pivot_set:
            continue
        vec = 1 << free
        for row, col in zip(ech.rows, ech.pivots):
            if (row >> free) & 1:
                vec |= 1 << col
        basis.append(vec)
    return basis


@dataclass(frozen=True)
class Solution:
    """Affine solution set ``particular + span(nullspace_basis)``."""

    particular: int
    nullspace_basis: tuple[int, ...]
    nvars: int

    @property
    def dimension(self) -> int:
        return len(self.nullspace_basis)

    def combine(self, coefficients: int) -> int:
        """Solution selected by the coefficient bit-vector over the basis."""
        x = self.particular
        for k, vec in enumerate(self.nullspace_basis):
            if (coefficients >> k) & 1:
                x ^= vec
        return x


def solve_affine(m: Gf2Matrix, rhs: int) -> Solution:
    """Solve ``m x = rhs`` over GF(2); raises ``Inconsistent`` when unsolvable."""
    if rhs >> m.nrows:
        raise ValueError("rhs has bits beyond nrows")
    ech = rref(m, rhs)
    for i in range(ech.rank, m.nrows):
        if (ech.rhs >> i) & 1:
            raise Inconsistent(f"row {i} reduces to 0 = 1")
    particular = 0
    for k, col in enumerate(ech.pivots):
        if (ech.rhs >> k) & 1:
            particular |= 1 << col
    return Solution(particular, tuple(nullspace(m)), m.ncols)


def independent_rows(m: Gf2Matrix) -> list[int]:
    """Indices of the rows kept by a greedy scan: each is independent of those before it."""
    basis: dict[int, int] = {}
    kept = []
    for i, row in enumerate(m.rows):
        x = row
        while x:
            lead = x.bit_length() - 1
            if lead not in basis:
                basis[lead] = x
                kept.append(i)
                break
            x ^= basis[lead]
    return kept


# -- exact integer matrices -----------------------------------------------

IntMatrix = tuple[tuple[int, ...], ...]


def int_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def det_int(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise NotSquare(f"matrix is not square ({n} rows)")
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank_rational(m: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by fraction-free elimination."""
    a = [list(row) for row in m]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, nrows):
            factor = a[r][col]
            if factor:
                row = [p * x - factor * y for x, y in zip(a[r], a[rank])]
                g = math.gcd(*row)
                a[r] = [x // g for x in row] if g > 1 else row
        rank += 1
    return rank


def dump_int(m: Sequence[Sequence[int]]) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in m)
