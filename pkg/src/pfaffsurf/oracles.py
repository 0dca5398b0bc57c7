"""Slow reference computations used to cross-check the fast paths.

Nothing here shares code with the routines it checks: ranks use unpacked
booleans or column-subset search, determinants use cofactor expansion and
matching counts use Ryser's permanent formula.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Sequence


def naive_rank_gf2(rows: Sequence[Sequence[int]]) -> int:
    """Rank over GF(2) by elimination on lists of booleans."""
    a = [[bool(x & 1) for x in row] for row in rows]
    if not a:
        return 0
    rank = 0
    for col in range(len(a[0])):
        pivot = None
        for r in range(rank, len(a)):
            if a[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        for r in range(len(a)):
            if r != rank and a[r][col]:
                a[r] = [x != y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def subset_rank_gf2(rows: Sequence[Sequence[int]]) -> int:
    """Largest number of columns with no nonempty subset summing to zero mod 2."""
    if not rows:
        return 0
    ncols = len(rows[0])
    columns = [tuple(row[j] & 1 for row in rows) for j in range(ncols)]

    def independent(cols: tuple[int, ...]) -> bool:
        for size in range(1, len(cols) + 1):
            for sub in combinations(cols, size):
                if not any(sum(columns[j][i] for j in sub) % 2 for i in range(len(rows))):
                    return False
        return True

    for size in range(ncols, 0, -1):
        if any(independent(c) for c in combinations(range(ncols), size)):
            return size
    return 0


def cofactor_det(m: Sequence[Sequence[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = [row[:j] + row[j + 1:] for row in (list(r) for r in m[1:])]
            total += (-1) ** j * m[0][j] * cofactor_det(minor)
    return total


def ryser_permanent(m: Sequence[Sequence[int]]) -> int:
    """Permanent of a square matrix via Ryser's inclusion-exclusion formula."""
    n = len(m)
    if n == 0:
        return 1
    total = 0
    for mask in range(1, 1 << n):
        cols = [j for j in range(n) if (mask >> j) & 1]
        term = 1
        for row in m:
            term *= sum(row[j] for j in cols)
            if term == 0:
                break
        total += (-1) ** len(cols) * term
    return (-1) ** n * total


def gf2_solutions(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[tuple[int, ...]]:
    """Every solution of a small GF(2) system by exhaustive search."""
    ncols = len(rows[0]) if rows else 0
    return [
        x
        for x in product((0, 1), repeat=ncols)
        if all(sum(a * b for a, b in zip(row, x)) % 2 == r for row, r in zip(rows, rhs))
    ]
