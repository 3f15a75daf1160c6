"""Dense linear algebra over QQ with ``fractions.Fraction`` entries.

Matrices are lists of rows.  A matrix with zero rows still needs a column
count, so most functions take the shape explicitly where it can be empty.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]
Vector = list[Fraction]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def as_matrix(rows: Sequence[Sequence], cols: int | None = None) -> Matrix:
    m = [[Fraction(x) for x in row] for row in rows]
    if cols is not None and any(len(r) != cols for r in m):
        raise ValueError("ragged matrix")
    return m


def shape(m: Matrix, cols: int) -> tuple[int, int]:
    return len(m), cols


def matmul(a: Matrix, b: Matrix, inner: int, cols: int) -> Matrix:
    """(rows(a) x inner) @ (inner x cols)."""
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        for k in range(inner):
            x = row[k]
            if x:
                bk = b[k]
                oi = out[i]
                for j in range(cols):
                    if bk[j]:
                        oi[j] += x * bk[j]
    return out


def matvec(a: Matrix, v: Vector) -> Vector:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def is_zero(m: Matrix) -> bool:
    return all(not x for row in m for x in row)


def transpose(m: Matrix, cols: int) -> Matrix:
    return [[m[i][j] for i in range(len(m))] for j in range(cols)]


def rref(m: Matrix, cols: int) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [list(r) for r in m]
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        piv = next((i for i in range(row, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        p = a[row][col]
        if p != 1:
            a[row] = [x / p if x else x for x in a[row]]
        support = [j for j in range(col, len(a[row])) if a[row][j]]
        prow = a[row]
        for i in range(len(a)):
            if i != row and a[i][col]:
                f = a[i][col]
                ai = a[i]
                for j in support:
                    ai[j] -= f * prow[j]
        pivots.append(col)
        row += 1
        if row == len(a):
            break
    return a[:row], pivots


def rank(m: Matrix, cols: int) -> int:
    return len(rref(m, cols)[1])


def nullspace(m: Matrix, cols: int) -> list[Vector]:
    """Basis of {v : m v = 0} as a list of vectors of length ``cols``."""
    r, pivots = rref(m, cols)
    free = [j for j in range(cols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -r[i][f]
        basis.append(v)
    return basis


def columns(m: Matrix, cols: int) -> list[Vector]:
    return [[row[j] for row in m] for j in range(cols)]


def from_columns(vecs: Sequence[Vector], rows: int) -> Matrix:
    return [[v[i] for v in vecs] for i in range(rows)]


def independent_columns(vecs: Sequence[Vector], rows: int) -> list[int]:
    """Indices of a maximal independent subset, chosen greedily left to right."""
    if not vecs:
        return []
    return rref(from_columns(vecs, rows), len(vecs))[1]


def solve(m: Matrix, b: Vector, cols: int) -> Vector | None:
    """One solution of m x = b, or None."""
    aug = [list(row) + [b[i]] for i, row in enumerate(m)]
    r, pivots = rref(aug, cols + 1)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for i, p in enumerate(pivots):
        x[p] = r[i][cols]
    return x
