"""Exact linear algebra over Q on lists of lists of Fractions."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _copy(rows):
    return [[Fraction(x) for x in row] for row in rows]


def row_reduce(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form. Returns (rref rows, pivot columns)."""
    a = _copy(rows)
    if not a:
        return [], []
    n = ncols if ncols is not None else len(a[0])
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                ri = a[r]
                a[i] = [x - f * y for x, y in zip(a[i], ri)]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows or not rows[0]:
        return 0
    return len(row_reduce(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list:
    """Basis of {v : rows @ v = 0}, one vector per free column."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = row_reduce(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve_unique(rows: Sequence[Sequence], rhs: Sequence) -> list | None:
    """Solve rows @ x = rhs; None unless the solution exists and is unique."""
    if not rows:
        return None
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = row_reduce(aug, n + 1)
    if n in pivots or len(pivots) < n:
        return None
    return [red[i][n] for i in range(n)]


def solve_particular(rows: Sequence[Sequence], rhs: Sequence) -> list | None:
    """Some solution of rows @ x = rhs (free variables set to 0), or None."""
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = row_reduce(aug, n + 1)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(red, pivots):
        x[pc] = row[n]
    return x


def in_span(vectors: Sequence[Sequence], target: Sequence) -> bool:
    if not any(any(x for x in v) for v in vectors):
        return not any(target)
    return rank(list(vectors) + [list(target)]) == rank(vectors)


def matmul(a, b):
    bt = list(zip(*b)) if b else []
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]
