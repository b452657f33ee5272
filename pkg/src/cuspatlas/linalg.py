"""Exact integer linear algebra: determinants and saturated kernels."""

from __future__ import annotations

from typing import Sequence


def int_det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def int_kernel_basis(rows: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    """Z-basis of {x in Z^n : row . x == 0 for every row}.

    Unimodular column reduction, so the returned vectors span the full
    (saturated) kernel lattice and Gram determinants computed from them
    do not depend on basis choices.
    """
    a = [list(r) for r in rows]
    if any(len(r) != n for r in a):
        raise ValueError("row length mismatch")
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in u:
            row[i], row[j] = row[j], row[i]

    def col_addmul(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        for row in u:
            row[dst] += c * row[src]

    lead = 0
    for r in range(len(a)):
        piv = next((j for j in range(lead, n) if a[r][j] != 0), None)
        if piv is None:
            continue
        if piv != lead:
            col_swap(piv, lead)
        for j in range(lead + 1, n):
            while a[r][j] != 0:
                q = a[r][j] // a[r][lead]
                col_addmul(j, lead, -q)
                if a[r][j] != 0:
                    col_swap(lead, j)
        lead += 1
    return [[u[i][j] for i in range(n)] for j in range(lead, n)]
