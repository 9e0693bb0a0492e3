"""Exact integer/rational linear algebra on small dense matrices."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence[int]]


def bareiss_det(m: Matrix) -> int:
    """Fraction-free Gaussian elimination; every intermediate stays integral."""
    a = [list(map(int, row)) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def solve(m: Matrix, v: Sequence[int]) -> list[Fraction]:
    """Solve m x = v over Q by Gauss-Jordan elimination."""
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(v[i])] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n] for row in aug]


def inverse(m: Matrix) -> list[list[Fraction]]:
    n = len(m)
    cols = [solve(m, [int(i == j) for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def adjugate(m: Matrix) -> tuple[int, list[list[int]]]:
    """(det, det * m^-1) with integer entries."""
    det = bareiss_det(m)
    inv = inverse(m)
    adj = [[x * det for x in row] for row in inv]
    if any(x.denominator != 1 for row in adj for x in row):
        raise ArithmeticError("adjugate is not integral")
    return det, [[int(x) for x in row] for row in adj]


def quadratic_form(m: Matrix, x: Sequence, y: Sequence | None = None):
    y = x if y is None else y
    return sum(x[i] * m[i][j] * y[j] for i in range(len(x)) for j in range(len(y)) if m[i][j])


def tridiagonal_minors(diag: Sequence[int], off: Sequence[int] | None = None) -> list[int]:
    """Leading principal minors D_1..D_k of a symmetric tridiagonal matrix.

    Uses the three-term continuant recurrence D_i = d_i D_(i-1) - o_(i-1)^2 D_(i-2).
    """
    off = [1] * (len(diag) - 1) if off is None else list(off)
    minors = []
    d_prev2, d_prev = 0, 1
    for i, d in enumerate(diag):
        o2 = off[i - 1] ** 2 if i else 0
        cur = d * d_prev - o2 * d_prev2
        minors.append(cur)
        d_prev2, d_prev = d_prev, cur
    return minors
