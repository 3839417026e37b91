"""Exact dense matrix helpers over arbitrary-precision integers and rationals.

Matrices are sequences of row sequences.  Everything here is exact; no
floating point is used anywhere, so unimodularity and positivity checks are
decidable statements rather than numerical estimates.
"""

from __future__ import annotations

from fractions import Fraction


def dims(a) -> tuple[int, int]:
    return len(a), len(a[0]) if a else 0


def is_square(a) -> bool:
    n = len(a)
    return all(len(r) == n for r in a)


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(n: int, m: int) -> list[list[int]]:
    return [[0] * m for _ in range(n)]


def transpose(a) -> list[list]:
    return [list(col) for col in zip(*a)]


def neg(a) -> list[list]:
    return [[-x for x in row] for row in a]


def matmul(a, b) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def block_diag(a, b) -> list[list[int]]:
    n, m = len(a), len(b)
    out = zeros(n + m, n + m)
    for i in range(n):
        for j in range(n):
            out[i][j] = a[i][j]
    for i in range(m):
        for j in range(m):
            out[n + i][n + j] = b[i][j]
    return out


def is_symmetric(a) -> bool:
    n = len(a)
    return all(a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n))


def is_skew(a) -> bool:
    n = len(a)
    if any(a[i][i] != 0 for i in range(n)):
        return False
    return all(a[i][j] == -a[j][i] for i in range(n) for j in range(i + 1, n))


def leading_minors(a) -> list[int]:
    """Leading principal minors of an integer matrix via Bareiss elimination.

    Stops early and reports the current (zero) minor if a pivot vanishes,
    which for a symmetric candidate already rules out positive definiteness.
    """
    n = len(a)
    m = [[int(x) for x in row] for row in a]
    minors: list[int] = []
    prev = 1
    for k in range(n):
        pivot = m[k][k]
        minors.append(pivot)
        if pivot == 0:
            break
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (pivot * m[i][j] - m[i][k] * m[k][j]) // prev
        prev = pivot
    return minors


def det(a) -> int:
    """Determinant of an integer matrix (fraction-free, with row pivoting)."""
    n = len(a)
    m = [[int(x) for x in row] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (pivot * m[i][j] - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1] if n else 1


def fraction_solve(a, b) -> list[list[Fraction]] | None:
    """Solve A X = B exactly over the rationals; None when A is singular.

    ``b`` is given column-wise as a matrix (n x m).
    """
    n = len(a)
    m = len(b[0])
    aug = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(b[i][j]) for j in range(m)]
           for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def fraction_inverse(a) -> list[list[Fraction]] | None:
    return fraction_solve(a, identity(len(a)))


def fraction_is_positive_definite(a) -> bool:
    """Exact positive definiteness of a symmetric rational matrix (LDL pivots)."""
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    for k in range(n):
        pivot = m[k][k]
        if pivot <= 0:
            return False
        for i in range(k + 1, n):
            f = m[i][k] / pivot
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    return True
