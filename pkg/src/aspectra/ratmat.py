"""Small exact rational matrix kit (tuples of tuples of Fraction)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = tuple[tuple[Fraction, ...], ...]


class SingularMatrixError(ValueError):
    pass


def mat(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def eye(n: int) -> Matrix:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n)) for i in range(n)
    )


def dim(m: Matrix) -> int:
    return len(m)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, k2, p = len(a), len(a[0]), len(b), len(b[0])
    if k != k2:
        raise ValueError(f"shape mismatch {n}x{k} * {k2}x{p}")
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a: Matrix, c) -> Matrix:
    c = Fraction(c)
    return tuple(tuple(c * x for x in row) for row in a)


def mat_trace(a: Matrix) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def mat_pow(a: Matrix, e: int) -> Matrix:
    if e < 0:
        return mat_pow(mat_inv(a), -e)
    result = eye(len(a))
    for _ in range(e):
        result = mat_mul(result, a)
    return result


def mat_inv(a: Matrix) -> Matrix:
    n = len(a)
    work = [[Fraction(x) for x in row] + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
            for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def kron(a: Matrix, b: Matrix) -> Matrix:
    nb = len(b)
    return tuple(
        tuple(a[i // nb][j // nb] * b[i % nb][j % nb] for j in range(len(a[0]) * len(b[0])))
        for i in range(len(a) * nb)
    )


def block_diag(a: Matrix, b: Matrix) -> Matrix:
    na, nb = len(a), len(b)
    zero = Fraction(0)
    top = tuple(row + (zero,) * nb for row in a)
    bottom = tuple((zero,) * na + row for row in b)
    return top + bottom


def is_identity(a: Matrix) -> bool:
    return a == eye(len(a))
