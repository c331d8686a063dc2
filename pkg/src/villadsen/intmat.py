"""Small exact matrix helpers.

Matrices are tuples of row tuples. Multiplicity matrices are stored with
rows indexed by the source vertex and columns by the target vertex, so a
size vector at the source level is carried forward by ``vec_mat``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = tuple[tuple[int, ...], ...]


def freeze(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def vec_mat(v, m: Matrix) -> tuple:
    """Row vector times matrix: entry j is sum_i v[i] * m[i][j]."""
    ncols = len(m[0]) if m else 0
    return tuple(sum(v[i] * m[i][j] for i in range(len(m))) for j in range(ncols))


def column(m: Matrix, j: int) -> tuple[int, ...]:
    return tuple(row[j] for row in m)


def as_fractions(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)
