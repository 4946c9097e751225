"""Exact row reduction, rank, image and kernel bases."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .rational import Matrix, Vector, transpose


_ONE = Fraction(1)
_ZERO = Fraction(0)


def _int_row(row: Sequence) -> list[int]:
    fr = [Fraction(a) for a in row]
    den = lcm(*(a.denominator for a in fr)) if fr else 1
    return [int(a * den) for a in fr]


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of a row-major matrix.

    Returns the nonzero rows of the reduced matrix and the pivot columns.
    Elimination is fraction free on integer rows (rows are first scaled to
    integers, which does not change the reduced form); pivot rows are
    divided out at the end.
    """
    m = [_int_row(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        prow = m[r]
        pc = prow[c]
        for i in range(len(m)):
            f = m[i][c]
            if i != r and f != 0:
                row = [pc * a - f * b for a, b in zip(m[i], prow)]
                g = 0
                for a in row:
                    g = gcd(g, a)
                m[i] = [a // g for a in row] if g > 1 else row
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    out = []
    for row, c in zip(m[:r], pivots):
        d = row[c]
        out.append([Fraction(a, d) if a else _ZERO for a in row])
    return out, pivots


def rank(columns: Matrix) -> int:
    if not columns:
        return 0
    return len(rref(columns, len(columns[0]))[1])


def kernel_basis(columns: Matrix, n: int) -> list[Vector]:
    """Basis of ``{x : sum_j x_j columns[j] = 0}``."""
    m = len(columns)
    if m == 0:
        return []
    rows = transpose(columns)  # n rows of length m
    red, pivots = rref(rows, m)
    free = [j for j in range(m) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * m
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def image_kernel_basis(columns: Matrix, n: int) -> tuple[list[Vector], list[Vector]]:
    """Column-space basis (a subset of the columns) and null-space basis."""
    if not columns:
        return [], []
    _, pivots = rref(transpose(columns), len(columns))
    image = [columns[j] for j in pivots]
    return image, kernel_basis(columns, n)


def image_basis(columns: Matrix, n: int) -> list[Vector]:
    return image_kernel_basis(columns, n)[0]


def left_kernel(columns: Matrix, n: int) -> list[Vector]:
    """Basis of ``{y : y . c = 0 for every column c}`` (orthogonal complement)."""
    if not columns:
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    return kernel_basis(transpose(columns), len(columns))


def coordinates(basis: Sequence[Vector], v: Vector) -> Vector | None:
    """Coefficients expressing ``v`` in ``basis`` (independent), or ``None``."""
    k = len(basis)
    if k == 0:
        return () if not any(v) else None
    n = len(v)
    rows = [[basis[j][i] for j in range(k)] + [v[i]] for i in range(n)]
    red, pivots = rref(rows, k + 1)
    if k in pivots:
        return None
    x = [Fraction(0)] * k
    for row, p in zip(red, pivots):
        x[p] = row[k]
    return tuple(x)


def in_span(basis: Sequence[Vector], v: Vector) -> bool:
    return coordinates(basis, v) is not None
