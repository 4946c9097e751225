"""Exact rational vectors and their JSON form.

Vectors are plain tuples of :class:`fractions.Fraction`.  Matrices are
tuples of column vectors, which matches how reaction networks are written
(one column per reaction vector) and how figures are serialized.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]  # columns
Number = Union[int, Fraction, str]


def frac(x: Number) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact paths")
    return Fraction(x)


def vec(entries: Iterable[Number]) -> Vector:
    return tuple(frac(e) for e in entries)


def mat(columns: Iterable[Iterable[Number]]) -> Matrix:
    return tuple(vec(c) for c in columns)


def zero(n: int) -> Vector:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c: Number, v: Vector) -> Vector:
    c = frac(c)
    return tuple(c * a for a in v)


def neg(v: Vector) -> Vector:
    return tuple(-a for a in v)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def is_zero(v: Vector) -> bool:
    return not any(v)


def combine(coeffs: Sequence[Fraction], vectors: Sequence[Vector], n: int) -> Vector:
    out = [Fraction(0)] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i, a in enumerate(v):
                out[i] += c * a
    return tuple(out)


def transpose(columns: Matrix) -> Matrix:
    """Columns of the transpose, i.e. the rows of ``columns``."""
    if not columns:
        return ()
    return tuple(zip(*columns))


def mat_vec(columns: Matrix, x: Sequence[Fraction], n: int) -> Vector:
    return combine(x, columns, n)


def primitive(v: Vector) -> Vector:
    """Positive multiple of ``v`` with coprime integer entries."""
    if is_zero(v):
        return v
    den = lcm(*(a.denominator for a in v))
    nums = [int(a * den) for a in v]
    g = 0
    for a in nums:
        g = gcd(g, a)
    return tuple(Fraction(a // g) for a in nums)


def content_normalize(vectors: Sequence[Vector]) -> tuple[Vector, ...]:
    """Scale a whole family by one positive factor so that it is integral
    with overall content 1 (relative shape is preserved)."""
    nonzero = [a for v in vectors for a in v if a]
    if not nonzero:
        return tuple(vectors)
    den = lcm(*(a.denominator for a in nonzero))
    g = 0
    for a in nonzero:
        g = gcd(g, int(a * den))
    factor = Fraction(den, g)
    return tuple(scale(factor, v) for v in vectors)


def parallel_ratio(u: Vector, v: Vector) -> Fraction | None:
    """Return ``c`` with ``u == c * v`` (``v`` nonzero), else ``None``."""
    c = None
    for a, b in zip(u, v):
        if b == 0:
            if a != 0:
                return None
            continue
        r = a / b
        if c is None:
            c = r
        elif r != c:
            return None
    return c


def same_ray(u: Vector, v: Vector) -> bool:
    c = parallel_ratio(u, v)
    return c is not None and c > 0


def orient(v: Vector) -> Vector:
    """Canonical sign for a line direction: positive coordinate sum, ties
    broken by making the last nonzero entry positive."""
    s = sum(v, Fraction(0))
    if s < 0:
        return neg(v)
    if s == 0:
        for a in reversed(v):
            if a:
                return neg(v) if a < 0 else v
    return v


def fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_json(v: Vector) -> list[str]:
    return [fmt(a) for a in v]


def from_json(entries: Sequence[Number]) -> Vector:
    out = []
    for e in entries:
        if isinstance(e, float):
            if not e.is_integer():
                raise ValueError(f"non-integral float {e!r}; write rationals as 'p/q'")
            e = int(e)
        out.append(Fraction(e))
    return tuple(out)


def show(v: Vector) -> str:
    return "[" + ",".join(fmt(a) for a in v) + "]"
