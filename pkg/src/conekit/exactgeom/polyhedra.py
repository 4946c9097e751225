"""Polyhedral cones and symmetric polytopes over the rationals.

Membership is decided with the exact simplex in :mod:`.lp`; dual cones are
computed with the double description method (incremental halfspace
insertion with the combinatorial adjacency test).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from . import linalg
from .lp import LinearSystem, feasible, nonnegative_solution
from .rational import Vector, combine, dot, is_zero, neg, primitive, same_ray, unit, vec

_ONE = Fraction(1)


def _ints(v: Sequence) -> tuple[int, ...]:
    """Positive multiple of ``v`` with coprime integer entries, as ints.

    Signs of dot products survive positive scaling, and plain int arithmetic
    is much faster than Fraction arithmetic in the inner loops below.
    """
    den = lcm(*(Fraction(a).denominator for a in v))
    nums = [int(a * den) for a in v]
    g = 0
    for a in nums:
        g = gcd(g, a)
    return tuple(a // g for a in nums) if g > 1 else tuple(nums)


def _idot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class ConeRep:
    """Cone generated by ``generators`` in dimension ``ambient_dim``."""

    generators: tuple[Vector, ...]
    ambient_dim: int

    @classmethod
    def of(cls, generators: Sequence[Sequence], ambient_dim: int | None = None) -> "ConeRep":
        gens = tuple(vec(g) for g in generators)
        if ambient_dim is None:
            if not gens:
                raise ValueError("ambient_dim is required for an empty generator list")
            ambient_dim = len(gens[0])
        return cls(gens, ambient_dim)


@dataclass(frozen=True)
class BallRep:
    """Convex hull of ``vertices``; a norm ball when symmetric and full
    dimensional in its span."""

    vertices: tuple[Vector, ...]
    ambient_dim: int

    @classmethod
    def of(cls, vertices: Sequence[Sequence], ambient_dim: int | None = None) -> "BallRep":
        verts = tuple(vec(v) for v in vertices)
        if ambient_dim is None:
            ambient_dim = len(verts[0])
        return cls(verts, ambient_dim)

    def is_symmetric(self) -> bool:
        vs = set(self.vertices)
        return all(neg(v) in vs for v in vs)


def conic_witness(cone: ConeRep, v: Vector) -> list[Fraction] | None:
    """Nonnegative coefficients expressing ``v`` over the generators."""
    if len(v) != cone.ambient_dim:
        raise ValueError("dimension mismatch")
    if not cone.generators:
        return [] if is_zero(v) else None
    return nonnegative_solution(cone.generators, v)


def conic_member(cone: ConeRep, v: Vector) -> bool:
    return conic_witness(cone, v) is not None


def hull_witness(ball: BallRep, v: Vector) -> list[Fraction] | None:
    if len(v) != ball.ambient_dim:
        raise ValueError("dimension mismatch")
    if not ball.vertices:
        return None
    return nonnegative_solution(ball.vertices, v, convex=True)


def hull_member(ball: BallRep, v: Vector) -> bool:
    return hull_witness(ball, v) is not None


@dataclass(frozen=True)
class Facets:
    """Inequalities ``d.x >= 0`` describing a cone, or a hull when
    ``convex`` (points are then lifted to ``(x, 1)``)."""

    normals: tuple[Vector, ...]
    convex: bool = False
    _int_normals: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_int_normals", tuple(_ints(d) for d in self.normals))

    def contains(self, v: Vector) -> bool:
        x = _ints(tuple(v) + (_ONE,) if self.convex else v)
        return all(_idot(d, x) >= 0 for d in self._int_normals)

    def pointed(self, dim: int) -> bool:
        return linalg.rank(self.normals) == dim



def _dedupe(points: Sequence[Vector], mode: str) -> list[Vector]:
    kept: list[Vector] = []
    for p in points:
        if mode == "conic":
            if is_zero(p) or any(same_ray(p, q) for q in kept):
                continue
        elif p in kept:
            continue
        kept.append(p)
    return kept


def _lift(points: Sequence[Vector], mode: str) -> list[Vector]:
    return [tuple(p) + (_ONE,) for p in points] if mode == "convex" else list(points)


def facets(points: Sequence[Vector], mode: str = "conic") -> Facets:
    """Halfspace description of the cone or hull of ``points``."""
    lifted = _lift(_dedupe(points, mode), mode)
    if not lifted:
        raise ValueError("facets of an empty point set")
    return Facets(tuple(_dual_generators(lifted, len(lifted[0]))), mode == "convex")


def _extreme_lp(kept: list[Vector], mode: str) -> list[Vector]:
    i = 0
    while i < len(kept):
        others = kept[:i] + kept[i + 1:]
        if others:
            sol = nonnegative_solution(others, kept[i], convex=(mode == "convex"))
            if sol is not None:
                del kept[i]
                continue
        i += 1
    return kept


def extreme_filter_facets(points: Sequence[Vector], mode: str = "conic") -> tuple[list[Vector], Facets | None]:
    """:func:`extreme_filter` that also returns the halfspace description.

    In a pointed cone a generator is extreme exactly when the inequalities
    tight at it have rank one less than the ambient dimension.  Cones with
    lines fall back to one LP per generator.
    """
    if mode not in ("conic", "convex"):
        raise ValueError(f"unknown mode {mode!r}")
    kept = _dedupe(points, mode)
    if not kept:
        return kept, None
    lifted = _lift(kept, mode)
    dim = len(lifted[0])
    fac = Facets(tuple(_dual_generators(lifted, dim)), mode == "convex")
    if not fac.pointed(dim):
        return _extreme_lp(kept, mode), fac
    out = []
    for p, x in zip(kept, lifted):
        xi = _ints(x)
        tight = tuple(d for d, di in zip(fac.normals, fac._int_normals) if _idot(di, xi) == 0)
        if linalg.rank(tight) == dim - 1:
            out.append(p)
    return out, fac


def extreme_filter(points: Sequence[Vector], mode: str = "conic") -> list[Vector]:
    """Drop redundant generators (``conic``) or non-vertices (``convex``).

    Earlier occurrences win among duplicates; the generated cone or hull is
    unchanged.
    """
    return extreme_filter_facets(points, mode)[0]


def extreme_filter_lp(points: Sequence[Vector], mode: str = "conic") -> list[Vector]:
    """Reference version of :func:`extreme_filter` using one LP per point."""
    if mode not in ("conic", "convex"):
        raise ValueError(f"unknown mode {mode!r}")
    return _extreme_lp(_dedupe(points, mode), mode)


def lineality_witness(cone: ConeRep) -> Vector | None:
    """A generator ``g`` with ``-g`` in the cone, or ``None`` when pointed."""
    for g in cone.generators:
        if conic_member(cone, neg(g)):
            return g
    return None


def is_pointed(cone: ConeRep) -> bool:
    return lineality_witness(cone) is None


def span_dim(vectors: Sequence[Vector]) -> int:
    return linalg.rank(tuple(vectors))


def _extreme_rays(rows: Sequence[Vector], d: int) -> list[Vector]:
    """Extreme rays of the pointed cone ``{y : a.y >= 0 for a in rows}``.

    ``rows`` must have rank ``d``.
    """
    order = sorted(range(len(rows)), key=lambda i: rows[i])
    rows = [rows[i] for i in order]
    chosen: list[int] = []
    for i, a in enumerate(rows):
        if linalg.rank(tuple(rows[j] for j in chosen) + (a,)) > len(chosen):
            chosen.append(i)
            if len(chosen) == d:
                break
    if len(chosen) < d:
        raise ValueError("constraint rows do not have full rank")
    # columns of the inverse of the chosen d x d block
    block = [list(rows[i]) for i in chosen]
    aug = [block[k] + [Fraction(int(k == j)) for j in range(d)] for k in range(d)]
    red, _ = linalg.rref(aug, 2 * d)
    inv_cols = [tuple(red[r][d + c] for r in range(d)) for c in range(d)]
    rows = [_ints(a) for a in rows]
    rays: list[tuple[int, ...]] = [_ints(c) for c in inv_cols]
    zeros: list[frozenset[int]] = [
        frozenset(chosen[j] for j in range(d) if j != k) for k in range(d)
    ]
    for i, a in enumerate(rows):
        if i in chosen:
            continue
        vals = [_idot(a, r) for r in rays]
        pos = [k for k, s in enumerate(vals) if s > 0]
        negs = [k for k, s in enumerate(vals) if s < 0]
        if not negs:
            zeros = [z | {i} if vals[k] == 0 else z for k, z in enumerate(zeros)]
            continue
        new_rays: list[tuple[int, ...]] = []
        new_zeros: list[frozenset[int]] = []
        for k, s in enumerate(vals):
            if s >= 0:
                new_rays.append(rays[k])
                new_zeros.append(zeros[k] | {i} if s == 0 else zeros[k])
        for p in pos:
            for q in negs:
                common = zeros[p] & zeros[q]
                if len(common) < d - 2:
                    continue
                if any(common <= zeros[r] for r in range(len(rays)) if r != p and r != q):
                    continue
                vp, vq = vals[p], -vals[q]
                new_rays.append(_ints([vp * x + vq * y for x, y in zip(rays[q], rays[p])]))
                new_zeros.append(common | {i})
        rays, zeros = new_rays, new_zeros
    return [tuple(Fraction(a) for a in r) for r in rays]


def _dual_generators(gens: Sequence[Vector], n: int) -> list[Vector]:
    gens = [g for g in gens if not is_zero(g)]
    lineality = linalg.left_kernel(tuple(gens), n)
    out: list[Vector] = []
    if gens:
        basis = linalg.image_basis(tuple(gens), n)
        d = len(basis)
        rows = [tuple(dot(g, b) for b in basis) for g in gens]
        for y in _extreme_rays(rows, d):
            out.append(primitive(combine(y, basis, n)))
    for l in lineality:
        l = primitive(l)
        out.extend((l, neg(l)))
    return _dedupe(out, "conic")


def dual_cone(cone: ConeRep) -> ConeRep:
    """Generators of ``{x : x.g >= 0 for every generator g}``.

    The double description output is already irredundant up to repeated
    rays, which are dropped.
    """
    return ConeRep(tuple(_dual_generators(cone.generators, cone.ambient_dim)), cone.ambient_dim)


def polar_ball(ball: BallRep) -> BallRep:
    """Vertices of ``{y in span(B) : y.b <= 1 for b in B}`` for a symmetric
    full-dimensional-in-its-span ball ``B``."""
    n = ball.ambient_dim
    basis = linalg.image_basis(ball.vertices, n)
    d = len(basis)
    rows = [tuple(-dot(b, w) for w in basis) + (Fraction(1),) for b in ball.vertices]
    verts = []
    for r in _extreme_rays(rows, d + 1):
        t = r[d]
        if t <= 0:
            raise ValueError("ball is not symmetric with the origin in its relative interior")
        verts.append(combine([c / t for c in r[:d]], basis, n))
    return BallRep(tuple(extreme_filter(verts, "convex")), n)


def sign_witness(basis: Sequence[Vector], allowed: Sequence[str], n: int) -> Vector | None:
    """Vector in ``span(basis)`` whose coordinate signs respect ``allowed``.

    ``allowed[j]`` is ``'-'`` (strictly negative), ``'+'`` (strictly
    positive), ``'0'`` or ``'*'`` (unconstrained).
    """
    k = len(basis)
    eqs, strict = [], []
    for j, s in enumerate(allowed):
        row = tuple(b[j] for b in basis)
        if s == "0":
            eqs.append((row, Fraction(0)))
        elif s == "+":
            strict.append((row, Fraction(0)))
        elif s == "-":
            strict.append((tuple(-a for a in row), Fraction(0)))
    if k == 0:
        return tuple(Fraction(0) for _ in range(n)) if not strict else None
    y = feasible(LinearSystem(k, equalities=eqs, strict=strict))
    if y is None:
        return None
    return combine(y, basis, n)


def _sign_ok(x: Fraction, s: str) -> bool:
    return s == "*" or (s == "0" and x == 0) or (s == "+" and x > 0) or (s == "-" and x < 0)


def sign_feasible(basis: Sequence[Vector], allowed: Sequence[str], n: int,
                  normal: Vector | None = None) -> bool:
    """Decision version of :func:`sign_witness` with closed forms for
    subspaces of dimension 0, 1, ``n - 1`` (pass its ``normal``) and ``n``."""
    k = len(basis)
    strict = [j for j, s in enumerate(allowed) if s in "+-"]
    if not strict:
        return True
    if k == 0:
        return False
    if k == n:
        return True
    if k == 1:
        u = basis[0]
        return any(all(_sign_ok(t * a, s) for a, s in zip(u, allowed)) for t in (1, -1))
    if normal is not None and k == n - 1:
        if any(s == "*" and normal[j] != 0 for j, s in enumerate(allowed)):
            return True
        terms = [normal[j] * (1 if allowed[j] == "+" else -1) for j in strict]
        if all(t == 0 for t in terms):
            return True
        return any(t > 0 for t in terms) and any(t < 0 for t in terms)
    return sign_witness(basis, allowed, n) is not None


def standard_cone(n: int) -> ConeRep:
    return ConeRep(tuple(unit(n, i) for i in range(n)), n)
