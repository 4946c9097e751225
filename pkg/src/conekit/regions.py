"""Kinetic sign regions of vectors relative to reactions, the set Z of
vectors annihilable by some admissible Jacobian, concordance, and starting
vector candidates."""

from __future__ import annotations

import itertools
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence

from .exactgeom import linalg
from .exactgeom.lp import LinearSystem, feasible
from .exactgeom.polyhedra import ConeRep, dual_cone, sign_feasible
from .exactgeom.rational import Vector, combine, dot, is_zero, orient, primitive
from .netmodel import Reaction, ReactionNetwork


class RegionClass(str, Enum):
    Q1Plus = "Q1Plus"
    Q1Minus = "Q1Minus"
    Mixed = "Mixed"
    Q2 = "Q2"


# allowed sign of epsilon_i for each region
SIGN_CONSTRAINT = {
    RegionClass.Q1Plus: "-",
    RegionClass.Q1Minus: "+",
    RegionClass.Q2: "0",
    RegionClass.Mixed: "*",
}


class EnumerationCapError(RuntimeError):
    pass


def _tag(prods: Sequence[int]) -> RegionClass:
    pos = any(p > 0 for p in prods)
    negs = any(p < 0 for p in prods)
    if pos and negs:
        return RegionClass.Mixed
    if pos:
        return RegionClass.Q1Plus
    if negs:
        return RegionClass.Q1Minus
    return RegionClass.Q2


def classify(v: Sequence[Fraction], reaction: Reaction) -> RegionClass:
    if len(v) != len(reaction.reactant):
        raise ValueError("dimension mismatch")
    g = reaction.vector
    return _tag([(v[j] > 0) - (v[j] < 0) if g[j] > 0 else (v[j] < 0) - (v[j] > 0)
                 for j in reaction.kinetic])


def classify_signs(sigma: Sequence[int], reaction: Reaction) -> RegionClass:
    """:func:`classify` from the sign vector of ``v`` alone."""
    return _tag([s * sigma[j] for j, s in reaction.kinetic_signs])


def z_membership(net: ReactionNetwork, v: Sequence[Fraction]) -> Vector | None:
    """An epsilon with ``Gamma eps = 0`` whose signs are admissible for the
    regions of ``v``, or ``None``."""
    if len(v) != net.n:
        raise ValueError("dimension mismatch")
    m = net.m
    rows = [tuple(c[i] for c in net.gamma) for i in range(net.n)]
    eqs = [(r, Fraction(0)) for r in rows]
    strict = []
    for i, r in enumerate(net.reactions):
        e = tuple(Fraction(int(k == i)) for k in range(m))
        allowed = SIGN_CONSTRAINT[classify(v, r)]
        if allowed == "0":
            eqs.append((e, Fraction(0)))
        elif allowed == "+":
            strict.append((e, Fraction(0)))
        elif allowed == "-":
            strict.append((tuple(-a for a in e), Fraction(0)))
    return feasible(LinearSystem(m, equalities=eqs, strict=strict))


class _EpsilonOracle:
    """Caches whether a tag assignment admits an epsilon in ker(Gamma)."""

    def __init__(self, net: ReactionNetwork):
        self.m = net.m
        self.kernel = linalg.kernel_basis(net.gamma, net.n) if net.m else []
        self.normal = None
        if self.m and len(self.kernel) == self.m - 1:
            self.normal = linalg.left_kernel(tuple(self.kernel), self.m)[0]
        self.cache: dict[tuple[str, ...], bool] = {}

    def __call__(self, tags: Sequence[RegionClass]) -> bool:
        key = tuple(SIGN_CONSTRAINT[t] for t in tags)
        hit = self.cache.get(key)
        if hit is None:
            hit = sign_feasible(self.kernel, key, self.m, self.normal)
            self.cache[key] = hit
        return hit


def _sign_patterns(n: int) -> Iterator[tuple[int, ...]]:
    for sigma in itertools.product((-1, 0, 1), repeat=n):
        if any(sigma):
            yield sigma


def _subspace(basis: list[Vector], n: int) -> tuple[list[Vector], Vector | None]:
    normal = None
    if len(basis) == n - 1:
        normal = linalg.left_kernel(tuple(basis), n)[0]
    return basis, normal


SIGN_CHAR = {-1: "-", 0: "0", 1: "+"}


def is_concordant(net: ReactionNetwork, cap: int = 12) -> bool:
    """True iff no nonzero vector of Im(Gamma) lies in Z.

    Region tags depend only on the sign vector of ``v``, so every realizable
    sign vector of Im(Gamma) is enumerated once.
    """
    if net.n > cap:
        raise EnumerationCapError(f"{net.n} species exceeds the enumeration cap {cap}")
    basis, normal = _subspace(net.image_basis(), net.n)
    if not basis:
        return True
    eps = _EpsilonOracle(net)
    for sigma in _sign_patterns(net.n):
        tags = [classify_signs(sigma, r) for r in net.reactions]
        if not eps(tags):
            continue
        if sign_feasible(basis, [SIGN_CHAR[s] for s in sigma], net.n, normal):
            return False
    return True


def _separating_covector(outer: list[Vector], inner: list[Vector], n: int) -> Vector:
    """Nonzero ``c`` in span(outer) orthogonal to span(inner)."""
    k = len(outer)
    rows = [tuple(dot(u, b) for b in outer) for u in inner]
    ker = _row_kernel(rows, k)
    for y in ker:
        c = combine(y, outer, n)
        if not is_zero(c):
            return c
    raise ValueError("inner image is not a proper subspace of the outer image")


def find_start_candidates(outer: ReactionNetwork, inner: ReactionNetwork) -> list[Vector]:
    """Vectors of Z(inner) in Im(outer) but not in Im(inner), one primitive
    integer representative per realizable sign vector, oriented canonically."""
    n = outer.n
    ob = outer.image_basis()
    ib = inner.image_basis()
    if len(ib) != len(ob) - 1:
        raise ValueError("inner rank must be one less than outer rank")
    c = _separating_covector(ob, ib, n)
    eps = _EpsilonOracle(inner)
    out: list[Vector] = []
    for sigma in _sign_patterns(n):
        if not eps([classify_signs(sigma, r) for r in inner.reactions]):
            continue
        rows = []
        for j, s in enumerate(sigma):
            a = tuple(b[j] for b in ob)
            if s == 0:
                rows.extend((a, tuple(-x for x in a)))
            else:
                rows.append(tuple(s * x for x in a))
        rows.append(tuple(dot(c, b) for b in ob))
        if linalg.rank(tuple(rows)) < len(ob):
            continue
        rays = dual_cone(ConeRep(tuple(rows), len(ob))).generators
        if not rays:
            continue
        y = [sum(col, Fraction(0)) for col in zip(*(primitive(r) for r in rays))]
        v = combine(y, ob, n)
        if dot(c, v) <= 0 or any((x > 0) - (x < 0) != s for x, s in zip(v, sigma)):
            continue
        v = orient(primitive(v))
        if v not in out:
            out.append(v)
    return out


def projection_start(net: ReactionNetwork) -> Vector | None:
    """Generator of the first line cut out of Im(Gamma) by reaction
    hyperplanes ``{x : Gamma_i . x = 0}``; subsets are tried smallest first."""
    if not net.all_reversible:
        raise ValueError("projection_start needs an all-reversible network")
    basis = net.image_basis()
    k = len(basis)
    if k == 1:
        return orient(primitive(basis[0]))
    for size in range(1, net.m + 1):
        for subset in itertools.combinations(range(net.m), size):
            rows = tuple(tuple(dot(net.reactions[i].vector, b) for b in basis) for i in subset)
            ker = _row_kernel(rows, k)
            if len(ker) == 1:
                return orient(primitive(combine(ker[0], basis, net.n)))
    return None


def _row_kernel(rows: Sequence[Sequence[Fraction]], k: int) -> list[Vector]:
    """Basis of ``{y in Q^k : r . y = 0 for r in rows}``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(k)) for i in range(k)]
    return linalg.kernel_basis(tuple(tuple(r[j] for r in rows) for j in range(k)), len(rows))
