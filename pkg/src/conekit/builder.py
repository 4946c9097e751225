"""The saturation engine.

Starting from one vector, operations 1-3 (and negation for norm balls)
are applied to every new extreme vector and every reaction until the
generated cone or ball is closed, a termination certificate appears, or
the pass budget runs out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

from .exactgeom.polyhedra import (
    BallRep,
    ConeRep,
    Facets,
    conic_witness,
    extreme_filter,
    extreme_filter_facets,
    facets,
    lineality_witness,
)
from .exactgeom.lp import min_cost_solution
from .exactgeom.rational import Vector, is_zero, neg, orient, parallel_ratio, same_ray, scale, show, to_json, fmt
from .netmodel import Reaction, ReactionNetwork
from .regions import RegionClass, classify

Figure = Union[ConeRep, BallRep]

# how an operation tag reads after negating every vector of a run
MIRROR_OP = {"1": "2", "2": "1", "3a": "3b", "3b": "3a", "4": "4"}


@dataclass(frozen=True)
class DerivationNode:
    vector: Vector
    parent: int | None = None  # index into SaturationState.nodes
    via_reaction: int | None = None
    via_operation: str | None = None
    alpha: Fraction | None = None

    def to_dict(self, parent_index: int | None) -> dict:
        return {
            "vector": to_json(self.vector),
            "parent_index": parent_index,
            "reaction": self.via_reaction,
            "op": self.via_operation,
            "alpha": None if self.alpha is None else fmt(self.alpha),
        }


@dataclass
class SaturationState:
    mode: str
    figure: Figure
    nodes: list[DerivationNode] = field(default_factory=list)
    figure_nodes: list[int] = field(default_factory=list)  # node index per figure vector
    iterations: int = 0
    closed: bool = False
    snapped: bool = False

    def chain(self, index: int) -> list[int]:
        """Node indices from the root down to ``index``."""
        out = []
        i: int | None = index
        while i is not None:
            out.append(i)
            i = self.nodes[i].parent
        return out[::-1]

    def trace(self, indices: Sequence[int]) -> list[dict]:
        """Ancestry closure of ``indices`` with parents renumbered."""
        keep = sorted({j for i in indices for j in self.chain(i)})
        pos = {j: k for k, j in enumerate(keep)}
        return [self.nodes[j].to_dict(None if self.nodes[j].parent is None else pos[self.nodes[j].parent])
                for j in keep]


class CertificateKind(str, Enum):
    FigureFound = "FigureFound"
    UnboundedRay = "UnboundedRay"
    ReactionAbsorbed = "ReactionAbsorbed"
    LineContained = "LineContained"
    Inconclusive = "Inconclusive"


@dataclass
class Certificate:
    kind: CertificateKind
    state: SaturationState
    figure: Figure | None = None
    ancestor: int | None = None
    descendant: int | None = None
    alpha: Fraction | None = None
    reaction: int | None = None
    sign: int | None = None  # +1 for Gamma_i, -1 for -Gamma_i
    coefficients: tuple[Fraction, ...] | None = None  # over figure generators

    @property
    def negative(self) -> bool:
        return self.kind in (CertificateKind.UnboundedRay, CertificateKind.ReactionAbsorbed,
                             CertificateKind.LineContained)

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind.value}
        st = self.state
        fig = self.figure if self.figure is not None else st.figure
        out["figure"] = [to_json(v) for v in figure_vectors(fig)]
        if self.kind == CertificateKind.UnboundedRay:
            out["trace"] = st.trace([self.descendant])
            out["witness"] = {
                "ancestor": to_json(st.nodes[self.ancestor].vector),
                "descendant": to_json(st.nodes[self.descendant].vector),
                "alpha": fmt(self.alpha),
            }
        elif self.kind in (CertificateKind.ReactionAbsorbed, CertificateKind.LineContained):
            gens = figure_vectors(fig)
            used = [k for k, c in enumerate(self.coefficients) if c]
            out["trace"] = st.trace([st.figure_nodes[k] for k in used])
            w = {
                "vector": to_json(self.absorbed_vector()),
                "generators": [to_json(gens[k]) for k in used],
                "coefficients": [fmt(self.coefficients[k]) for k in used],
            }
            if self.kind == CertificateKind.ReactionAbsorbed:
                w = {"reaction": self.reaction, "sign": self.sign, **w}
            out["witness"] = w
        elif self.kind == CertificateKind.Inconclusive:
            out["state"] = {"iterations": st.iterations, "nodes": len(st.nodes),
                            "figure_size": len(figure_vectors(st.figure)), "snapped": st.snapped}
        return out

    def absorbed_vector(self) -> Vector:
        gens = figure_vectors(self.figure if self.figure is not None else self.state.figure)
        if self.kind == CertificateKind.LineContained:
            return neg(gens[self.reaction])
        n = len(gens[0])
        out = [Fraction(0)] * n
        for c, g in zip(self.coefficients, gens):
            for j in range(n):
                out[j] += c * g[j]
        return tuple(out)

    def summary(self) -> str:
        st = self.state
        if self.kind == CertificateKind.FigureFound:
            what = "generators" if isinstance(self.figure, ConeRep) else "vertices"
            return f"closed figure with {len(figure_vectors(self.figure))} {what}"
        if self.kind == CertificateKind.UnboundedRay:
            chain = " -> ".join(show(st.nodes[i].vector) for i in st.chain(self.descendant))
            return f"unbounded ray, alpha={fmt(self.alpha)}: {chain}"
        if self.kind == CertificateKind.ReactionAbsorbed:
            r = self.absorbed_vector()
            return f"reaction {self.reaction} vector {show(r)} absorbed as a non-extreme ray"
        if self.kind == CertificateKind.LineContained:
            return f"cone contains the line through {show(self.absorbed_vector())}"
        return (f"inconclusive after {st.iterations} passes "
                f"({len(st.nodes)} nodes, figure of {len(figure_vectors(st.figure))})")


@dataclass(frozen=True)
class SaturationConfig:
    max_iterations: int = 50
    snap_max_denominator: int = 12
    snap_max_distance: Fraction = Fraction(1, 10**6)

    def __post_init__(self) -> None:
        if self.max_iterations < 1 or self.snap_max_denominator < 1 or self.snap_max_distance <= 0:
            raise ValueError("configuration caps must be positive")


def figure_vectors(fig: Figure) -> tuple[Vector, ...]:
    return fig.generators if isinstance(fig, ConeRep) else fig.vertices


def _max_ratio(v: Vector, g: Vector, coords: Sequence[int], sign: int) -> Fraction:
    return max(sign * v[j] / g[j] for j in coords)


def apply_operation(v: Vector, reaction: Reaction) -> list[tuple[Vector, str, Fraction]]:
    """Operations 1-3 of ``v`` against one reaction.

    Each output moves ``v`` along the reaction vector by the least amount
    that makes some kinetic coordinate vanish.  For mixed vectors the two
    outputs are ordered so that negating ``v`` negates the output list.
    """
    g = reaction.vector
    k = reaction.kinetic
    tag = classify(v, reaction)
    if tag == RegionClass.Q2:
        return []
    if tag == RegionClass.Q1Plus:
        a = _max_ratio(v, g, k, 1)
        return [(tuple(x - a * y for x, y in zip(v, g)), "1", a)]
    if tag == RegionClass.Q1Minus:
        a = _max_ratio(v, g, k, -1)
        return [(tuple(x + a * y for x, y in zip(v, g)), "2", a)]
    a1 = _max_ratio(v, g, k, -1)
    a2 = _max_ratio(v, g, k, 1)
    out = [(tuple(x + a1 * y for x, y in zip(v, g)), "3a", a1),
           (tuple(x - a2 * y for x, y in zip(v, g)), "3b", a2)]
    return out if orient(v) == v else out[::-1]


def _outputs(v: Vector, net: ReactionNetwork, mode: str) -> list[tuple[Vector, int | None, str, Fraction | None]]:
    res: list[tuple[Vector, int | None, str, Fraction | None]] = []
    for i, r in enumerate(net.reactions):
        for w, op, a in apply_operation(v, r):
            res.append((w, i, op, a))
    if mode == "ball":
        res.append((neg(v), None, "4", None))
    return res


def _make_figure(points: Sequence[Vector], mode: str, n: int) -> Figure:
    return ConeRep(tuple(points), n) if mode == "cone" else BallRep(tuple(points), n)


def detect_unbounded(state: SaturationState, candidates: Sequence[int]) -> tuple[int, int, Fraction] | None:
    """First candidate node equal to ``alpha`` times one of its own
    ancestors with ``alpha > 1``."""
    for d in candidates:
        v = state.nodes[d].vector
        i = state.nodes[d].parent
        while i is not None:
            a = parallel_ratio(v, state.nodes[i].vector)
            if a is not None and a > 1:
                return i, d, a
            i = state.nodes[i].parent
    return None


def economical_witness(generators: Sequence[Vector], target: Vector) -> list[Fraction] | None:
    """Conic coefficients for ``target`` of least total weight once every
    generator is scaled to max-abs 1; generators on the ray of ``target``
    are not used."""
    cols = [g for g in generators if not same_ray(g, target)]
    w = min_cost_solution(cols, target, [1 / max(abs(x) for x in g) for g in cols])
    if w is None:
        return None
    it = iter(w)
    return [Fraction(0) if same_ray(g, target) else next(it) for g in generators]


def detect_absorbed(cone: ConeRep, net: ReactionNetwork, fac: Facets | None = None,
                    pool: Sequence[Vector] | None = None) -> tuple[int, int, list[Fraction]] | None:
    """A reaction vector (either sign if reversible) inside the cone whose
    ray is not one of the generators: (reaction, sign, coefficients).

    The coefficients are an :func:`economical_witness` over ``pool`` (any
    generating set of the same cone, by default the generators)."""
    pool = cone.generators if pool is None else pool
    for i, r in enumerate(net.reactions):
        for sign in ((1, -1) if r.reversible else (1,)):
            g = r.vector if sign == 1 else neg(r.vector)
            if any(same_ray(g, h) for h in cone.generators):
                continue
            if fac is not None and not fac.contains(g):
                continue
            if conic_witness(cone, g) is not None:
                return i, sign, economical_witness(pool, g)
    return None


@dataclass(frozen=True)
class Violation:
    vector: Vector
    reaction: int | None
    operation: str
    output: Vector

    def __str__(self) -> str:
        via = "negation" if self.reaction is None else f"reaction {self.reaction} (op {self.operation})"
        return f"{show(self.vector)} via {via} gives {show(self.output)}, outside the figure"


def closure_check(figure: Figure, net: ReactionNetwork) -> list[Violation]:
    """Every operation output of every extreme vector that leaves the figure."""
    mode = "cone" if isinstance(figure, ConeRep) else "ball"
    pts = [p for p in figure_vectors(figure) if not is_zero(p)]
    out: list[Violation] = []
    if not pts:
        return out
    fac = facets(pts, "conic" if mode == "cone" else "convex")
    for v in pts:
        for w, i, op, _ in _outputs(v, net, mode):
            if not is_zero(w) and not fac.contains(w):
                out.append(Violation(v, i, op, w))
    return out


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def rational_snap(points: Sequence[Vector], max_denominator: int, max_distance: Fraction) -> list[Vector]:
    """Replace each point by ``round(m v) / m`` for the least ``m`` whose
    lattice distance is below ``max_distance``."""
    if max_denominator < 1 or max_distance <= 0:
        raise ValueError("max_denominator must be >= 1 and max_distance > 0")
    eps2 = Fraction(max_distance) ** 2
    out = []
    for v in points:
        snapped = v
        for m in range(1, max_denominator + 1):
            mv = [m * x for x in v]
            r = [_round_half_up(x) for x in mv]
            if sum((x - y) ** 2 for x, y in zip(mv, r)) < eps2:
                snapped = tuple(Fraction(y, m) for y in r)
                break
        out.append(snapped)
    return out


def _snap_figure(points: Sequence[Vector], mode: str, config: SaturationConfig) -> list[Vector]:
    if mode == "ball":
        return rational_snap(points, config.snap_max_denominator, config.snap_max_distance)
    scaled = [scale(1 / max(abs(x) for x in p), p) for p in points]
    return rational_snap(scaled, config.snap_max_denominator, config.snap_max_distance)


def saturate(net: ReactionNetwork, start: Sequence, mode: str,
             config: SaturationConfig | None = None) -> Certificate:
    """Grow a cone (``mode='cone'``) or ball (``mode='ball'``) from ``start``."""
    if mode not in ("cone", "ball"):
        raise ValueError(f"unknown mode {mode!r}")
    config = config or SaturationConfig()
    start = tuple(Fraction(x) for x in start)
    n = net.n
    if len(start) != n:
        raise ValueError("start vector has the wrong dimension")
    if is_zero(start):
        raise ValueError("start vector must be nonzero")
    state = SaturationState(mode, _make_figure([start], mode, n), [DerivationNode(start)], [0])
    points: list[Vector] = [start]
    owner: list[int] = [0]
    worklist = [0]
    kind = "conic" if mode == "cone" else "convex"
    fac = facets(points, kind)
    while True:
        if state.iterations >= config.max_iterations:
            return _finish_unclosed(net, state, points, owner, mode, config)
        state.iterations += 1
        fresh: list[int] = []
        created: list[int] = []
        for idx in worklist:
            v = state.nodes[idx].vector
            for w, i, op, a in _outputs(v, net, mode):
                if is_zero(w):
                    continue
                state.nodes.append(DerivationNode(w, idx, i, op, a))
                k = len(state.nodes) - 1
                created.append(k)
                # tested against the figure at the start of the pass; anything
                # made redundant by a later addition is dropped by the filter
                if not fac.contains(w) and w not in points:
                    points.append(w)
                    owner.append(k)
                    fresh.append(k)
        pool, pool_owner = _ray_dedupe(points, owner)
        if fresh:
            kept, fac = extreme_filter_facets(points, kind)
            owner = [owner[points.index(p)] for p in kept]
            points = kept
        state.figure = _make_figure(points, mode, n)
        state.figure_nodes = list(owner)
        if mode == "ball":
            hit = detect_unbounded(state, created)
            if hit:
                anc, desc, a = hit
                return Certificate(CertificateKind.UnboundedRay, state, state.figure, anc, desc, a)
        else:
            cert = _cone_termination(net, state, fac, pool, pool_owner)
            if cert:
                return cert
        if not fresh:
            state.closed = True
            return _figure_found(net, state)
        kept_set = set(owner)
        worklist = [k for k in fresh if k in kept_set]


def _ray_dedupe(points: Sequence[Vector], owner: Sequence[int]) -> tuple[list[Vector], list[int]]:
    out: list[Vector] = []
    own: list[int] = []
    for p, k in zip(points, owner):
        if not any(same_ray(p, q) for q in out):
            out.append(p)
            own.append(k)
    return out, own


def _cone_termination(net: ReactionNetwork, state: SaturationState, fac: Facets | None = None,
                      pool: Sequence[Vector] | None = None,
                      pool_owner: Sequence[int] | None = None) -> Certificate | None:
    """``pool`` lists every point of the pass before redundancy removal; the
    absorption witness is drawn from it."""
    cone = state.figure
    hit = detect_absorbed(cone, net, fac, pool)
    if hit:
        i, sign, w = hit
        if pool is not None:
            cone = ConeRep(tuple(pool), cone.ambient_dim)
            state.figure = cone
            state.figure_nodes = list(pool_owner)
        return Certificate(CertificateKind.ReactionAbsorbed, state, cone, reaction=i, sign=sign,
                           coefficients=tuple(w))
    g = None if fac is not None and fac.pointed(cone.ambient_dim) else lineality_witness(cone)
    if g is not None:
        k = cone.generators.index(g)
        w = conic_witness(cone, neg(g))
        return Certificate(CertificateKind.LineContained, state, cone, reaction=k, coefficients=tuple(w))
    return None


def _figure_found(net: ReactionNetwork, state: SaturationState) -> Certificate:
    violations = closure_check(state.figure, net)
    if violations:
        raise AssertionError(f"saturation closed but audit failed: {violations[0]}")
    return Certificate(CertificateKind.FigureFound, state, state.figure)


def _finish_unclosed(net: ReactionNetwork, state: SaturationState, points: list[Vector],
                     owner: list[int], mode: str, config: SaturationConfig) -> Certificate:
    snapped = [p for p in _snap_figure(points, mode, config) if not is_zero(p)]
    kind = "conic" if mode == "cone" else "convex"
    snapped = extreme_filter(snapped, kind)
    fig = _make_figure(snapped, mode, net.n)
    state.snapped = True
    if snapped and not closure_check(fig, net):
        if mode == "cone" and (detect_absorbed(fig, net) or lineality_witness(fig) is not None):
            return Certificate(CertificateKind.Inconclusive, state)
        state.figure = fig
        state.figure_nodes = []
        state.closed = True
        return Certificate(CertificateKind.FigureFound, state, fig)
    return Certificate(CertificateKind.Inconclusive, state)
