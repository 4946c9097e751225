"""End-to-end analyses built on the saturation engine: non-expansivity,
monotonicity with forced starting vectors, strength annotations, transfer
of certificates to the dual network, and greedy network growth."""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Sequence

from .builder import (
    Certificate,
    CertificateKind,
    DerivationNode,
    SaturationConfig,
    SaturationState,
    closure_check,
    figure_vectors,
    saturate,
)
from .exactgeom import linalg
from .exactgeom.polyhedra import BallRep, ConeRep, dual_cone, extreme_filter, is_pointed, polar_ball
from .exactgeom.rational import (
    Vector,
    combine,
    content_normalize,
    dot,
    fmt,
    is_zero,
    neg,
    primitive,
    show,
    to_json,
    transpose,
)
from .netmodel import Reaction, ReactionNetwork, dual_network, enumerate_subnetworks, r_graph, species_components
from .regions import RegionClass, classify, find_start_candidates, is_concordant, projection_start

YES, NO, NO_FOR_V, INCONCLUSIVE = "yes", "no", "no-for-cones-containing-v", "inconclusive"
BALL_STRATEGIES = ("reaction", "column-sum", "generic")


@dataclass(frozen=True)
class AnalysisConfig:
    max_iterations: int = 50
    snap_max_denominator: int = 12
    snap_max_distance: Fraction = Fraction(1, 10**6)
    start_override: tuple[Fraction, ...] | None = None
    ball_start: str = "reaction"
    # pass budget for the non-expansivity test of candidate subnetworks
    sub_max_iterations: int = 12
    search_outer: bool = False
    concordance_cap: int = 12

    def __post_init__(self) -> None:
        if self.ball_start not in BALL_STRATEGIES:
            raise ValueError(f"ball_start must be one of {BALL_STRATEGIES}")
        if self.sub_max_iterations < 1:
            raise ValueError("sub_max_iterations must be positive")

    @property
    def saturation(self) -> SaturationConfig:
        return SaturationConfig(self.max_iterations, self.snap_max_denominator, self.snap_max_distance)

    def echo(self) -> dict:
        d = asdict(self)
        d["snap_max_distance"] = fmt(Fraction(self.snap_max_distance))
        if self.start_override is not None:
            d["start_override"] = to_json(self.start_override)
        return d


@dataclass
class AnalysisReport:
    question: str
    verdict: str
    certificate: Certificate | None
    start_vector: Vector | None = None
    annotations: set[str] = field(default_factory=set)
    config_echo: dict = field(default_factory=dict)
    provenance: str = ""
    # certificate of the run from -v, when one was made
    mirror_certificate: Certificate | None = None

    @property
    def figure(self) -> ConeRep | BallRep | None:
        if self.certificate is not None and self.certificate.kind == CertificateKind.FigureFound:
            return self.certificate.figure
        return None

    def to_dict(self) -> dict:
        out: dict = {"question": self.question, "verdict": self.verdict}
        if self.start_vector is not None:
            out["start_vector"] = to_json(self.start_vector)
        if self.provenance:
            out["provenance"] = self.provenance
        out["certificate"] = None if self.certificate is None else self.certificate.to_dict()
        if self.mirror_certificate is not None:
            out["mirror_certificate"] = self.mirror_certificate.to_dict()
        out["annotations"] = sorted(self.annotations)
        out["config"] = self.config_echo
        return out


def _spans_image(points: Sequence[Vector], net: ReactionNetwork) -> bool:
    basis = net.image_basis()
    pts = [p for p in points if not is_zero(p)]
    return (linalg.rank(tuple(pts)) == len(basis) if pts else not basis) and \
        all(linalg.in_span(basis, p) for p in pts)


def _remap(cert: Certificate, origin: Sequence[int]) -> Certificate:
    """Rewrite reaction indices of a subnetwork certificate in terms of the
    parent network."""
    st = cert.state
    nodes = [replace(nd, via_reaction=None if nd.via_reaction is None else origin[nd.via_reaction])
             for nd in st.nodes]
    st2 = replace(st, nodes=nodes)
    reaction = cert.reaction
    if cert.kind == CertificateKind.ReactionAbsorbed:
        reaction = origin[reaction]
    return replace(cert, state=st2, reaction=reaction)


def _ball_starts(net: ReactionNetwork, config: AnalysisConfig) -> Iterator[tuple[Vector, str]]:
    if config.start_override is not None:
        yield tuple(Fraction(x) for x in config.start_override), "override"
        return
    order = list(BALL_STRATEGIES)
    order.remove(config.ball_start)
    order.insert(0, config.ball_start)
    for strategy in order:
        v = _ball_start(net, strategy)
        if v is not None:
            yield v, strategy


def _last_positive(v: Vector) -> Vector:
    for a in reversed(v):
        if a:
            return neg(v) if a < 0 else v
    return v


def _ball_start(net: ReactionNetwork, strategy: str) -> Vector | None:
    if strategy == "reaction":
        return _last_positive(primitive(net.gamma[-1]))
    if strategy == "column-sum":
        s = tuple(sum(col, Fraction(0)) for col in zip(*net.gamma))
        if is_zero(s) or any(classify(s, r) == RegionClass.Q2 for r in net.reactions):
            return None
        return primitive(s)
    # generic: integer combination of an image basis, nonzero wherever Im(Gamma) can be
    basis = net.image_basis()
    live = [j for j in range(net.n) if any(b[j] for b in basis)]
    for c in itertools.count(1):
        coeffs = [Fraction(c ** k) for k in range(len(basis))]
        v = combine(coeffs, basis, net.n)
        if all(v[j] for j in live):
            return primitive(v)


def analyze_nonexpansive(net: ReactionNetwork, config: AnalysisConfig | None = None) -> AnalysisReport:
    config = config or AnalysisConfig()
    report = _nonexpansive(net, config)
    report.config_echo = config.echo()
    return annotate_strength(report, net)


def _trivial_ball(net: ReactionNetwork) -> Certificate:
    fig = BallRep((), net.n)
    return Certificate(CertificateKind.FigureFound, SaturationState("ball", fig, closed=True), fig)


def _nonexpansive(net: ReactionNetwork, config: AnalysisConfig) -> AnalysisReport:
    if net.rank() == 0:
        return AnalysisReport("non-expansive", YES, _trivial_ball(net), provenance="trivial")
    comps = species_components(net)
    if len(comps) > 1 and config.start_override is None:
        return _nonexpansive_split(net, comps, config)
    last: Certificate | None = None
    first_start = None
    for start, how in _ball_starts(net, config):
        if len(start) != net.n:
            raise ValueError("start vector has the wrong dimension")
        if not linalg.in_span(net.image_basis(), start):
            raise ValueError(f"ball start {show(start)} is not in the stoichiometric subspace")
        cert = saturate(net, start, "ball", config.saturation)
        first_start = first_start or start
        if cert.kind == CertificateKind.UnboundedRay:
            return AnalysisReport("non-expansive", NO, cert, start, provenance=how)
        if cert.kind == CertificateKind.FigureFound and _spans_image(cert.figure.vertices, net):
            fig = BallRep(content_normalize(cert.figure.vertices), net.n)
            return AnalysisReport("non-expansive", YES, replace(cert, figure=fig), start, provenance=how)
        last = cert
    return AnalysisReport("non-expansive", INCONCLUSIVE, last, first_start, provenance="all ball starts")


def _nonexpansive_split(net: ReactionNetwork, comps: list[tuple[int, ...]],
                        config: AnalysisConfig) -> AnalysisReport:
    """Analyze groups of reactions with disjoint species separately; the
    hull of the union of closed balls is closed for the whole network."""
    vertices: list[Vector] = []
    for comp in comps:
        sub = net.subnetwork(comp)
        rep = _nonexpansive(sub, config)
        if rep.verdict != YES:
            rep.certificate = _remap(rep.certificate, comp) if rep.certificate else None
            rep.provenance = f"component {list(comp)}: {rep.provenance}"
            return rep
        vertices.extend(rep.figure.vertices)
    fig = BallRep(tuple(extreme_filter(vertices, "convex")), net.n)
    if closure_check(fig, net):
        raise AssertionError("combined component ball failed its audit")
    cert = Certificate(CertificateKind.FigureFound, SaturationState("ball", fig, closed=True), fig)
    return AnalysisReport("non-expansive", YES, cert, provenance="components")


@dataclass(frozen=True)
class StartChoice:
    vector: Vector
    provenance: str
    outer: tuple[int, ...]
    inner: tuple[int, ...] | None


def _is_nonexpansive(net: ReactionNetwork, config: AnalysisConfig) -> bool:
    sub = replace(config, max_iterations=config.sub_max_iterations, start_override=None)
    return _nonexpansive(net, sub).verdict == YES


def pick_starting_vector(net: ReactionNetwork, config: AnalysisConfig | None = None) -> StartChoice | None:
    """A vector ``v`` such that every cone the network is monotone for
    contains ``v`` or ``-v``."""
    config = config or AnalysisConfig()
    outers = [net.subnetwork(range(net.m))]
    if config.search_outer:
        outers += [s for r in range(net.rank() - 1, 0, -1) for s in enumerate_subnetworks(net, r)
                   if not _is_nonexpansive(s, config)]
    for outer in outers:
        r = outer.rank()
        if r == 0:
            continue
        for inner in enumerate_subnetworks(outer, r - 1):
            if not is_concordant(inner, config.concordance_cap):
                continue
            if not _is_nonexpansive(inner, config):
                continue
            cands = find_start_candidates(outer, inner)
            if cands:
                o = tuple(outer.origin[i] for i in range(outer.m))
                inn = tuple(o[i] for i in inner.origin)
                return StartChoice(cands[0], f"Z-set of subnetwork {list(inn)} inside {list(o)}", o, inn)
    if net.all_reversible:
        v = projection_start(net)
        if v is not None:
            return StartChoice(v, "projection onto reaction hyperplanes", tuple(range(net.m)), None)
    return None


def _cone_ok(cert: Certificate, net: ReactionNetwork) -> bool:
    return (cert.kind == CertificateKind.FigureFound and is_pointed(cert.figure)
            and _spans_image(cert.figure.generators, net))


def _normalized_cone(cert: Certificate, net: ReactionNetwork) -> Certificate:
    fig = ConeRep(tuple(primitive(g) for g in cert.figure.generators), net.n)
    return replace(cert, figure=fig)


def _mirror_exempt(cert: Certificate, net: ReactionNetwork) -> bool:
    if cert.kind == CertificateKind.LineContained:
        return True
    return cert.kind == CertificateKind.ReactionAbsorbed and net.reactions[cert.reaction].reversible


def _monotone_from(net: ReactionNetwork, v: Vector, forced: bool, how: str,
                   config: AnalysisConfig) -> AnalysisReport:
    plus = saturate(net, v, "cone", config.saturation)
    if _cone_ok(plus, net):
        return AnalysisReport("monotone", YES, _normalized_cone(plus, net), v, provenance=how)
    if plus.negative and _mirror_exempt(plus, net):
        return AnalysisReport("monotone", NO if forced else NO_FOR_V, plus, v,
                              provenance=how + "; mirrored certificate covers -v")
    minus = saturate(net, neg(v), "cone", config.saturation)
    if _cone_ok(minus, net):
        return AnalysisReport("monotone", YES, _normalized_cone(minus, net), neg(v), provenance=how + "; from -v")
    if plus.negative and minus.negative:
        return AnalysisReport("monotone", NO if forced else NO_FOR_V, plus, v, provenance=how,
                              mirror_certificate=minus)
    if plus.negative:
        return AnalysisReport("monotone", NO_FOR_V, plus, v, provenance=how, mirror_certificate=minus)
    if minus.negative:
        return AnalysisReport("monotone", NO_FOR_V, minus, neg(v), provenance=how + "; from -v",
                              mirror_certificate=plus)
    return AnalysisReport("monotone", INCONCLUSIVE, plus, v, provenance=how, mirror_certificate=minus)


def analyze_monotone(net: ReactionNetwork, config: AnalysisConfig | None = None) -> AnalysisReport:
    config = config or AnalysisConfig()
    report = _monotone(net, config)
    report.config_echo = config.echo()
    return annotate_strength(report, net)


def _monotone(net: ReactionNetwork, config: AnalysisConfig) -> AnalysisReport:
    if config.start_override is not None:
        v = tuple(Fraction(x) for x in config.start_override)
        if len(v) != net.n:
            raise ValueError("start vector has the wrong dimension")
        return _monotone_from(net, v, False, "override", config)
    comps = species_components(net)
    if len(comps) > 1:
        return _monotone_split(net, comps, config)
    if _nonexpansive(net, config).verdict == YES:
        # no forcing argument is available; look for any proper cone
        tries: list[tuple[Vector, str]] = []
        if net.all_reversible:
            p = projection_start(net)
            if p is not None:
                tries.append((p, "projection onto reaction hyperplanes"))
        for i, g in enumerate(net.gamma):
            tries.append((g, f"reaction vector {i}"))
        for v, how in tries:
            for w, tag in ((v, ""), (neg(v), "; from -v")):
                cert = saturate(net, w, "cone", config.saturation)
                if _cone_ok(cert, net):
                    return AnalysisReport("monotone", YES, _normalized_cone(cert, net), w,
                                          provenance=how + tag + " (network is non-expansive)")
        return AnalysisReport("monotone", INCONCLUSIVE, None,
                              provenance="network is non-expansive and no cone was found")
    choice = pick_starting_vector(net, config)
    if choice is None:
        return AnalysisReport("monotone", INCONCLUSIVE, None, provenance="no starting vector found")
    return _monotone_from(net, choice.vector, True, choice.provenance, config)


def _monotone_split(net: ReactionNetwork, comps: list[tuple[int, ...]],
                    config: AnalysisConfig) -> AnalysisReport:
    """Product of component cones.  A component's negative certificate
    still rules out every cone containing its start, but the forcing
    argument does not carry over to the whole network."""
    gens: list[Vector] = []
    for comp in comps:
        rep = _monotone(net.subnetwork(comp), config)
        if rep.verdict != YES:
            if rep.certificate is not None:
                rep.certificate = _remap(rep.certificate, comp)
            if rep.mirror_certificate is not None:
                rep.mirror_certificate = _remap(rep.mirror_certificate, comp)
            if rep.verdict == NO:
                rep.verdict = NO_FOR_V
            rep.provenance = f"component {list(comp)}: {rep.provenance}"
            return rep
        gens.extend(rep.figure.generators)
    fig = ConeRep(tuple(gens), net.n)
    if closure_check(fig, net):
        raise AssertionError("combined component cone failed its audit")
    cert = Certificate(CertificateKind.FigureFound, SaturationState("cone", fig, closed=True), fig)
    return AnalysisReport("monotone", YES, cert, provenance="components")


def annotate_strength(report: AnalysisReport, net: ReactionNetwork) -> AnalysisReport:
    g = r_graph(net)
    if not g.strongly_connected:
        return report
    report.annotations.add("strongly-connected-R-graph")
    if report.verdict == YES and report.question == "monotone":
        if _spans_image(report.figure.generators, net):
            report.annotations.add("strongly-monotone")
    if report.verdict == YES and report.question == "non-expansive":
        report.annotations.update({"weakly-contractive", "concordant"})
    return report


class UncertifiedFigureError(ValueError):
    def __init__(self, violations):
        self.violations = violations
        super().__init__("figure is not closed under the operations: " + "; ".join(map(str, violations)))


class InternalInconsistencyError(AssertionError):
    pass


@dataclass
class DualTransfer:
    dual: ReactionNetwork
    dual_figure: ConeRep | BallRep  # K* or B*
    transferred: ConeRep | BallRep  # Gamma^T K* or Gamma^T B*
    violations: list


def dual_transfer(net: ReactionNetwork, figure: ConeRep | BallRep) -> DualTransfer:
    """Certificate for the dual network from a certified cone or ball."""
    bad = closure_check(figure, net)
    if bad:
        raise UncertifiedFigureError(bad)
    if isinstance(figure, ConeRep):
        dual = dual_network(net)
        kstar = dual_cone(figure)
        rows = transpose(dual.gamma)  # columns of the expanded Gamma
        images = [primitive(tuple(dot(c, d) for c in rows)) for d in kstar.generators]
        out = ConeRep(tuple(extreme_filter([x for x in images if not is_zero(x)], "conic")), dual.n)
        result = DualTransfer(dual, kstar, out, [])
    else:
        dual = dual_network(net, keep_reversible=True)
        bstar = polar_ball(figure)
        rows = transpose(dual.gamma)
        images = [tuple(dot(c, d) for c in rows) for d in bstar.vertices]
        out = BallRep(tuple(extreme_filter(images, "convex")), dual.n)
        result = DualTransfer(dual, bstar, out, [])
    result.violations = closure_check(result.transferred, dual)
    if result.violations:
        raise InternalInconsistencyError("transferred figure is not closed: " + str(result.violations[0]))
    return result


def candidate_reactions(n: int, lo: int, hi: int) -> Iterator[Reaction]:
    """Reaction vectors with entries in ``lo..hi``: one reversible reaction
    per line, then both irreversible directions."""
    for entries in itertools.product(range(lo, hi + 1), repeat=n):
        if not any(entries):
            continue
        r = Reaction.from_vector(entries, True)
        if _last_positive(r.vector) == r.vector:
            yield r
        yield Reaction.from_vector(entries, False)


class CandidateCapError(RuntimeError):
    pass


def grow_search(seed: ReactionNetwork, coeff_range: tuple[int, int], config: AnalysisConfig | None = None,
                max_candidates: int = 2000) -> list[tuple[ReactionNetwork, ConeRep]]:
    """Greedily append candidate reactions that keep the network monotone."""
    config = config or AnalysisConfig()
    base = analyze_monotone(seed, config)
    if base.verdict != YES:
        raise ValueError(f"seed is not certified monotone (verdict {base.verdict})")
    lo, hi = coeff_range
    accepted = [(seed, base.figure)]
    if lo > hi:
        return accepted
    cands = list(candidate_reactions(seed.n, lo, hi))
    if len(cands) > max_candidates:
        raise CandidateCapError(f"{len(cands)} candidate reactions exceed the cap {max_candidates}")
    net = seed
    for r in cands:
        if any(q.vector == r.vector or (q.reversible and q.vector == neg(r.vector)) for q in net.reactions):
            continue
        ext = ReactionNetwork(net.species, net.reactions + (r,))
        rep = analyze_monotone(ext, config)
        if rep.verdict == YES:
            net = ext
            accepted.append((ext, rep.figure))
    return accepted
