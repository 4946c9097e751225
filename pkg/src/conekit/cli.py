"""``conekit`` command line interface.

Exit status: 0 for determinate verdicts, 2 when any verdict is
inconclusive, 1 for input errors or refused requests.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .builder import CertificateKind, figure_vectors
from .exactgeom.polyhedra import BallRep, ConeRep
from .exactgeom.rational import Vector, fmt, from_json, show, to_json
from .netmodel import DuplicateReactionWarning, NetworkError, ReactionNetwork, parse_network, render, render_reaction
from .orchestrate import (
    INCONCLUSIVE,
    AnalysisConfig,
    AnalysisReport,
    CandidateCapError,
    UncertifiedFigureError,
    analyze_monotone,
    analyze_nonexpansive,
    dual_transfer,
    grow_search,
)

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2


class InputError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    max_iterations: int = 50
    snap_max_denominator: int = 12
    snap_max_distance: Fraction = Fraction(1, 10**6)
    start_override: Vector | None = None
    output: str = "text"
    seed_order: str = "canonical"

    def __post_init__(self) -> None:
        if self.max_iterations < 1 or self.snap_max_denominator < 1 or self.snap_max_distance <= 0:
            raise InputError("iteration and snapping caps must be positive")

    def analysis(self, net: ReactionNetwork) -> AnalysisConfig:
        if self.start_override is not None and len(self.start_override) != net.n:
            raise InputError(f"--start has {len(self.start_override)} entries but the network has {net.n} species")
        return AnalysisConfig(self.max_iterations, self.snap_max_denominator, self.snap_max_distance,
                              self.start_override)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _vector(text: str) -> Vector:
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    parts = [p for p in body.replace(" ", ",").split(",") if p]
    if not parts:
        raise argparse.ArgumentTypeError("empty vector")
    return tuple(_rational(p) for p in parts)


def _range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def load_network(path: str) -> ReactionNetwork:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{path}: no such file")
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", DuplicateReactionWarning)
            net = parse_network(p.read_text(encoding="utf-8"))
        for w in caught:
            print(f"{path}: warning: {w.message}", file=sys.stderr)
    except NetworkError as e:
        raise InputError(f"{path}: {e}")
    if not net.reactions:
        raise InputError(f"{path}: no reactions")
    return net


def load_figure(path: str, net: ReactionNetwork, ball: bool) -> ConeRep | BallRep:
    """Columns as a JSON array, a ``{"cone"|"ball": [...]}`` object, or an
    analysis report whose certificate carries a figure."""
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{path}: no such file")
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON: {e}")
    if isinstance(data, dict) and "reports" in data:
        yes = [r for r in data["reports"] if r.get("verdict") == "yes"]
        if not yes:
            raise InputError(f"{path}: report contains no certified figure")
        data = yes[0]
    if isinstance(data, dict) and "certificate" in data:
        ball = data.get("question") == "non-expansive"
        data = data["certificate"]["figure"]
    elif isinstance(data, dict):
        if "ball" in data or "vertices" in data:
            ball, data = True, data.get("ball", data.get("vertices"))
        else:
            data = data.get("cone", data.get("generators"))
    if not isinstance(data, list) or not data:
        raise InputError(f"{path}: expected a nonempty list of columns")
    try:
        cols = [from_json(c) for c in data]
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise InputError(f"{path}: bad rational entry: {e}")
    if any(len(c) != net.n for c in cols):
        raise InputError(f"{path}: columns must have {net.n} entries")
    return BallRep(tuple(cols), net.n) if ball else ConeRep(tuple(cols), net.n)


def _headline(rep: AnalysisReport, net: ReactionNetwork) -> str:
    cert = rep.certificate
    label = {"yes": "YES", "no": "NO", "no-for-cones-containing-v": "NO for cones containing the start",
             "inconclusive": "INCONCLUSIVE"}[rep.verdict]
    detail = ""
    if cert is not None:
        if cert.kind == CertificateKind.UnboundedRay:
            detail = f"unbounded ray, α={fmt(cert.alpha)}"
        elif cert.kind == CertificateKind.ReactionAbsorbed:
            detail = f"reaction {show(net.reactions[cert.reaction].vector)} absorbed"
        elif cert.kind == CertificateKind.LineContained:
            detail = f"cone contains the line through {show(cert.absorbed_vector())}"
        elif cert.kind == CertificateKind.FigureFound:
            fig = cert.figure
            detail = (f"cone with {len(fig.generators)} generators" if isinstance(fig, ConeRep)
                      else f"ball with {len(fig.vertices)} vertices")
        else:
            detail = cert.summary()
    elif rep.provenance:
        detail = rep.provenance
    return f"{rep.question}: {label}" + (f" ({detail})" if detail else "")


def format_report(rep: AnalysisReport, net: ReactionNetwork) -> str:
    lines = [_headline(rep, net)]
    if rep.start_vector is not None:
        lines.append(f"  start {show(rep.start_vector)} [{rep.provenance}]")
    cert = rep.certificate
    if cert is not None:
        st = cert.state
        if cert.kind == CertificateKind.FigureFound:
            what = "generators" if isinstance(cert.figure, ConeRep) else "vertices"
            lines.append(f"  {what}: " + " ".join(show(v) for v in figure_vectors(cert.figure)))
        elif cert.kind == CertificateKind.UnboundedRay:
            lines.append("  chain: " + " -> ".join(show(st.nodes[i].vector) for i in st.chain(cert.descendant)))
            lines.append(f"  {show(st.nodes[cert.descendant].vector)} = {fmt(cert.alpha)} * "
                         f"{show(st.nodes[cert.ancestor].vector)}")
        elif cert.kind in (CertificateKind.ReactionAbsorbed, CertificateKind.LineContained):
            gens = figure_vectors(cert.figure)
            terms = " + ".join(f"{fmt(c)}*{show(g)}" for c, g in zip(cert.coefficients, gens) if c)
            lines.append(f"  {show(cert.absorbed_vector())} = {terms}")
            lines.append("  cone: " + " ".join(show(g) for g in gens))
        elif cert.kind == CertificateKind.Inconclusive:
            lines.append(f"  state: {cert.summary()}")
    if rep.annotations:
        lines.append("  annotations: " + ", ".join(sorted(rep.annotations)))
    return "\n".join(lines)


def cmd_analyze(args, cfg: CliConfig) -> int:
    net = load_network(args.path)
    acfg = cfg.analysis(net)
    questions = []
    if args.non_expansive or args.both:
        questions.append(analyze_nonexpansive)
    if args.monotone or args.both or not questions:
        questions.append(analyze_monotone)
    try:
        reports = [q(net, acfg) for q in questions]
    except ValueError as e:
        raise InputError(str(e))
    if cfg.output == "json":
        print(json.dumps({"network": render(net).splitlines(), "species": net.names,
                          "reports": [r.to_dict() for r in reports]}, indent=2))
    else:
        for r in reports:
            print(format_report(r, net))
    return EXIT_INCONCLUSIVE if any(r.verdict == INCONCLUSIVE for r in reports) else EXIT_OK


def cmd_dualize(args, cfg: CliConfig) -> int:
    net = load_network(args.path)
    fig = load_figure(args.cone, net, args.ball)
    try:
        res = dual_transfer(net, fig)
    except UncertifiedFigureError as e:
        print("refusing to dualize: the figure is not certified for this network", file=sys.stderr)
        for v in e.violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_INPUT
    cone = isinstance(fig, ConeRep)
    star, moved = ("K*", "Gamma^T K*") if cone else ("B*", "Gamma^T B*")
    if cfg.output == "json":
        print(json.dumps({
            "dual_network": render(res.dual).splitlines(),
            "dual_figure": [to_json(v) for v in figure_vectors(res.dual_figure)],
            "transferred": [to_json(v) for v in figure_vectors(res.transferred)],
            "kind": "cone" if cone else "ball",
            "verified": not res.violations,
        }, indent=2))
    else:
        print("dual network:")
        for r in res.dual.reactions:
            print("  " + render_reaction(r, res.dual.names))
        print(f"{star}: " + " ".join(show(v) for v in figure_vectors(res.dual_figure)))
        print(f"{moved}: " + " ".join(show(v) for v in figure_vectors(res.transferred)))
        print("verification: closed under the dual network's operations")
    return EXIT_OK


def cmd_grow(args, cfg: CliConfig) -> int:
    net = load_network(args.path)
    acfg = cfg.analysis(net)
    seed = analyze_monotone(net, acfg)
    if seed.verdict != "yes":
        print(f"seed rejected: {_headline(seed, net)}", file=sys.stderr)
        if seed.certificate is not None:
            print(format_report(seed, net), file=sys.stderr)
        return EXIT_INPUT
    lo, hi = args.range
    try:
        accepted = grow_search(net, (lo, hi), acfg, args.max_candidates)
    except CandidateCapError as e:
        raise InputError(str(e))
    out = []
    for k, (ext, cone) in enumerate(accepted):
        if cfg.output == "json":
            out.append({"reactions": render(ext).splitlines(), "cone": [to_json(g) for g in cone.generators]})
        else:
            added = "seed" if k == 0 else render_reaction(ext.reactions[-1], ext.names)
            print(f"[{k}] {added}: cone " + " ".join(show(g) for g in cone.generators))
    if cfg.output == "json":
        print(json.dumps({"accepted": out, "count": len(accepted) - 1}, indent=2))
    else:
        print(f"{len(accepted) - 1} reactions added; final network:")
        for r in accepted[-1][0].reactions:
            print("  " + render_reaction(r, net.names))
    return EXIT_OK


def cmd_fixtures(args, cfg: CliConfig) -> int:
    from .fixtures import ALL
    from .builder import closure_check

    failed = 0
    for f in ALL:
        net = f.network()
        print(f"{f.name}:")
        for kind, cols in (("cone", f.cone), ("ball", f.ball)):
            if cols is None:
                continue
            fig = ConeRep.of(cols, net.n) if kind == "cone" else BallRep.of(cols, net.n)
            bad = closure_check(fig, net)
            status = "closed" if not bad else f"NOT closed ({bad[0]})"
            failed += bool(bad)
            print(f"  published {kind} {status}")
        for q in (analyze_nonexpansive, analyze_monotone):
            rep = q(net, cfg.analysis(net))
            print("  " + _headline(rep, net))
    return EXIT_OK if not failed else EXIT_INCONCLUSIVE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--max-iterations", type=_positive_int, default=50)
    common.add_argument("--snap-denominator", type=_positive_int, default=12)
    common.add_argument("--snap-distance", type=_rational, default=Fraction(1, 10**6))
    common.add_argument("--start", type=_vector, default=None, help='start vector, e.g. "[1/2,0,-1]"')

    parser = argparse.ArgumentParser(prog="conekit", description="Certify monotonicity or non-expansivity "
                                     "of chemical reaction networks with exact arithmetic.")
    sub = parser.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", parents=[common], help="decide monotonicity and/or non-expansivity")
    a.add_argument("path")
    g = a.add_mutually_exclusive_group()
    g.add_argument("--monotone", action="store_true")
    g.add_argument("--non-expansive", action="store_true")
    g.add_argument("--both", action="store_true")
    a.set_defaults(func=cmd_analyze)
    d = sub.add_parser("dualize", parents=[common], help="transfer a certified cone or ball to the dual network")
    d.add_argument("path")
    d.add_argument("--cone", required=True, metavar="FILE", help="JSON columns of the certified figure")
    d.add_argument("--ball", action="store_true", help="read a bare column list as ball vertices")
    d.set_defaults(func=cmd_dualize)
    gr = sub.add_parser("grow", parents=[common], help="greedily add reactions that keep the network monotone")
    gr.add_argument("path")
    gr.add_argument("--range", type=_range, default=(-1, 1), metavar="a..b")
    gr.add_argument("--max-candidates", type=_positive_int, default=2000)
    gr.set_defaults(func=cmd_grow)
    fx = sub.add_parser("fixtures", parents=[common], help="audit the bundled published examples")
    fx.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # let "--range -2..2" through even though the value starts with '-'
    for k in range(len(argv) - 1):
        if argv[k] == "--range":
            argv[k:k + 2] = [f"--range={argv[k + 1]}"]
            break
    args = parser.parse_args(argv)
    try:
        cfg = CliConfig(args.max_iterations, args.snap_denominator, args.snap_distance, args.start, args.output)
        return args.func(args, cfg)
    except InputError as e:
        print(f"conekit: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
