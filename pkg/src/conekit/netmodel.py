"""Reaction networks: parsing, stoichiometry, irreversible expansion, the
dual network and the reaction influence graph (R-graph)."""

from __future__ import annotations

import itertools
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

import networkx as nx

from .exactgeom import linalg
from .exactgeom.rational import Matrix, Vector, transpose


class NetworkError(ValueError):
    """Invalid network text or structure."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class DuplicateReactionWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Species:
    name: str
    index: int


@dataclass(frozen=True)
class Reaction:
    """``sum reactant[i] X_i  ->  sum product[i] X_i`` (``<=>`` if reversible)."""

    reactant: tuple[int, ...]
    product: tuple[int, ...]
    reversible: bool

    def __post_init__(self) -> None:
        if len(self.reactant) != len(self.product):
            raise NetworkError("reactant and product complexes differ in length")
        if any(a < 0 for a in self.reactant + self.product):
            raise NetworkError("complex coefficients must be nonnegative")
        if self.reactant == self.product:
            raise NetworkError("reaction vector is zero")
        for i, (a, b) in enumerate(zip(self.reactant, self.product)):
            if a and b:
                raise NetworkError(f"catalytic reaction: species {i} on both sides")

    # derived data is cached; cached_property writes to the instance dict
    # directly, which a frozen dataclass allows

    @cached_property
    def vector(self) -> Vector:
        return tuple(Fraction(b - a) for a, b in zip(self.reactant, self.product))

    @cached_property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, (a, b) in enumerate(zip(self.reactant, self.product)) if a or b)

    @cached_property
    def kinetic_signs(self) -> tuple[tuple[int, int], ...]:
        """``(j, sign of the reaction vector at j)`` over :attr:`kinetic`."""
        return tuple((j, 1 if self.product[j] > self.reactant[j] else -1) for j in self.kinetic)

    @cached_property
    def kinetic(self) -> tuple[int, ...]:
        """Coordinates whose concentrations the rate may depend on."""
        if self.reversible:
            return tuple(sorted(self.support))
        return tuple(i for i, a in enumerate(self.reactant) if a)

    @classmethod
    def from_vector(cls, v: Sequence, reversible: bool) -> "Reaction":
        ints = []
        for a in v:
            a = Fraction(a)
            if a.denominator != 1:
                raise NetworkError(f"non-integral stoichiometric entry {a}")
            ints.append(int(a))
        return cls(tuple(max(-a, 0) for a in ints), tuple(max(a, 0) for a in ints), reversible)


@dataclass(frozen=True)
class ReactionNetwork:
    species: tuple[Species, ...]
    reactions: tuple[Reaction, ...]
    # indices into the parent network when this is a subnetwork
    origin: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        for i, s in enumerate(self.species):
            if s.index != i:
                raise NetworkError(f"species {s.name!r} has index {s.index}, expected {i}")
        if len({s.name for s in self.species}) != len(self.species):
            raise NetworkError("duplicate species names")
        for r in self.reactions:
            if len(r.reactant) != len(self.species):
                raise NetworkError("reaction dimension does not match species count")

    @property
    def n(self) -> int:
        return len(self.species)

    @property
    def m(self) -> int:
        return len(self.reactions)

    @property
    def gamma(self) -> Matrix:
        return tuple(r.vector for r in self.reactions)

    @property
    def names(self) -> list[str]:
        return [s.name for s in self.species]

    @property
    def all_reversible(self) -> bool:
        return all(r.reversible for r in self.reactions)

    def rank(self) -> int:
        return linalg.rank(self.gamma)

    def image_basis(self) -> list[Vector]:
        return linalg.image_basis(self.gamma, self.n)

    def subnetwork(self, indices: Sequence[int]) -> "ReactionNetwork":
        idx = tuple(indices)
        return ReactionNetwork(self.species, tuple(self.reactions[i] for i in idx), idx)

    def orphans(self) -> list[str]:
        used = set().union(*(r.support for r in self.reactions)) if self.reactions else set()
        return [s.name for s in self.species if s.index not in used]

    @classmethod
    def from_matrix(cls, columns: Sequence[Sequence], reversible: bool | Sequence[bool] = True,
                    names: Sequence[str] | None = None) -> "ReactionNetwork":
        cols = [tuple(c) for c in columns]
        n = len(cols[0]) if cols else len(names or ())
        if names is None:
            names = [chr(ord("A") + i) if n <= 26 else f"X{i + 1}" for i in range(n)]
        flags = [reversible] * len(cols) if isinstance(reversible, bool) else list(reversible)
        species = tuple(Species(name, i) for i, name in enumerate(names))
        return cls(species, tuple(Reaction.from_vector(c, f) for c, f in zip(cols, flags)))


_TOKEN = re.compile(r"\s*(?:(?P<arrow><=>|=>)|(?P<plus>\+)|(?P<num>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<empty>∅))")
_EMPTY_WORDS = {"empty"}


def _tokens(line: str, lineno: int) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(line):
        if line[pos:].strip() == "":
            break
        m = _TOKEN.match(line, pos)
        if not m:
            col = pos + len(line[pos:]) - len(line[pos:].lstrip()) + 1
            raise NetworkError(f"unexpected character {line[col - 1]!r}", lineno, col)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    return out


def _complex(toks: list[tuple[str, str, int]], lineno: int, endcol: int) -> list[tuple[str, int, int]]:
    """Parse one side into (name, coefficient, column) terms."""
    if not toks:
        raise NetworkError("empty complex (write 0 for the zero complex)", lineno, endcol)
    if len(toks) == 1 and (toks[0][0] == "empty" or toks[0][1] == "0"
                           or (toks[0][0] == "ident" and toks[0][1] in _EMPTY_WORDS)):
        return []
    terms = []
    i = 0
    while True:
        coef = 1
        kind, text, col = toks[i] if i < len(toks) else ("end", "", endcol)
        if kind == "num":
            coef = int(text)
            if coef == 0:
                raise NetworkError("zero coefficient", lineno, col)
            i += 1
            kind, text, col = toks[i] if i < len(toks) else ("end", "", endcol)
        if kind != "ident" or text in _EMPTY_WORDS:
            raise NetworkError(f"expected species name, found {text or 'end of side'!r}", lineno, col)
        terms.append((text, coef, col))
        i += 1
        if i == len(toks):
            return terms
        kind, text, col = toks[i]
        if kind != "plus":
            raise NetworkError(f"expected '+', found {text!r}", lineno, col)
        i += 1


_DIRECTIVE = re.compile(r"\s*species\s*:(.*)$")
_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*$")


def parse_network(text: str, species: Sequence[str] | None = None) -> ReactionNetwork:
    """Parse one reaction per line, e.g. ``A + B <=> 2C`` or ``A => 0``.

    Species are indexed by first appearance unless an order is fixed by
    ``species`` or by a ``species: A B C`` line preceding the reactions.
    ``#`` starts a comment.
    """
    names: list[str] = []
    index: dict[str, int] = {}
    raw: list[tuple[dict[int, int], dict[int, int], bool, int]] = []

    def declare(name: str, lineno: int | None) -> None:
        if not _NAME.match(name) or name in _EMPTY_WORDS:
            raise NetworkError(f"bad species name {name!r}", lineno, 1 if lineno else None)
        if name in index:
            raise NetworkError(f"species {name!r} declared twice", lineno, 1 if lineno else None)
        index[name] = len(names)
        names.append(name)

    for name in species or ():
        declare(name, None)
    for lineno, full in enumerate(text.splitlines(), start=1):
        line = full.split("#", 1)[0]
        if not line.strip():
            continue
        d = _DIRECTIVE.match(line)
        if d:
            if raw:
                raise NetworkError("species declaration must precede the reactions", lineno, 1)
            for name in d.group(1).replace(",", " ").split():
                declare(name, lineno)
            continue
        toks = _tokens(line, lineno)
        arrows = [k for k, t in enumerate(toks) if t[0] == "arrow"]
        if len(arrows) != 1:
            col = toks[arrows[1]][2] if len(arrows) > 1 else len(line.rstrip()) + 1
            raise NetworkError("expected exactly one arrow '=>' or '<=>'", lineno, col)
        k = arrows[0]
        acol = toks[k][2]
        sides = []
        for part, endcol in ((toks[:k], acol), (toks[k + 1:], len(line.rstrip()) + 1)):
            coeffs: dict[int, int] = {}
            for name, coef, _ in _complex(part, lineno, endcol):
                if name not in index:
                    index[name] = len(names)
                    names.append(name)
                coeffs[index[name]] = coeffs.get(index[name], 0) + coef
            sides.append(coeffs)
        both = sorted(set(sides[0]) & set(sides[1]))
        if both:
            raise NetworkError(f"catalytic reaction: species {names[both[0]]!r} appears on both sides",
                               lineno, 1)
        if not sides[0] and not sides[1]:
            raise NetworkError("reaction between two zero complexes", lineno, acol)
        raw.append((sides[0], sides[1], toks[k][1] == "<=>", lineno))
    n = len(names)
    used = set().union(*(set(a) | set(b) for a, b, _, _ in raw)) if raw else set()
    unused = [names[i] for i in range(n) if i not in used]
    if unused:
        raise NetworkError(f"species {unused[0]!r} is declared but takes part in no reaction")
    reactions = []
    seen: dict[Vector, int] = {}
    for left, right, rev, lineno in raw:
        r = Reaction(tuple(left.get(i, 0) for i in range(n)),
                     tuple(right.get(i, 0) for i in range(n)), rev)
        key = r.vector
        if key in seen:
            warnings.warn(f"line {lineno}: reaction duplicates the one on line {seen[key]}",
                          DuplicateReactionWarning, stacklevel=2)
        else:
            seen[key] = lineno
        reactions.append(r)
    return ReactionNetwork(tuple(Species(s, i) for i, s in enumerate(names)), tuple(reactions))


def _side(coeffs: Sequence[int], names: Sequence[str]) -> str:
    terms = [(f"{c}{names[i]}" if c != 1 else names[i]) for i, c in enumerate(coeffs) if c]
    return " + ".join(terms) if terms else "0"


def render_reaction(r: Reaction, names: Sequence[str]) -> str:
    arrow = "<=>" if r.reversible else "=>"
    return f"{_side(r.reactant, names)} {arrow} {_side(r.product, names)}"


def _first_appearance(net: ReactionNetwork) -> list[int]:
    order: list[int] = []
    for r in net.reactions:
        for side in (r.reactant, r.product):
            for i, c in enumerate(side):
                if c and i not in order:
                    order.append(i)
    return order


def render(net: ReactionNetwork) -> str:
    """Inverse of :func:`parse_network`; a species line is emitted when the
    species order differs from first appearance."""
    body = "\n".join(render_reaction(r, net.names) for r in net.reactions) + "\n"
    if _first_appearance(net) != list(range(net.n)):
        body = "species: " + " ".join(net.names) + "\n" + body
    return body


def stoichiometric_matrix(net: ReactionNetwork) -> Matrix:
    return net.gamma


def to_irreversible(net: ReactionNetwork) -> ReactionNetwork:
    out: list[Reaction] = []
    for r in net.reactions:
        if r.reversible:
            out.append(Reaction(r.reactant, r.product, False))
            out.append(Reaction(r.product, r.reactant, False))
        else:
            out.append(r)
    return ReactionNetwork(net.species, tuple(out))


def dual_network(net: ReactionNetwork, keep_reversible: bool = False) -> ReactionNetwork:
    """Network with stoichiometric matrix the transpose of ``net``'s.

    Reversible reactions are first split in two.  With ``keep_reversible``
    and an all-reversible ``net`` the split is skipped and the result is
    reversible (used for norm balls, which are symmetric anyway).
    """
    if keep_reversible and net.all_reversible:
        base, rev = net, True
    else:
        base, rev = to_irreversible(net), False
    rows = transpose(base.gamma)
    if any(all(a == 0 for a in row) for row in rows):
        raise NetworkError("a species never changes, so the dual has a zero reaction")
    names = [f"S{i + 1}" for i in range(base.m)]
    return ReactionNetwork.from_matrix(rows, rev, names)


@dataclass(frozen=True)
class RGraph:
    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    scc_count: int
    connected: bool

    @property
    def strongly_connected(self) -> bool:
        return self.scc_count == 1


def r_graph(net: ReactionNetwork) -> RGraph:
    g = nx.DiGraph()
    g.add_nodes_from(range(net.m))
    for i, ri in enumerate(net.reactions):
        for j, rj in enumerate(net.reactions):
            if i != j and ri.support & set(rj.kinetic):
                g.add_edge(i, j)
    scc = nx.number_strongly_connected_components(g) if net.m else 0
    connected = net.m > 0 and nx.is_weakly_connected(g)
    return RGraph(tuple(g.nodes), tuple(sorted(g.edges)), scc, connected)


def species_components(net: ReactionNetwork) -> list[tuple[int, ...]]:
    """Groups of reactions that share no species with other groups."""
    g = nx.Graph()
    g.add_nodes_from(range(net.m))
    owner: dict[int, int] = {}
    for i, r in enumerate(net.reactions):
        for s in r.support:
            if s in owner:
                g.add_edge(owner[s], i)
            else:
                owner[s] = i
    return sorted(tuple(sorted(c)) for c in nx.connected_components(g))


def enumerate_subnetworks(net: ReactionNetwork, target_rank: int) -> Iterator[ReactionNetwork]:
    """Reaction subsets of the given rank, largest first; within a size,
    subsets favouring later reactions come first."""
    if target_rank < 0 or target_rank > net.rank():
        raise ValueError("target_rank out of range")
    for size in range(net.m, target_rank - 1, -1):
        for combo in itertools.combinations(reversed(range(net.m)), size):
            idx = tuple(sorted(combo))
            if linalg.rank(tuple(net.reactions[i].vector for i in idx)) == target_rank:
                yield net.subnetwork(idx)
