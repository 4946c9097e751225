import warnings

import pytest

from conekit import fixtures
from conekit.netmodel import (
    DuplicateReactionWarning,
    NetworkError,
    Reaction,
    ReactionNetwork,
    dual_network,
    enumerate_subnetworks,
    parse_network,
    r_graph,
    render,
    species_components,
    stoichiometric_matrix,
    to_irreversible,
)


def cols(net):
    return [[int(a) for a in c] for c in stoichiometric_matrix(net)]


def test_parse_example1():
    net = parse_network("A + B <=> C\nA <=> B\n2A <=> C")
    assert net.names == ["A", "B", "C"]
    assert cols(net) == [[-1, -1, 1], [-1, 1, 0], [-2, 0, 1]]
    assert net.all_reversible


def test_parse_empty_complex_variants():
    for text in ("A <=> 0", "A <=> ∅", "A <=> empty"):
        net = parse_network(text)
        assert cols(net) == [[-1]] and net.reactions[0].reversible


def test_parse_comments_and_blank_lines():
    net = parse_network("# header\n\nA => B  # trailing\n")
    assert cols(net) == [[-1, 1]] and not net.reactions[0].reversible


def test_catalytic_rejected_naming_species():
    with pytest.raises(NetworkError, match="'A'"):
        parse_network("A => A + B")


def test_syntax_error_location():
    with pytest.raises(NetworkError) as e:
        parse_network("A => B\nA + => C")
    assert e.value.line == 2 and e.value.column is not None
    with pytest.raises(NetworkError) as e:
        parse_network("A => B => C")
    assert e.value.line == 1


def test_duplicates_warn_but_are_kept():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        net = parse_network("A => B\nA => B\n")
    assert net.m == 2
    assert any(issubclass(x.category, DuplicateReactionWarning) for x in w)


def test_species_directive_fixes_order():
    net = fixtures.EX2.network()
    assert net.names == ["A", "B", "C", "D"]
    assert cols(net) == [[-1, 1, 0, 1], [0, -1, 1, 0], [0, 0, -1, 1], [0, 0, -1, 0]]
    with pytest.raises(NetworkError, match="takes part in no reaction"):
        parse_network("species: A B Z\nA => B")


def test_stoichiometric_examples():
    assert cols(parse_network("A => B")) == [[-1, 1]]
    assert cols(fixtures.EX3.network()) == [[-1, -1, 2], [-1, 0, 1], [0, -1, 1]]


def test_reaction_invariants():
    with pytest.raises(NetworkError):
        Reaction((1, 0), (1, 0), False)
    with pytest.raises(NetworkError):
        Reaction((1, 1), (0, 2), False)
    r = Reaction.from_vector([-1, 0, 2], False)
    assert r.kinetic == (0,)
    assert Reaction.from_vector([-1, 0, 2], True).kinetic == (0, 2)


def test_to_irreversible():
    add1 = fixtures.ADD1.network()
    irr = to_irreversible(add1)
    assert cols(irr) == [[-13, 11, 7], [13, -11, -7], [7, -9, 0], [-2, 1, 2]]
    assert not any(r.reversible for r in irr.reactions)
    single = to_irreversible(parse_network("13A <=> 11B + 7C"))
    assert cols(single) == [[-13, 11, 7], [13, -11, -7]]
    already = parse_network("A => B\nB => C")
    assert to_irreversible(already) == already


def test_dual_network_additional_example_1():
    du = dual_network(fixtures.ADD1.network())
    assert du.names == ["S1", "S2", "S3", "S4"]
    assert cols(du) == [[-13, 13, 7, -2], [11, -11, -9, 1], [7, -7, 0, 2]]
    assert not any(r.reversible for r in du.reactions)
    assert render(du).splitlines()[1] == "13S1 + 2S4 => 13S2 + 7S3"


def test_dual_network_duality_example():
    du = dual_network(fixtures.DUALITY.network(), keep_reversible=True)
    assert cols(du) == [[-1, 1, 0, 1], [1, 1, 1, 0], [0, 0, -1, -1]]


def test_dual_of_dual_matches_irreversible_matrix():
    for fx in fixtures.ALL:
        net = fx.network()
        try:
            dd = dual_network(dual_network(net))
        except NetworkError:
            continue
        assert cols(dd) == cols(to_irreversible(net))


def test_r_graph():
    assert r_graph(fixtures.EX1.network()).strongly_connected
    split = r_graph(fixtures.SPLIT.network())
    assert split.edges == () and split.scc_count == 2 and not split.connected
    assert r_graph(parse_network("A => B")).strongly_connected


def test_r_graph_irreversible_targets_use_reactants():
    g = r_graph(parse_network("A => B\nB => C"))
    assert g.edges == ((0, 1),)
    assert not g.strongly_connected


def test_species_components():
    assert species_components(fixtures.SPLIT.network()) == [(0,), (1,)]
    assert species_components(fixtures.EX1.network()) == [(0, 1, 2)]


def test_enumerate_subnetworks():
    ex1 = fixtures.EX1.network()
    subs = [s.gamma for s in enumerate_subnetworks(ex1, 1)]
    assert (ex1.gamma[2],) in subs
    ex2 = fixtures.EX2.network()
    subs = [tuple(tuple(int(a) for a in c) for c in s.gamma) for s in enumerate_subnetworks(ex2, 3)]
    assert ((0, -1, 1, 0), (0, 0, -1, 1), (0, 0, -1, 0)) in subs
    sizes = [s.m for s in enumerate_subnetworks(ex2, 3)]
    assert sizes == sorted(sizes, reverse=True)
    assert [s.m for s in enumerate_subnetworks(ex1, 0)] == [0]
    with pytest.raises(ValueError):
        list(enumerate_subnetworks(ex1, 3))


def test_render_round_trip_fixtures():
    for fx in fixtures.ALL:
        net = fx.network()
        assert parse_network(render(net)) == net


def test_from_matrix():
    net = ReactionNetwork.from_matrix([[-1, 1], [0, -1]], [True, False])
    assert net.names == ["A", "B"]
    assert render(net) == "A <=> B\nB => 0\n"
