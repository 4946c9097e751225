import json
from fractions import Fraction as F

import pytest

from conekit import fixtures
from conekit.builder import (
    Certificate,
    CertificateKind,
    DerivationNode,
    SaturationConfig,
    SaturationState,
    apply_operation,
    closure_check,
    detect_absorbed,
    detect_unbounded,
    rational_snap,
    saturate,
)
from conekit.exactgeom import BallRep, ConeRep
from conekit.exactgeom.rational import combine, parallel_ratio, same_ray, vec
from conekit.netmodel import Reaction, ReactionNetwork, parse_network

from oracles import ray_set, same_cone, vecs

K = CertificateKind


def rev(v):
    return Reaction.from_vector(v, True)


@pytest.mark.parametrize("v, r, expected", [
    ([-2, 0, 1], [-1, -1, 1], [([0, 2, -1], "1", 2)]),
    ([0, 2, -1], [-2, 0, 1], [([-2, 2, 0], "2", 1)]),
    ([-2, 2, 0], [-1, -1, 1], [([-4, 0, 2], "3a", 2), ([0, 4, -2], "3b", 2)]),
    ([0, 4, -2], [-1, 1, 0], [([4, 0, -2], "1", 4)]),
])
def test_apply_operation_examples(v, r, expected):
    got = apply_operation(vec(v), rev(r))
    assert sorted(got) == sorted((vec(w), op, F(a)) for w, op, a in expected)


def test_apply_operation_q2_is_empty():
    assert apply_operation(vec([0, 0, 5]), Reaction.from_vector([-1, 1, 0], False)) == []


def test_mixed_outputs_follow_orientation():
    r = rev([-1, -1, 1])
    plus = apply_operation(vec([-2, 2, 0]), r)
    minus = apply_operation(vec([2, -2, 0]), r)
    assert [tuple(-x for x in w) for w, _, _ in plus] == [w for w, _, _ in minus]


def test_saturate_example1_ball():
    cert = saturate(fixtures.EX1.network(), vec([-2, 0, 1]), "ball")
    assert cert.kind == K.UnboundedRay and cert.alpha == 2
    chain = [cert.state.nodes[i].vector for i in cert.state.chain(cert.descendant)]
    assert chain == vecs(fixtures.EX1.extra["ball_chain"])
    assert cert.state.nodes[cert.ancestor].vector == vec([-2, 0, 1])


def test_saturate_example3_cone():
    cert = saturate(fixtures.EX3.network(), vec([-2, 1, 1]), "cone")
    assert cert.kind == K.FigureFound
    assert ray_set(cert.figure.generators) == ray_set(vecs(fixtures.EX3.cone))
    assert closure_check(cert.figure, fixtures.EX3.network()) == []


def test_saturate_example2_ball():
    cert = saturate(fixtures.EX2.network(), vec([0, 0, 1, 0]), "ball")
    assert cert.kind == K.UnboundedRay and cert.alpha == 2
    assert cert.state.nodes[cert.descendant].vector == vec([0, 0, 2, 0])
    assert cert.state.nodes[cert.ancestor].vector == vec([0, 0, 1, 0])


def test_saturate_example1_cone_absorbs():
    net = fixtures.EX1.network()
    cert = saturate(net, vec([-1, 3, -1]), "cone")
    assert cert.kind == K.ReactionAbsorbed and cert.reaction == 0
    target = cert.absorbed_vector()
    assert same_ray(target, vec([1, 1, -1])) or same_ray(target, vec([-1, -1, 1]))
    used = [g for c, g in zip(cert.coefficients, cert.figure.generators) if c]
    assert len(used) >= 2 and not any(same_ray(g, target) for g in used)


def test_saturate_rejects_bad_start():
    net = fixtures.EX1.network()
    with pytest.raises(ValueError):
        saturate(net, vec([0, 0, 0]), "cone")
    with pytest.raises(ValueError):
        saturate(net, vec([1, 0]), "cone")
    with pytest.raises(ValueError):
        saturate(net, vec([1, 0, 0]), "disc")


def test_saturate_inconclusive_when_budget_is_tiny():
    cert = saturate(fixtures.ADD2.network(), vec([-1, 0, 0, 0]), "cone", SaturationConfig(max_iterations=2))
    assert cert.kind == K.Inconclusive and cert.state.snapped
    assert cert.to_dict()["state"]["iterations"] == 2


def test_saturate_is_deterministic():
    net = fixtures.EX1.network()
    a = saturate(net, vec([-2, 0, 1]), "ball").to_dict()
    b = saturate(net, vec([-2, 0, 1]), "ball").to_dict()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def _state(vectors_and_parents):
    nodes = [DerivationNode(vec(v), p) for v, p in vectors_and_parents]
    return SaturationState("ball", BallRep((), len(nodes[0].vector)), nodes)


def test_detect_unbounded_cases():
    st = _state([([1, 0], None), ([0, 1], 0), ([2, 0], 1)])
    assert detect_unbounded(st, [2]) == (0, 2, 2)
    # 2u with u present but not an ancestor
    st = _state([([1, 0], None), ([0, 1], None), ([2, 0], 1)])
    assert detect_unbounded(st, [2]) is None
    # a cycle back to the same vector
    st = _state([([1, 0], None), ([0, 1], 0), ([1, 0], 1)])
    assert detect_unbounded(st, [2]) is None


def test_detect_absorbed_cases():
    hit = detect_absorbed(ConeRep.of([[4, 0, -2], [0, 4, -2]]), parse_network("A + B <=> C"))
    assert hit is not None
    i, sign, w = hit
    assert i == 0 and sign == -1 and w == [F(1, 4), F(1, 4)]
    assert detect_absorbed(ConeRep.of([[0, 1, -1], [-1, 0, 1]]), ReactionNetwork.from_matrix([[0, -1, 1]])) is None
    assert detect_absorbed(ConeRep.of([[1, 0], [0, 1]]), ReactionNetwork.from_matrix([[-1, 0]], False)) is None


def test_closure_check_examples():
    ex2 = fixtures.EX2.network()
    published = ConeRep.of(fixtures.EX2.cone)
    violations = closure_check(published, ex2)
    # the printed cone misses [0,2,-2,2]; see the fixture notes
    assert [v.output for v in violations] == [vec([0, 2, -2, 2])]
    octa = BallRep.of(fixtures.DUALITY.ball)
    assert closure_check(octa, fixtures.DUALITY.network()) == []
    bad = closure_check(ConeRep.of([[-2, 0, 1]]), fixtures.EX1.network())
    assert bad and bad[0].output == vec([0, 2, -1]) and bad[0].reaction == 0


def test_rational_snap_examples():
    v = (F(1, 2) + F(1, 10**9), F(1, 2))
    assert rational_snap([v], 2, F(1, 1000)) == [vec(["1/2", "1/2"])]
    assert rational_snap([vec([3, -1])], 5, F(1, 1000)) == [vec([3, -1])]
    third = vec(["1/3", "2/3"])
    assert rational_snap([third], 2, F(1, 1000)) == [third]
    # nearest rounding catches values just below a lattice point
    assert rational_snap([vec([1 - F(1, 10**9)])], 1, F(1, 1000)) == [vec([1])]
    with pytest.raises(ValueError):
        rational_snap([third], 0, F(1))


def test_certificate_serialization_ball():
    cert = saturate(fixtures.EX1.network(), vec([-2, 0, 1]), "ball")
    d = cert.to_dict()
    assert d["kind"] == "UnboundedRay" and d["witness"]["alpha"] == "2"
    assert [n["vector"] for n in d["trace"]] == [["-2", "0", "1"], ["0", "2", "-1"], ["-2", "2", "0"], ["-4", "0", "2"]]
    for k, n in enumerate(d["trace"]):
        assert n["parent_index"] == (None if k == 0 else k - 1)


def test_trace_replays_operations():
    net = fixtures.EX1.network()
    cert = saturate(net, vec([-1, 3, -1]), "cone")
    st = cert.state
    for node in st.nodes[1:]:
        parent = st.nodes[node.parent].vector
        r = net.reactions[node.via_reaction]
        assert (node.vector, node.via_operation, node.alpha) in apply_operation(parent, r)


def test_snapping_recovers_published_cone_for_add2():
    net = fixtures.ADD2.network()
    cfg = SaturationConfig(max_iterations=20, snap_max_distance=F(1, 20))
    cert = saturate(net, vec([-1, 0, 0, 0]), "cone", cfg)
    assert cert.kind == K.FigureFound and cert.state.snapped
    assert same_cone(cert.figure.generators, vecs(fixtures.ADD2.cone))
