import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from conekit.exactgeom.lp import min_cost_solution
from conekit.exactgeom import (
    BallRep,
    ConeRep,
    LinearSystem,
    conic_member,
    conic_witness,
    dual_cone,
    extreme_filter,
    extreme_filter_lp,
    facets,
    feasible,
    hull_member,
    image_kernel_basis,
    is_pointed,
    left_kernel,
    polar_ball,
    rank,
    sign_feasible,
    sign_witness,
)
from conekit.exactgeom.rational import (
    combine,
    content_normalize,
    dot,
    from_json,
    mat,
    orient,
    parallel_ratio,
    primitive,
    same_ray,
    to_json,
    vec,
)

import oracles
from oracles import in_cone, in_hull, ray_set, same_cone, same_hull, vecs

EX1 = mat([[-1, -1, 1], [-1, 1, 0], [-2, 0, 1]])
EX3 = mat([[-1, -1, 2], [-1, 0, 1], [0, -1, 1]])


# rational helpers

def test_primitive_and_rays():
    assert primitive(vec(["1/2", "-3/4", 0])) == vec([2, -3, 0])
    assert same_ray(vec([4, 0, -2]), vec([2, 0, -1]))
    assert not same_ray(vec([4, 0, -2]), vec([-2, 0, 1]))
    assert parallel_ratio(vec([-4, 0, 2]), vec([-2, 0, 1])) == 2
    assert parallel_ratio(vec([1, 1]), vec([1, 2])) is None


def test_content_normalize_keeps_shape():
    out = content_normalize([vec(["1/2", 0]), vec([0, "3/2"])])
    assert out == (vec([1, 0]), vec([0, 3]))


def test_orient():
    assert orient(vec([1, -1])) == vec([-1, 1])
    assert orient(vec([-2, 1])) == vec([2, -1])


def test_json_round_trip():
    v = vec(["-7/3", 0, 5])
    assert to_json(v) == ["-7/3", "0", "5"]
    assert from_json(to_json(v)) == v
    with pytest.raises(ValueError):
        from_json([0.5])


def test_floats_rejected():
    with pytest.raises(TypeError):
        vec([0.5])


# linear algebra

def test_image_kernel_example1():
    image, kernel = image_kernel_basis(EX1, 3)
    assert rank(EX1) == 2 and len(image) == 2 and len(kernel) == 1
    (y,) = left_kernel(EX1, 3)
    assert same_ray(y, vec([1, 1, 2])) or same_ray(y, vec([-1, -1, -2]))
    assert all(dot(vec([1, 1, 2]), c) == 0 for c in EX1)
    assert all(combine(kernel[0], EX1, 3)[i] == 0 for i in range(3))


def test_image_kernel_identity():
    ident = mat([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    image, kernel = image_kernel_basis(ident, 3)
    assert image == list(ident) and kernel == []


def test_left_kernel_example3():
    (y,) = left_kernel(EX3, 3)
    assert y[0] == y[1] == y[2] != 0


# feasibility

def test_feasible_infeasible_pair():
    s = LinearSystem(1, weak=[(vec([-1]), F(1))], strict=[(vec([1]), F(0))])
    with pytest.raises(ValueError):
        feasible(s)  # strict rows need a homogeneous system
    s = LinearSystem(1, weak=[(vec([-1]), F(0))], strict=[(vec([1]), F(0))])
    assert feasible(s) is None


def test_feasible_witness():
    s = LinearSystem(2, equalities=[(vec([1, 1]), F(0))], strict=[(vec([1, 0]), F(0))])
    x = feasible(s)
    assert x is not None and x[0] > 0 and x[0] + x[1] == 0


def test_feasible_mixed_region_system():
    # epsilon free, -2 eps = 0, eps = 0 componentwise
    s = LinearSystem(1, equalities=[(vec([-2]), F(0)), (vec([0]), F(0)), (vec([1]), F(0))])
    assert feasible(s) == vec([0])


def test_feasible_rejects_bad_row_length():
    with pytest.raises(ValueError):
        LinearSystem(2, weak=[(vec([1]), F(0))])


# membership

def test_conic_member_examples():
    cone = ConeRep.of([[4, 0, -2], [0, 4, -2]])
    w = conic_witness(cone, vec([1, 1, -1]))
    assert w is not None
    assert combine(w, cone.generators, 3) == vec([1, 1, -1])
    # [-1,-1,1] = -1/4 ([4,0,-2] + [0,4,-2]) fixes both coefficients at 1/4
    assert w == [F(1, 4), F(1, 4)]
    assert conic_member(cone, vec([0, 0, 0]))
    assert not conic_member(ConeRep.of([[1, 0, 0]]), vec([0, 0, 1]))


def test_hull_member_examples():
    octa = BallRep.of([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]])
    assert hull_member(octa, vec(["1/2", "1/2", 0]))
    assert hull_member(octa, vec(["1/2", 0, "-1/2"]))
    assert not hull_member(octa, vec([2, 0, 0]))
    assert not hull_member(octa, vec(["1/2", "1/2", "1/2"]))


# extreme filter

def test_extreme_filter_examples():
    pts = vecs([[4, 0, -2], [0, 4, -2], [1, 1, -1]])
    assert extreme_filter(pts, "conic") == pts[:2]
    assert extreme_filter(vecs([[1, 0], [2, 0], [0, 1]]), "conic") == vecs([[1, 0], [0, 1]])
    square = vecs([[1, 1], [1, -1], [-1, 1], [-1, -1], [0, 0]])
    assert extreme_filter(square, "convex") == square[:4]
    with pytest.raises(ValueError):
        extreme_filter(square, "affine")


def test_extreme_filter_with_lines_uses_lp():
    pts = vecs([[1, 0], [-1, 0], [0, 1], [1, 1]])
    assert extreme_filter(pts, "conic") == extreme_filter_lp(pts, "conic")
    assert same_cone(extreme_filter(pts, "conic"), pts)


def test_facets_membership():
    fac = facets(vecs([[1, 0, 0], [0, 1, 0]]))
    assert fac.contains(vec([2, 3, 0]))
    assert not fac.contains(vec([1, 0, 1]))
    assert not fac.contains(vec([-1, 0, 0]))


# duality

def test_dual_of_orthant():
    std = ConeRep.of([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert ray_set(dual_cone(std).generators) == ray_set(std.generators)


def test_dual_of_zero_cone_is_everything():
    d = dual_cone(ConeRep((), 2))
    assert len(d.generators) == 4
    assert same_cone(d.generators, vecs([[1, 0], [-1, 0], [0, 1], [0, -1]]))


def test_dual_additional_example_1():
    k = ConeRep.of([[-3, 0, 5], [0, 11, 7], [1, 0, 0], [4, -5, 0]])
    expected = [[0, 0, 1], [0, -7, 11], [55, -21, 33], [5, 4, 3]]
    d = dual_cone(k)
    assert ray_set(d.generators) == ray_set(vecs(expected))
    assert all(dot(x, g) >= 0 for x in d.generators for g in k.generators)


def test_dual_of_lower_dimensional_cone_has_lineality():
    d = dual_cone(ConeRep.of([[1, 0, 0]]))
    assert same_cone(d.generators, vecs([[1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]]))
    assert not is_pointed(d)


def test_polar_of_octahedron_is_cube():
    octa = BallRep.of([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]])
    cube = [[a, b, c] for a in (1, -1) for b in (1, -1) for c in (1, -1)]
    assert same_hull(polar_ball(octa).vertices, vecs(cube))


def test_polar_in_a_plane():
    ball = BallRep.of([[1, -1, 0], [-1, 1, 0], [0, 1, -1], [0, -1, 1]])
    polar = polar_ball(ball)
    assert all(dot(y, b) <= 1 for y in polar.vertices for b in ball.vertices)
    assert all(sum(y) == 0 for y in polar.vertices)


# sign patterns

def test_sign_witness_and_closed_forms():
    basis = [vec([1, 1, 0]), vec([0, 1, 1])]
    normal = vec([1, -1, 1])
    for allowed in (["+", "+", "+"], ["+", "-", "0"], ["-", "0", "+"], ["0", "+", "*"], ["+", "0", "+"]):
        w = sign_witness(basis, allowed, 3)
        assert sign_feasible(basis, allowed, 3, normal) == (w is not None)
        assert sign_feasible(basis, allowed, 3) == (w is not None)
        if w is not None:
            for x, s in zip(w, allowed):
                assert {"+": x > 0, "-": x < 0, "0": x == 0, "*": True}[s]


def test_sign_feasible_line():
    assert sign_feasible([vec([1, -2])], ["-", "+"], 2)
    assert not sign_feasible([vec([1, -2])], ["+", "+"], 2)
    assert not sign_feasible([], ["+", "0"], 2)
    assert sign_feasible([], ["0", "*"], 2)


def test_oracles_agree_on_a_small_case():
    gens = vecs([[1, 0, 0], [0, 1, 0], [1, 1, 1]])
    for probe in vecs([[1, 1, 0], [2, 1, 1], [0, 0, 1], [1, 2, 1]]):
        assert conic_member(ConeRep(tuple(gens), 3), probe) == in_cone(gens, probe)
    pts = vecs([[0, 0], [2, 0], [0, 2]])
    for probe in vecs([[1, 1], [1, "1/2"], [2, 1]]):
        assert hull_member(BallRep(tuple(pts), 2), probe) == in_hull(pts, probe)


def _brute_min_cost(cols, target, cost):
    # the optimum sits at a basic solution: try every independent subset
    best = None
    for k in range(len(cols) + 1):
        for idx in itertools.combinations(range(len(cols)), k):
            sub = [cols[i] for i in idx]
            if oracles.rank(sub) != k:
                continue
            x = oracles.solve(sub, target) if k else ([] if not any(target) else None)
            if x is None or any(a < 0 for a in x):
                continue
            val = sum(cost[i] * a for i, a in zip(idx, x))
            best = val if best is None else min(best, val)
    return best


@settings(max_examples=200)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=1, max_size=5),
    st.lists(st.integers(-4, 4), min_size=n, max_size=n))),
    st.lists(st.integers(1, 5), min_size=5, max_size=5))
def test_min_cost_solution_matches_brute_force(args, weights):
    rows, t = args
    cols = [tuple(map(F, r)) for r in rows]
    target = tuple(map(F, t))
    cost = [F(w) for w in weights[:len(cols)]]
    lam = min_cost_solution(cols, target, cost)
    best = _brute_min_cost(cols, target, cost)
    if best is None:
        assert lam is None
    else:
        assert lam is not None and all(a >= 0 for a in lam)
        assert tuple(sum(a * c[i] for a, c in zip(lam, cols)) for i in range(len(target))) == target
        assert sum(a * c for a, c in zip(lam, cost)) == best
