import pytest

from conftest import CORPUS, EXTRA, load_doc, load_fan
from toric_chow.errors import (
    BoundInsufficient,
    ConeNotInFan,
    DuplicateRay,
    InvalidFan,
    NonPrimitiveRay,
    NotAVertex,
    NotFullDimensional,
    OverlappingCones,
)
from toric_chow.fan import (
    Fan,
    cone_over_polytope_monoid,
    ghost_stalk,
    normal_fan,
    validate_fan,
    vertex_chart_monoid,
)
from toric_chow.formats import polytope_from_doc
from toric_chow.polyhedra import Cone, Polytope, lattice_points

P2_RAYS = [(1, 0), (0, 1), (-1, -1)]


def rays_of(f):
    return sorted(tuple(r) for r in f.rays)


def cone_sets(f):
    return sorted(sorted(tuple(f.rays[i]) for i in c) for c in f.max_cones)


def test_p2_valid_and_complete():
    f = validate_fan(Fan.from_data(P2_RAYS, [(0, 1), (1, 2), (2, 0)]))
    assert f.complete and f.is_smooth
    assert rays_of(f) == sorted(P2_RAYS)
    assert len(f.cones) == 7
    assert [len(f.cones_of_dim(k)) for k in range(3)] == [1, 3, 3]


def test_overlapping_cones_named():
    with pytest.raises(OverlappingCones) as info:
        validate_fan(Fan.from_data([(1, 0), (0, 1), (1, 1), (1, -1)], [(0, 1), (2, 3)]))
    text = str(info.value)
    assert "(1, 1)" in text and "(0, 1)" in text


def test_single_quadrant_not_complete():
    f = validate_fan(Fan.from_data([(1, 0), (0, 1)], [(0, 1)]))
    assert f.complete is False


@pytest.mark.parametrize("rays, cones, err", [
    ([(2, 0), (0, 1)], [(0, 1)], NonPrimitiveRay),
    ([(1, 0), (1, 0)], [(0,), (1,)], DuplicateRay),
    ([(1, 0), (-1, 0)], [(0, 1)], InvalidFan),
    ([(1, 0), (1, 1), (0, 1)], [(0, 1, 2)], InvalidFan),
])
def test_invalid_fans(rays, cones, err):
    with pytest.raises(err):
        validate_fan(Fan.from_data(rays, cones))


def test_face_of_listed_cone_is_dropped():
    f = validate_fan(Fan.from_data([(1, 0), (0, 1)], [(0, 1), (0,)]))
    assert f.max_cones == ((0, 1),)


def test_canonical_order_is_input_independent():
    a = validate_fan(Fan.from_data(P2_RAYS, [(0, 1), (1, 2), (2, 0)]))
    b = validate_fan(Fan.from_data(P2_RAYS[::-1], [(2, 1), (0, 1), (0, 2)]))
    assert a.rays == b.rays and a.max_cones == b.max_cones


@pytest.mark.parametrize("name", list(CORPUS) + list(EXTRA))
def test_corpus_fans_are_complete(name):
    f = load_fan(name)
    assert f.complete
    p = tuple(3 * (i + 1) - 5 for i in range(f.rank))
    idx = f.minimal_cone_containing(p)
    assert f.cone(idx).relint_contains(p)


@pytest.mark.parametrize("points, rays", [
    ([(0, 0), (1, 0), (0, 1)], P2_RAYS),
    ([(0, 0), (1, 0), (0, 1), (1, 1)], [(1, 0), (-1, 0), (0, 1), (0, -1)]),
    ([(0,), (1,)], [(1,), (-1,)]),
])
def test_normal_fan(points, rays):
    f = normal_fan(Polytope.from_points(points))
    assert f.complete
    assert rays_of(f) == sorted(rays)
    assert len(f.max_cones) == len(points)


def test_normal_fan_of_simplex_is_p2_fixture():
    f = normal_fan(polytope_from_doc(load_doc("polytopes", "simplex2")))
    p2 = load_fan("p2")
    assert f.rays == p2.rays and f.max_cones == p2.max_cones


def test_normal_fan_needs_full_dimension():
    with pytest.raises(NotFullDimensional):
        normal_fan(Polytope.from_points([(0, 0), (1, 1)]))


@pytest.mark.parametrize("points, vertex, expected", [
    ([(0, 0), (1, 0), (0, 1)], (0, 0), [(0, 1), (1, 0)]),
    ([(0, 0), (1, 0), (0, 1), (1, 1)], (1, 1), [(-1, 0), (0, -1)]),
    ([(0,), (2,)], (2,), [(-1,)]),
])
def test_vertex_charts(points, vertex, expected):
    m = vertex_chart_monoid(Polytope.from_points(points), vertex)
    assert sorted(tuple(g) for g in m.generators) == expected


def test_vertex_chart_rejects_non_vertex():
    with pytest.raises(NotAVertex):
        vertex_chart_monoid(Polytope.from_points([(0,), (2,)]), (1,))


@pytest.mark.parametrize("points, expected", [
    ([(0, 0), (1, 0), (0, 1)], [(0, 0, 1), (0, 1, 1), (1, 0, 1)]),
    ([(0, 0), (1, 0), (0, 1), (1, 1)], [(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)]),
    ([(0,), (1,)], [(0, 1), (1, 1)]),
])
def test_cone_over_polytope(points, expected):
    g = cone_over_polytope_monoid(Polytope.from_points(points))
    assert sorted(tuple(x) for x in g.monoid.generators) == expected
    assert g.generated_in_degree_one


def test_lattice_polygons_are_generated_in_degree_one():
    q = Polytope.from_points([(0, 0), (1, 0), (1, 2)])
    g = cone_over_polytope_monoid(q)
    assert g.generated_in_degree_one
    assert sorted(tuple(x[:-1]) for x in g.monoid.generators) == [tuple(p) for p in lattice_points(q)]


def test_dilated_simplex():
    q = Polytope.from_points([(0, 0), (1, 0), (0, 1)]).dilate(2)
    assert sorted(tuple(v) for v in q.vertices) == [(0, 0), (0, 2), (2, 0)]
    g = cone_over_polytope_monoid(q)
    assert g.generated_in_degree_one and len(g.monoid.generators) == 6


def test_cone_over_polytope_respects_degree_bound():
    with pytest.raises(BoundInsufficient):
        cone_over_polytope_monoid(Polytope.from_points([(0, 0), (2, 0), (0, 2)]), degree_bound=1)


@pytest.mark.parametrize("tau, rank, sharp_gens", [
    ([(1, 0), (0, 1)], 2, 2),
    ([(1, 0)], 1, 1),
    ([], 0, 0),
])
def test_ghost_stalks_of_p2(tau, rank, sharp_gens):
    f = load_fan("p2")
    cone = Cone.from_generators(tau, 2) if tau else Cone.zero(2)
    stalk = ghost_stalk(f, cone)
    assert stalk.projection.target_rank == rank
    assert len(stalk.monoid.generators) == sharp_gens
    assert stalk.is_sharp
    assert len(stalk.units_lattice) == 2 - rank


def test_ghost_stalk_of_ray_units():
    stalk = ghost_stalk(load_fan("p2"), Cone.from_generators([(1, 0)]))
    assert [tuple(u) for u in stalk.units_lattice] in ([(0, 1)], [(0, -1)])


def test_ghost_stalk_rejects_foreign_cone():
    with pytest.raises(ConeNotInFan):
        ghost_stalk(load_fan("p2"), Cone.from_generators([(1, 1)]))
