import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from toric_chow.errors import BoundInsufficient, NotInCone, NotLatticePolytope, RankTooHigh
from toric_chow.lattice import LatticeVector, pair
from toric_chow.polyhedra import (
    Cone,
    Interval,
    Polytope,
    dual_cone,
    hilbert_degree_bound,
    lattice_points,
    minimal_face_containing,
    monoid_generators,
    segment_in_cone,
)

QUADRANT = Cone.from_generators([(1, 0), (0, 1)])


def gens(c):
    return sorted(tuple(g) for g in c.generators)


@pytest.mark.parametrize("generators, expected", [
    ([(1, 0), (0, 1)], [(0, 1), (1, 0)]),
    ([(1, 0), (1, 2)], [(0, 1), (2, -1)]),
    ([(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 0, 1), (0, 1, 0), (1, 0, 0)]),
])
def test_dual_cone_examples(generators, expected):
    assert gens(dual_cone(Cone.from_generators(generators))) == expected


def test_dual_of_zero_cone_is_whole_space():
    d = dual_cone(Cone.zero(2))
    assert d.dim == 2 and not d.is_pointed
    assert all(d.contains(p) for p in [(5, -3), (-1, -1), (0, 7)])


def test_cone_canonical_equality():
    a = Cone.from_generators([(1, 0), (0, 1), (1, 1)])
    b = Cone.from_inequalities([(1, 0), (0, 1)], rank=2)
    assert a == b
    assert gens(a) == [(0, 1), (1, 0)]


@pytest.mark.parametrize("p, expected", [
    ((1, 1), [(0, 1), (1, 0)]),
    ((1, 0), [(1, 0)]),
    ((0, 0), []),
])
def test_minimal_face(p, expected):
    assert gens(minimal_face_containing(QUADRANT, p)) == expected


def test_minimal_face_outside():
    with pytest.raises(NotInCone):
        minimal_face_containing(QUADRANT, (-1, 0))


@pytest.mark.parametrize("cone, base, direction, lo, hi, empty", [
    ([(1, 0), (0, 1)], (1, -1), (0, 1), 1, None, False),
    ([(1, 0), (0, 1)], (-1, 0), (0, 1), None, None, True),
    ([(1, 0), (-1, -1)], (1, 0), (0, 1), None, 0, False),
    ([(1, 0)], (-2, 0), (1, 0), 2, None, False),
    ([(1, 0)], (1, 1), (1, 0), None, None, True),
    ([(1, 1), (1, -1)], (0, 0), (1, 0), 0, None, False),
])
def test_segment_examples(cone, base, direction, lo, hi, empty):
    seg = segment_in_cone(Cone.from_generators(cone), base, direction)
    assert seg == (Interval.void() if empty else Interval(lo, hi))


small = st.integers(-4, 4)
vectors2 = st.tuples(small, small).filter(lambda v: v != (0, 0))
vectors3 = st.tuples(small, small, small).filter(lambda v: v != (0, 0, 0))


def random_cone(rng, rank):
    while True:
        k = rng.randint(1, rank + 1)
        g = [tuple(rng.randint(-3, 3) for _ in range(rank)) for _ in range(k)]
        g = [v for v in g if any(v)]
        if not g:
            continue
        c = Cone.from_generators(g, rank, allow_lineality=True)
        if c.is_pointed:
            return c


@pytest.mark.parametrize("seed", range(20))
def test_segment_matches_membership_sampling(seed):
    rng = random.Random(seed)
    rank = rng.choice([2, 3])
    c = random_cone(rng, rank)
    base = [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(rank)]
    direction = [rng.randint(-3, 3) for _ in range(rank)]
    if not any(direction):
        direction[0] = 1
    seg = segment_in_cone(c, base, direction)
    samples = [Fraction(rng.randint(-4000, 4000), 250) for _ in range(1000)] + seg.endpoints()
    for t in samples:
        p = [b + t * d for b, d in zip(base, direction)]
        assert seg.contains(t) == c.contains(p), (t, seg)


@settings(max_examples=120, deadline=None)
@given(st.lists(vectors2, min_size=1, max_size=4))
def test_double_dual_rank2(generators):
    c = Cone.from_generators(generators, 2, allow_lineality=True)
    assert dual_cone(dual_cone(c)) == c


@settings(max_examples=80, deadline=None)
@given(st.lists(vectors3, min_size=1, max_size=4))
def test_double_dual_rank3(generators):
    c = Cone.from_generators(generators, 3, allow_lineality=True)
    assert dual_cone(dual_cone(c)) == c


@settings(max_examples=80, deadline=None)
@given(st.lists(vectors2, min_size=1, max_size=4), st.tuples(small, small))
def test_minimal_face_contains_point_in_relative_interior(generators, p):
    c = Cone.from_generators(generators, 2, allow_lineality=True)
    assume(c.is_pointed and c.contains(p))
    face = minimal_face_containing(c, p)
    assert face.relint_contains(p)
    assert face.face_of(c)


@pytest.mark.parametrize("points, count", [
    ([(0, 0), (1, 0), (0, 1), (1, 1)], 4),
    ([(0, 0), (2, 0), (0, 2)], 6),
    ([(0,), (3,)], 4),
])
def test_lattice_points(points, count):
    assert len(lattice_points(Polytope.from_points(points))) == count


def test_polytope_rejects_rational_vertex():
    with pytest.raises(NotLatticePolytope):
        Polytope.from_points([(0, 0), (Fraction(1, 2), 0), (0, 1)])


@pytest.mark.parametrize("generators, expected", [
    ([(1, 0), (0, 1)], [(0, 1), (1, 0)]),
    ([(1, 0), (1, 2)], [(1, 0), (1, 1), (1, 2)]),
    ([(0, 0, 1), (1, 0, 1), (0, 1, 1)], [(0, 0, 1), (0, 1, 1), (1, 0, 1)]),
    ([(1, 0), (1, 3)], [(1, 0), (1, 1), (1, 2), (1, 3)]),
    ([(2, -1), (0, 1)], [(0, 1), (1, 0), (2, -1)]),
])
def test_hilbert_basis(generators, expected):
    m = monoid_generators(Cone.from_generators(generators))
    assert gens(m) == expected
    assert m.irreducible_within_list()
    assert m.check_saturation(4)


@settings(max_examples=40, deadline=None)
@given(st.lists(vectors2, min_size=2, max_size=3))
def test_hilbert_basis_generates_cone_points(generators):
    c = Cone.from_generators(generators, 2, allow_lineality=True)
    assume(c.is_pointed and c.dim == 2)
    m = monoid_generators(c)
    assert m.irreducible_within_list()
    assert m.check_saturation(5)
    for g in c.generators:
        assert g in m.generators


def test_hilbert_basis_errors():
    with pytest.raises(RankTooHigh):
        monoid_generators(Cone.from_generators([(1, 0, 0, 0)]))
    c = Cone.from_generators([(1, 0), (1, 2)])
    with pytest.raises(BoundInsufficient):
        monoid_generators(c, degree_bound=hilbert_degree_bound(c) - 1)


@pytest.mark.parametrize("generators, smooth, simplicial", [
    ([(1, 0), (0, 1)], True, True),
    ([(1, 0), (1, 2)], False, True),
    ([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)], False, False),
])
def test_cone_regularity(generators, smooth, simplicial):
    c = Cone.from_generators(generators)
    assert c.is_smooth == smooth
    assert c.is_simplicial == simplicial


def test_faces_of_quadrant():
    dims = sorted(f.dim for f in QUADRANT.faces)
    assert dims == [0, 1, 1, 2]
    assert all(pair(f, LatticeVector((1, 1))) > 0 for f in QUADRANT.facets)
