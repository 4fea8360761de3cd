"""Fans of toric varieties, polytope constructions and ghost stalks."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property

from .errors import (
    ConeNotInFan,
    DuplicateRay,
    InvalidFan,
    NonPrimitiveRay,
    NotAVertex,
    NotFullDimensional,
    NotInCone,
    NotStronglyConvex,
    OverlappingCones,
)
from .lattice import (
    LatticeVector,
    QuotientLatticeMap,
    integer_kernel,
    is_primitive,
    matvec,
    sublattice_quotient,
)
from .polyhedra import (
    AffineMonoid,
    Cone,
    Polytope,
    dual_cone,
    minimal_face_containing,
    monoid_generators,
)

log = logging.getLogger(__name__)

ConeIndex = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Fan:
    """A fan given by primitive rays and its maximal cones as sorted ray-index tuples.

    ``complete`` is None until the fan has been through :func:`validate_fan`.
    Lower-dimensional cones are derived on demand.
    """

    rank: int
    rays: tuple[LatticeVector, ...]
    max_cones: tuple[ConeIndex, ...]
    complete: bool | None = None
    name: str | None = field(default=None, compare=False)

    @classmethod
    def from_data(cls, rays, cones, rank: int | None = None, name: str | None = None) -> Fan:
        rays = tuple(LatticeVector(r) for r in rays)
        if rank is None:
            if not rays:
                raise InvalidFan("rank is required for a fan without rays")
            rank = len(rays[0])
        return cls(rank, rays, tuple(tuple(sorted(c)) for c in cones), None, name)

    @property
    def validated(self) -> bool:
        return self.complete is not None

    def __eq__(self, other):
        return (isinstance(other, Fan) and self.rank == other.rank and self.rays == other.rays
                and self.max_cones == other.max_cones)

    def __hash__(self):
        return hash((self.rank, self.rays, self.max_cones))

    def cone(self, index: ConeIndex) -> Cone:
        return self._cone_cache.get(tuple(index)) or Cone.from_generators(
            [self.rays[i] for i in index], self.rank)

    @cached_property
    def max_cone_data(self) -> tuple[Cone, ...]:
        return tuple(Cone.from_generators([self.rays[i] for i in c], self.rank) for c in self.max_cones)

    @cached_property
    def _ray_lookup(self) -> dict:
        return {r: i for i, r in enumerate(self.rays)}

    def index_of(self, cone: Cone) -> ConeIndex:
        try:
            idx = tuple(sorted(self._ray_lookup[g] for g in cone.generators))
        except KeyError:
            raise ConeNotInFan(f"{cone!r} uses a ray outside the fan") from None
        if idx not in self._cone_cache:
            raise ConeNotInFan(f"{cone!r} is not a cone of the fan")
        return idx

    @cached_property
    def _cone_cache(self) -> dict[ConeIndex, Cone]:
        cache: dict[ConeIndex, Cone] = {}
        for data in self.max_cone_data:
            for face in data.faces:
                idx = tuple(sorted(self._ray_lookup[g] for g in face.generators))
                cache.setdefault(idx, face)
        return cache

    @property
    def cones(self) -> tuple[ConeIndex, ...]:
        """Every cone of the fan (all faces of maximal cones), ordered by dimension."""
        return tuple(sorted(self._cone_cache, key=lambda i: (len(i), i)))

    def cones_of_dim(self, k: int) -> tuple[ConeIndex, ...]:
        return tuple(i for i in self.cones if self._cone_cache[i].dim == k)

    def max_cones_containing(self, index: ConeIndex) -> tuple[ConeIndex, ...]:
        s = set(index)
        return tuple(c for c in self.max_cones if s <= set(c))

    def minimal_cone_containing(self, p) -> ConeIndex:
        """Index of the unique cone whose relative interior contains p."""
        for data in self.max_cone_data:
            if data.contains(p):
                return self.index_of(minimal_face_containing(data, p))
        raise NotInCone(f"{tuple(p)} lies outside the support of the fan")

    @property
    def is_smooth(self) -> bool:
        return all(c.is_smooth for c in self.max_cone_data)

    @property
    def is_simplicial(self) -> bool:
        return all(c.is_simplicial for c in self.max_cone_data)


def validate_fan(f: Fan) -> Fan:
    """Check the fan axioms and return the fan in canonical order with ``complete`` set."""
    rays = list(f.rays)
    for i, r in enumerate(rays):
        if len(r) != f.rank:
            raise InvalidFan(f"ray {i} has rank {len(r)}, fan has rank {f.rank}")
        if r.is_zero() or not is_primitive(r):
            raise NonPrimitiveRay(f"ray {i} = {tuple(r)} is not primitive")
    if len(set(rays)) != len(rays):
        dup = next(r for r in rays if rays.count(r) > 1)
        raise DuplicateRay(f"ray {tuple(dup)} is listed twice")
    order = sorted(range(len(rays)), key=lambda i: rays[i])
    relabel = {old: new for new, old in enumerate(order)}
    new_rays = tuple(rays[i] for i in order)
    cones = []
    for c in f.max_cones:
        if any(i < 0 or i >= len(rays) for i in c):
            raise InvalidFan(f"cone {c} refers to a missing ray")
        cones.append(tuple(sorted(relabel[i] for i in c)))
    data = {}
    for c in cones:
        try:
            cone = Cone.from_generators([new_rays[i] for i in c], f.rank)
        except NotStronglyConvex as exc:
            raise InvalidFan(f"cone {c} is not strongly convex") from exc
        if len(cone.generators) != len(set(c)):
            raise InvalidFan(f"cone {c} lists a ray that is not extremal")
        data[c] = cone
    # a listed cone that is a face of another listed cone is not maximal
    maximal = [c for c in dict.fromkeys(cones)
               if not any(c != o and set(c) < set(o) and data[c].face_of(data[o]) for o in cones)]
    for a, b in itertools.combinations(maximal, 2):
        ca, cb = data[a], data[b]
        meet = Cone.from_inequalities(ca.facets + cb.facets, ca.span_equations + cb.span_equations, f.rank)
        if not (meet.face_of(ca) and meet.face_of(cb)):
            raise OverlappingCones(_name(a, new_rays), _name(b, new_rays))
    maximal.sort()
    complete = _facets_paired(maximal, data, new_rays, f.rank)
    return Fan(f.rank, new_rays, tuple(maximal), complete, f.name)


def _name(index, rays):
    return "cone(" + ",".join(str(tuple(rays[i])) for i in index) + ")"


def _facets_paired(maximal, data, rays, rank) -> bool:
    """Completeness test: every facet of every maximal cone is shared by exactly two."""
    if rank == 0:
        return maximal == [()]
    if not maximal or any(data[c].dim != rank for c in maximal):
        return False
    counts: dict[frozenset, int] = {}
    for c in maximal:
        for normal in data[c].facets:
            key = frozenset(i for i in c if sum(a * b for a, b in zip(normal, rays[i])) == 0)
            counts[key] = counts.get(key, 0) + 1
    return all(v == 2 for v in counts.values())


def normal_fan(q: Polytope) -> Fan:
    """Fan of inner normal cones at the vertices of a full-dimensional lattice polytope."""
    if not q.full_dimensional:
        raise NotFullDimensional("the normal fan needs a full-dimensional polytope")
    facets = q.facet_inequalities()
    normals = sorted({a for a, _ in facets})
    index = {a: i for i, a in enumerate(normals)}
    cones = []
    for v in q.vertices:
        tight = [a for a, b in facets if sum(x * y for x, y in zip(a, v)) + b == 0]
        cones.append(tuple(sorted(index[a] for a in tight)))
    return validate_fan(Fan(q.rank, tuple(normals), tuple(cones)))


def vertex_chart_monoid(q: Polytope, v) -> AffineMonoid:
    """Generators of the lattice points of the cone over q - v."""
    v = LatticeVector(v)
    if v not in q.vertices:
        raise NotAVertex(f"{tuple(v)} is not a vertex")
    cone = Cone.from_generators([w - v for w in q.vertices if w != v], q.rank)
    return monoid_generators(cone)


@dataclass(frozen=True)
class GradedMonoid:
    """A monoid in M x Z graded by the last coordinate."""

    monoid: AffineMonoid

    def degree(self, x) -> int:
        return x[-1]

    @property
    def generated_in_degree_one(self) -> bool:
        return all(self.degree(g) == 1 for g in self.monoid.generators)


def cone_over_polytope_monoid(q: Polytope, degree_bound: int | None = None) -> GradedMonoid:
    """Lattice points of the cone over q at height 1, graded by height.

    Whether the result is generated in degree one is reported, not forced;
    use ``Polytope.dilate`` to pass to a more positive embedding.
    """
    if not q.full_dimensional:
        raise NotFullDimensional("the polytope must be full-dimensional")
    return GradedMonoid(monoid_generators(q.homogenization, degree_bound))


@dataclass(frozen=True)
class GhostStalk:
    """The sharp monoid (tau^dual ∩ M) / (tau^perp ∩ M) at the orbit of tau.

    ``monoid`` lives in the quotient lattice M / units_lattice, identified
    with Z^dim(tau) through ``projection``.
    """

    cone: Cone
    monoid: AffineMonoid
    units_lattice: tuple[LatticeVector, ...]
    projection: QuotientLatticeMap

    @property
    def is_sharp(self) -> bool:
        return self.monoid.cone is None or self.monoid.cone.is_pointed


def ghost_stalk(f: Fan, tau) -> GhostStalk:
    if isinstance(tau, Cone):
        idx = f.index_of(tau)
    else:
        idx = tuple(sorted(tau))
        if idx not in f.cones:
            raise ConeNotInFan(f"{idx} is not a cone of the fan")
    cone = f.cone(idx)
    units = integer_kernel(cone.generators, f.rank)
    proj = sublattice_quotient(units, f.rank)
    k = proj.target_rank
    if k == 0:
        image = Cone.zero(0)
    else:
        dual = dual_cone(cone)
        image = Cone.from_generators([matvec(proj.matrix, g) for g in dual.generators], k)
    monoid = monoid_generators(image) if k else AffineMonoid(0, (), image)
    return GhostStalk(cone, monoid, units, proj)
