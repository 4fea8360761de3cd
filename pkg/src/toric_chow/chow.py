"""Chow quotients X//T0 of a complete toric variety by a rank-one subtorus.

The quotient fan lives in N' = N / Z*n0.  A point x' of N' picks out the
line base + t*n0 in N; walking that line through the fan of X gives the
chain of P^1s (as a tropical curve) for the boundary stable log map over
x', and from it the limit cycle.
"""
from __future__ import annotations

import hashlib
import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd

from .errors import (
    MergeNotConvex,
    MobileTermPresent,
    NonSimplicialAnchor,
    NotComplete,
    NotPrimitive,
    NotSmooth,
    RankMismatch,
    DirectionZero,
)
from .fan import ConeIndex, Fan, validate_fan
from .lattice import (
    LatticeVector,
    QuotientLatticeMap,
    RationalVector,
    integer_kernel,
    is_primitive,
    pair,
    primitive_vector,
    quotient_lattice,
    rank_of,
    rational_kernel,
    solve,
)
from .polyhedra import Cone, dual_cone, monoid_generators, segment_in_cone
from .tropical import (
    BoundedEdge,
    ContactOrder,
    TropicalCurve,
    UnboundedEdge,
    canonical_type,
    is_balanced,
    trop_nondegenerate,
)

log = logging.getLogger(__name__)

MARK_ZERO = "0"
MARK_INFINITY = "∞"


# -- inputs -------------------------------------------------------------------

def _ready_fan(f: Fan) -> Fan:
    if f.complete is None:
        f = validate_fan(f)
    if not f.complete:
        raise NotComplete("the fan must be complete")
    return f


def normalize_direction(n0, rank: int, allow_imprimitive: bool = False) -> LatticeVector:
    n0 = LatticeVector(n0)
    if len(n0) != rank:
        raise RankMismatch(f"direction has rank {len(n0)}, fan has rank {rank}")
    if n0.is_zero():
        raise DirectionZero("the direction n0 must be nonzero")
    if not is_primitive(n0):
        if not allow_imprimitive:
            raise NotPrimitive(f"direction {tuple(n0)} is not primitive")
        u, k = primitive_vector(n0)
        log.warning("direction %s is %d times a primitive vector; using %s", tuple(n0), k, tuple(u))
        return u
    return n0


# -- contact orders -----------------------------------------------------------

@dataclass(frozen=True)
class DiscreteData:
    """Genus 0, two marked points with contact orders +n0 and -n0, and the degree vector."""

    direction: LatticeVector
    contact_0: ContactOrder
    contact_infinity: ContactOrder
    degree_vector: dict = field(compare=False, hash=False)
    genus: int = 0
    num_marked: int = 2


def contact_order(f: Fan, mu) -> ContactOrder:
    """Tangency of a marked point with weighted direction mu against every boundary divisor."""
    mu = LatticeVector(mu)
    anchor = f.minimal_cone_containing(mu)
    cone = f.cone(anchor)
    if not cone.is_simplicial:
        raise NonSimplicialAnchor(f"{tuple(mu)} lies in the non-simplicial cone {cone!r}")
    coeffs = solve([f.rays[i] for i in anchor], mu)
    tangency = {r: Fraction(0) for r in f.rays}
    for i, c in zip(anchor, coeffs):
        tangency[f.rays[i]] = c
    return ContactOrder(mu, tangency, anchor)


def contact_orders(f: Fan, n0, allow_imprimitive: bool = False) -> DiscreteData:
    f = _ready_fan(f)
    n0 = normalize_direction(n0, f.rank, allow_imprimitive)
    c0 = contact_order(f, n0)
    cinf = contact_order(f, -n0)
    degrees = {r: c0.tangency[r] + cinf.tangency[r] for r in f.rays}
    if f.rank <= 3:
        for chart in reconstruct_nondegenerate(f, n0):
            for e, c in zip(chart.generators, chart.exponents):
                expected = sum(t * pair(e, r) for r, t in c0.tangency.items())
                if expected != c:
                    raise AssertionError(f"contact order of {tuple(e)} is {expected}, monomial curve gives {c}")
    return DiscreteData(n0, c0, cinf, degrees)


@dataclass(frozen=True)
class ChartData:
    """Exponents c_i = <e_i, n0> of t -> lambda^{n0}(t) on the dual-monoid generators of a chart."""

    cone: ConeIndex
    generators: tuple[LatticeVector, ...]
    exponents: tuple[int, ...]


def reconstruct_nondegenerate(f: Fan, n0) -> list[ChartData]:
    """Monomial chart data of the non-degenerate map, one entry per maximal cone containing n0."""
    n0 = LatticeVector(n0)
    charts = []
    for idx, cone in zip(f.max_cones, f.max_cone_data):
        if not cone.contains(n0):
            continue
        monoid = monoid_generators(dual_cone(cone))
        charts.append(ChartData(idx, monoid.generators, tuple(pair(e, n0) for e in monoid.generators)))
    return charts


# -- quotient fan -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuotientFanResult:
    direction: LatticeVector
    projection: QuotientLatticeMap
    fan: Fan
    source: Fan
    sample_points: dict
    chains: dict
    per_cone_type: dict


def sample_points(cone: Cone, count: int, salt: str = "") -> list[RationalVector]:
    """Deterministic pseudo-random rational points in the relative interior of a cone."""
    if not cone.generators:
        return [RationalVector([0] * cone.rank)]
    seed = int(hashlib.sha256((repr(cone.key) + salt).encode()).hexdigest()[:16], 16)
    rng = random.Random(seed)
    points = []
    while len(points) < count:
        p = RationalVector([0] * cone.rank)
        for g in cone.generators:
            p = p + g * Fraction(rng.randint(1, 12), rng.randint(1, 7))
        if p not in points:
            points.append(p)
    return points


def _projected_cones(f: Fan, proj: QuotientLatticeMap) -> dict[ConeIndex, Cone]:
    r = proj.target_rank
    return {idx: Cone.from_generators([proj(g) for g in f.cone(idx).generators], r, allow_lineality=True)
            for idx in f.cones}


def _chambers(normals, r):
    """Full-dimensional cells of the central arrangement with the given normals."""
    if r == 1:
        return [Cone.from_generators([(1,)], 1), Cone.from_generators([(-1,)], 1)]
    lines = set()
    for subset in itertools.combinations(normals, r - 1):
        if rank_of(subset, r) == r - 1:
            line = rational_kernel(subset, r)[0]
            lines.update({line, -line})
    signs = {}
    for combo in itertools.combinations(sorted(lines), r):
        if rank_of(combo, r) < r:
            continue
        p = reduce(lambda a, b: a + b, combo)
        s = tuple(pair(h, p) > 0 for h in normals)
        if all(pair(h, p) != 0 for h in normals):
            signs.setdefault(s, p)
    chambers = []
    for s in sorted(signs):
        ineqs = [h if positive else -h for h, positive in zip(normals, s)]
        chamber = Cone.from_inequalities(ineqs, (), r)
        chambers.append(chamber)
    return chambers


def quotient_fan(f: Fan, n0, allow_imprimitive: bool = False, samples: bool = True) -> QuotientFanResult:
    """Common refinement in N' of the projections of all cones of f."""
    f = _ready_fan(f)
    n0 = normalize_direction(n0, f.rank, allow_imprimitive)
    proj = quotient_lattice(f.rank, n0)
    r = proj.target_rank
    if r == 0:
        qfan = validate_fan(Fan(0, (), ((),)))
    else:
        images = _projected_cones(f, proj)
        qfan = _refine(images, r)
    result = QuotientFanResult(n0, proj, qfan, f, {}, {}, {})
    if samples:
        for idx in qfan.cones:
            point = sample_points(qfan.cone(idx), 1)[0]
            chain = trace_chain(f, n0, point, proj)
            result.sample_points[idx] = point
            result.chains[idx] = chain
            result.per_cone_type[idx] = chain.type_key()
    return result


def _refine(images: dict[ConeIndex, Cone], r: int) -> Fan:
    full = [c for c in images.values() if c.dim == r]
    walls = [c for c in images.values() if c.dim == r - 1]
    normals = set()
    for c in full:
        normals.update(c.facets)
    for c in walls:
        normals.update(c.span_equations)
    normals = sorted({max(h, -h) for h in normals})
    if rank_of(normals, r) < r:
        raise MergeNotConvex("projected cones do not cut N' into pointed chambers")
    chambers = _chambers(normals, r)

    def signature(ch):
        p = ch.interior_point()
        return frozenset(i for i, c in enumerate(full) if c.contains(p))

    sigs = [signature(ch) for ch in chambers]
    parent = list(range(len(chambers)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in itertools.combinations(range(len(chambers)), 2):
        if sigs[i] != sigs[j]:
            continue
        a, b = chambers[i], chambers[j]
        meet = Cone.from_inequalities(a.facets + b.facets, (), r)
        if meet.dim != r - 1:
            continue
        q = meet.interior_point()
        if any(w.relint_contains(q) for w in walls):
            continue
        parent[find(i)] = find(j)

    groups: dict[int, list[int]] = {}
    for i in range(len(chambers)):
        groups.setdefault(find(i), []).append(i)
    hyperplanes = set(normals)
    merged = []
    for members in groups.values():
        hull = Cone.from_generators([g for i in members for g in chambers[i].generators], r)
        if any(max(h, -h) not in hyperplanes for h in hull.facets):
            raise MergeNotConvex(f"merged region {hull!r} is not a union of chambers")
        inside = {i for i, ch in enumerate(chambers) if hull.contains(ch.interior_point())}
        if inside != set(members):
            raise MergeNotConvex(f"merged region {hull!r} is not convex")
        merged.append(hull)
    rays = sorted({g for c in merged for g in c.generators})
    index = {g: i for i, g in enumerate(rays)}
    cones = [tuple(sorted(index[g] for g in c.generators)) for c in merged]
    qfan = validate_fan(Fan(r, tuple(rays), tuple(cones)))
    if not qfan.complete:
        raise MergeNotConvex("refinement of a complete fan came out incomplete")
    return qfan


# -- tracing ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ChainLogMap:
    """The chain of P^1s over a point of N', as a tropical curve with fan data.

    Vertex ids are 0..k-1 in the order of increasing line parameter; the
    marked point "0" sits on the last vertex (leg direction +n0) and "∞" on
    the first (leg direction -n0).
    """

    curve: TropicalCurve
    vertex_cones: tuple[ConeIndex, ...]
    markers: dict
    direction: LatticeVector
    point: RationalVector
    parameters: tuple[Fraction, ...]
    fan: Fan = field(repr=False)

    @property
    def lengths(self) -> tuple[Fraction, ...]:
        return tuple(e.length for e in self.curve.bounded_edges)

    def vertex_cone_data(self, i: int) -> Cone:
        return self.fan.cone(self.vertex_cones[i])

    def cone_key(self, idx: ConeIndex) -> tuple:
        return tuple(tuple(self.fan.rays[i]) for i in idx)

    def type_key(self) -> tuple:
        cones = {tuple(p): self.cone_key(c) for (_, p), c in zip(self.curve.vertices, self.vertex_cones)}
        return canonical_type(self.curve, lambda p: cones[tuple(p)])

    def __eq__(self, other):
        return (isinstance(other, ChainLogMap) and self.curve == other.curve
                and [self.cone_key(c) for c in self.vertex_cones] == [other.cone_key(c) for c in other.vertex_cones]
                and self.markers == other.markers and self.direction == other.direction
                and self.point == other.point)

    __hash__ = None


def trace_chain(f: Fan, n0, point, projection: QuotientLatticeMap | None = None) -> ChainLogMap:
    """Walk the line over ``point`` through the fan and read off the chain."""
    f = _ready_fan(f)
    n0 = LatticeVector(n0)
    proj = projection or quotient_lattice(f.rank, n0)
    point = RationalVector(point)
    base = RationalVector(proj.lift(point))
    line = lambda t: base + n0 * t  # noqa: E731
    cuts = set()
    for idx in f.cones:
        cuts.update(segment_in_cone(f.cone(idx), base, n0).endpoints())
    cuts = sorted(cuts)
    if not cuts:
        raise NotComplete("the line never meets a proper face of the fan")
    probes = [cuts[0] - 1] + [(a + b) / 2 for a, b in zip(cuts, cuts[1:])] + [cuts[-1] + 1]
    open_cones = [f.minimal_cone_containing(line(t)) for t in probes]
    breaks = []
    for k, t in enumerate(cuts):
        here = f.minimal_cone_containing(line(t))
        if here != open_cones[k] or here != open_cones[k + 1]:
            breaks.append((t, here))
    rank = f.rank
    vertices = tuple((i, line(t)) for i, (t, _) in enumerate(breaks))
    weight = primitive_vector(n0)[1]
    edges = tuple(BoundedEdge(i, i + 1, weight, n0, breaks[i + 1][0] - breaks[i][0])
                  for i in range(len(breaks) - 1))
    last = len(breaks) - 1
    legs = (UnboundedEdge(0, weight, -n0, MARK_INFINITY), UnboundedEdge(last, weight, n0, MARK_ZERO))
    curve = TropicalCurve(rank, vertices, edges, legs)
    return ChainLogMap(curve, tuple(c for _, c in breaks), {MARK_ZERO: last, MARK_INFINITY: 0},
                       n0, point, tuple(t for t, _ in breaks), f)


def check_chain_shape(chain: ChainLogMap) -> dict[str, bool]:
    """The structural properties every boundary chain must have."""
    curve = chain.curve
    n0 = chain.direction
    legs = {e.label: e for e in curve.unbounded_edges}
    weights = {e.weight for e in curve.bounded_edges} | {e.weight for e in curve.unbounded_edges}
    parallel = all(_positive_multiple(e.direction, n0) or _positive_multiple(-e.direction, n0)
                   for e in curve.bounded_edges)
    return {
        "path": curve.path_order() is not None,
        "edges_parallel": parallel,
        "legs_opposite": (set(legs) == {MARK_ZERO, MARK_INFINITY}
                          and legs[MARK_ZERO].direction == n0 and legs[MARK_INFINITY].direction == -n0),
        "no_contracted_components": all(e.weight > 0 for e in curve.bounded_edges),
        "equal_weights": len(weights) == 1,
    }


def _positive_multiple(v, n0) -> bool:
    s = solve([n0], v)
    return s is not None and s[0] > 0


# -- cycles -------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Invariant:
    """The torus-invariant curve V(tau) for a (d-1)-dimensional cone tau."""

    cone: tuple[tuple[int, ...], ...]

    def label(self) -> str:
        if len(self.cone) == 1:
            return "D_" + str(self.cone[0]).replace(" ", "")
        return "V(" + (",".join(str(g).replace(" ", "") for g in self.cone) or "0") + ")"


@dataclass(frozen=True, order=True)
class Mobile:
    """A T0-orbit closure through the orbit of a cone of dimension < d-1."""

    cone: tuple[tuple[int, ...], ...]
    direction: tuple[int, ...]

    def label(self) -> str:
        where = ",".join(str(g).replace(" ", "") for g in self.cone) or "0"
        return f"T0-orbit[{where}; {str(self.direction).replace(' ', '')}]"


@dataclass(frozen=True)
class ToricCycle:
    terms: tuple = ()

    @classmethod
    def from_terms(cls, terms) -> ToricCycle:
        total: dict = {}
        for desc, mult in terms:
            total[desc] = total.get(desc, 0) + mult
        for desc, mult in total.items():
            if mult <= 0 or int(mult) != mult:
                raise ValueError(f"multiplicity of {desc} must be a positive integer, got {mult}")
        order = lambda item: (isinstance(item[0], Mobile), item[0])  # noqa: E731
        return cls(tuple(sorted(total.items(), key=order)))

    @property
    def has_mobile(self) -> bool:
        return any(isinstance(d, Mobile) for d, _ in self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join((f"{m}*" if m != 1 else "") + d.label() for d, m in self.terms)


def cycle_of_chain(c: ChainLogMap) -> ToricCycle:
    d = c.fan.rank
    mu = next(e.direction for e in c.curve.unbounded_edges if e.label == MARK_ZERO)
    terms = []
    for i, idx in enumerate(c.vertex_cones):
        cone = c.fan.cone(idx)
        key = tuple(tuple(g) for g in cone.generators)
        units = integer_kernel(cone.generators, d)
        mult = reduce(gcd, (abs(pair(m, mu)) for m in units), 0)
        if cone.dim == d - 1:
            terms.append((Invariant(key), mult))
        else:
            terms.append((Mobile(key, tuple(primitive_vector(mu)[0])), mult))
    return ToricCycle.from_terms(terms)


def class_degrees(f: Fan, cyc: ToricCycle) -> dict[LatticeVector, Fraction]:
    """Intersection numbers of the cycle with every toric divisor of a smooth complete fan."""
    f = _ready_fan(f)
    if not f.is_smooth:
        raise NotSmooth("intersection numbers via wall relations need a smooth fan")
    degrees = {r: Fraction(0) for r in f.rays}
    for desc, mult in cyc.terms:
        if isinstance(desc, Mobile):
            raise MobileTermPresent(f"{desc.label()} is not a torus-invariant cycle")
        idx = f.index_of(Cone.from_generators(desc.cone, f.rank) if desc.cone else Cone.zero(f.rank))
        walls = f.max_cones_containing(idx)
        if len(walls) != 2:
            raise ValueError(f"{desc.label()} is not a wall of the fan")
        u1, u2 = (f.rays[next(i for i in w if i not in idx)] for w in walls)
        coeffs = solve([f.rays[i] for i in idx], -(u1 + u2)) if idx else ()
        degrees[u1] += mult
        degrees[u2] += mult
        for i, c in zip(idx, coeffs):
            degrees[f.rays[i]] += mult * c
    return degrees


# -- the full report ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StratumEntry:
    cone: ConeIndex
    sample: RationalVector
    chain: ChainLogMap
    cycle: ToricCycle
    degrees: dict | None
    checks: dict


@dataclass(frozen=True, eq=False)
class StrataReport:
    direction: LatticeVector
    source: Fan
    quotient: QuotientFanResult
    discrete_data: DiscreteData | None
    entries: tuple[StratumEntry, ...]
    dimension_ok: bool
    duplicate_types: tuple[tuple[ConeIndex, ConeIndex], ...]
    notices: tuple[str, ...] = ()

    def entry(self, idx) -> StratumEntry:
        return next(e for e in self.entries if e.cone == tuple(idx))

    @property
    def maximal_entries(self) -> list[StratumEntry]:
        top = set(self.quotient.fan.max_cones)
        return [e for e in self.entries if e.cone in top]


def enumerate_strata(f: Fan, n0, allow_imprimitive: bool = False) -> StrataReport:
    f = _ready_fan(f)
    n0 = normalize_direction(n0, f.rank, allow_imprimitive)
    notices = []
    try:
        data = contact_orders(f, n0)
    except NonSimplicialAnchor as exc:
        data = None
        notices.append(f"tangency table omitted: {exc}")
    qf = quotient_fan(f, n0)
    smooth = f.is_smooth
    beta = data.degree_vector if data is not None else None
    generic = trop_nondegenerate([ContactOrder(n0), ContactOrder(-n0)], [MARK_ZERO, MARK_INFINITY])
    generic_legs = {e.label: e.direction for e in generic.unbounded_edges}
    entries = []
    for idx in qf.fan.cones:
        chain = qf.chains[idx]
        cycle = cycle_of_chain(chain)
        degrees = class_degrees(f, cycle) if smooth and not cycle.has_mobile else None
        shape = check_chain_shape(chain)
        checks = {
            "balanced": is_balanced(chain.curve),
            "chain_shape": all(shape.values()),
            "specialization": {e.label: e.direction for e in chain.curve.unbounded_edges} == generic_legs,
            "class_conserved": None if degrees is None or beta is None else degrees == beta,
        }
        entries.append(StratumEntry(idx, qf.sample_points[idx], chain, cycle, degrees, checks))
    top = qf.fan.max_cones
    dupes = tuple((a, b) for a, b in itertools.combinations(top, 2)
                  if qf.per_cone_type[a] == qf.per_cone_type[b])
    dim_ok = qf.fan.rank == f.rank - 1 == f.rank + 2 - 3
    return StrataReport(n0, f, qf, data, tuple(entries), dim_ok, dupes, tuple(notices))


def refinement_holds(result: QuotientFanResult) -> bool:
    """Every maximal quotient cone lies inside, or meets only the boundary of, each projected cone."""
    images = _projected_cones(result.source, result.projection)
    for top in result.fan.max_cone_data:
        p = top.interior_point()
        for image in images.values():
            inside = all(image.contains(g) for g in top.generators)
            if not inside and image.dim == top.dim and image.relint_contains(p):
                return False
            if not inside and image.dim == top.dim:
                meet = Cone.from_inequalities(top.facets + image.facets,
                                              top.span_equations + image.span_equations, top.rank)
                if meet.dim == top.dim:
                    return False
    return True
