"""Rational polyhedral cones, lattice polytopes and affine monoids.

Everything is exact and desk scale: facet normals are found by brute
force over (dim - 1)-subsets of generators, and extreme rays of an
H-described cone by brute force over subsets of inequalities.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import (
    BoundInsufficient,
    NotInCone,
    NotLatticePolytope,
    NotStronglyConvex,
    RankMismatch,
    RankTooHigh,
    ZeroVector,
)
from .lattice import (
    LatticeVector,
    RationalVector,
    canonical_row_space,
    pair,
    primitive_direction,
    rank_of,
    rational_kernel,
    smith_normal_form,
)

MAX_HILBERT_RANK = 3


def _primitive_set(vectors):
    out = set()
    for v in vectors:
        v = LatticeVector(v) if all(isinstance(c, int) for c in v) else RationalVector(v)
        if v.is_zero():
            continue
        out.add(primitive_direction(v))
    return sorted(out)


@dataclass(frozen=True, eq=False)
class Cone:
    """A rational polyhedral cone in Z^rank, stored in canonical form.

    The cone is ``{x : <f, x> >= 0 for f in facets, <e, x> = 0 for e in
    span_equations}``.  Facet normals are primitive and lie in the rational
    span of the cone, which makes them unique.  Equality and hashing use
    that H-description.
    """

    rank: int
    generators: tuple[LatticeVector, ...]
    facets: tuple[LatticeVector, ...]
    span_equations: tuple[LatticeVector, ...]
    allow_lineality: bool = False

    # -- construction -----------------------------------------------------

    @classmethod
    def from_generators(cls, generators, rank: int | None = None, allow_lineality: bool = False) -> Cone:
        gens = [tuple(g) for g in generators]
        if rank is None:
            if not gens:
                raise ValueError("rank is required for a cone with no generators")
            rank = len(gens[0])
        if any(len(g) != rank for g in gens):
            raise RankMismatch("generators of different ranks")
        gens = _primitive_set(gens)
        span_eqs = rational_kernel(gens, rank)
        k = rank - len(span_eqs)
        facets = _facet_normals(gens, span_eqs, k, rank)
        pointed = k == 0 or rank_of(facets, rank) == k
        if not pointed and not allow_lineality:
            raise NotStronglyConvex(f"cone generated by {[tuple(g) for g in gens]} contains a line")
        if pointed:
            gens = [g for g in gens if _tight_rank(g, facets, rank) == k - 1]
        return cls(rank, tuple(gens), tuple(facets), canonical_row_space(span_eqs, rank), allow_lineality)

    @classmethod
    def from_inequalities(cls, inequalities, equations=(), rank: int | None = None,
                          allow_lineality: bool = False) -> Cone:
        """Convert {x : <a, x> >= 0, <b, x> = 0} to generators, then canonicalize."""
        ineqs = [tuple(a) for a in inequalities]
        eqs = [tuple(b) for b in equations]
        if rank is None:
            rank = len((ineqs + eqs)[0])
        lineality = rational_kernel(ineqs + eqs, rank)
        cut = eqs + [tuple(l) for l in lineality]
        w = rank - rank_of(cut, rank)
        rays = []
        if w == 1:
            line = rational_kernel(cut, rank)[0]
            rays += [s for s in (line, -line) if all(pair(a, s) >= 0 for a in ineqs)]
        elif w > 1:
            for subset in itertools.combinations(ineqs, w - 1):
                rows = cut + list(subset)
                if rank_of(rows, rank) != rank - 1:
                    continue
                line = rational_kernel(rows, rank)[0]
                for s in (line, -line):
                    if all(pair(a, s) >= 0 for a in ineqs):
                        rays.append(s)
        gens = rays + list(lineality) + [-l for l in lineality]
        return cls.from_generators(gens, rank, allow_lineality=allow_lineality or bool(lineality))

    @classmethod
    def zero(cls, rank: int) -> Cone:
        return cls.from_generators([], rank)

    # -- identity ---------------------------------------------------------

    @cached_property
    def key(self) -> tuple:
        return (self.rank, self.facets, self.span_equations)

    def __eq__(self, other):
        return isinstance(other, Cone) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Cone({[tuple(g) for g in self.generators]})"

    # -- basic properties -------------------------------------------------

    @property
    def dim(self) -> int:
        return self.rank - len(self.span_equations)

    @property
    def is_pointed(self) -> bool:
        return self.dim == 0 or rank_of(self.facets, self.rank) == self.dim

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.rank

    @property
    def is_simplicial(self) -> bool:
        return self.is_pointed and len(self.generators) == self.dim

    @property
    def is_smooth(self) -> bool:
        """Generated by part of a Z-basis of the lattice."""
        if not self.is_simplicial:
            return False
        if not self.generators:
            return True
        _, d, _ = smith_normal_form(self.generators)
        return all(d[i][i] == 1 for i in range(self.dim))

    def contains(self, p) -> bool:
        return (all(pair(e, p) == 0 for e in self.span_equations)
                and all(pair(f, p) >= 0 for f in self.facets))

    def relint_contains(self, p) -> bool:
        return (all(pair(e, p) == 0 for e in self.span_equations)
                and all(pair(f, p) > 0 for f in self.facets))

    def interior_point(self) -> LatticeVector:
        """Sum of the generators: a lattice point in the relative interior."""
        total = LatticeVector([0] * self.rank)
        for g in self.generators:
            total = total + g
        return total

    def face_of(self, other: Cone) -> bool:
        """Whether this cone is a face of ``other``."""
        p = self.interior_point()
        return other.contains(p) and minimal_face_containing(other, p) == self

    @cached_property
    def faces(self) -> tuple[Cone, ...]:
        """All faces, including the cone itself and the zero face (pointed cones only)."""
        if not self.is_pointed:
            raise NotStronglyConvex("face enumeration needs a pointed cone")
        seen = {self}
        stack = [self]
        while stack:
            c = stack.pop()
            for f in c.facets:
                sub = Cone.from_generators([g for g in c.generators if pair(f, g) == 0], self.rank)
                if sub not in seen:
                    seen.add(sub)
                    stack.append(sub)
        return tuple(sorted(seen, key=lambda c: (c.dim, [tuple(g) for g in c.generators])))


def _tight_rank(g, facets, rank):
    return rank_of([f for f in facets if pair(f, g) == 0], rank)


def _facet_normals(gens, span_eqs, k, rank):
    if k == 0:
        return []
    normals = set()
    for subset in itertools.combinations(gens, k - 1):
        rows = list(subset) + list(span_eqs)
        if rank_of(rows, rank) != rank - 1:
            continue
        f = rational_kernel(rows, rank)[0]
        values = [pair(f, g) for g in gens]
        if all(v >= 0 for v in values):
            normals.add(f)
        elif all(v <= 0 for v in values):
            normals.add(-f)
    return sorted(normals)


# -- operations ---------------------------------------------------------------

def dual_cone(c: Cone) -> Cone:
    """{m : <m, x> >= 0 for all x in c}; lineality is allowed in the result."""
    return Cone.from_inequalities(c.generators, (), c.rank, allow_lineality=True)


def minimal_face_containing(c: Cone, p) -> Cone:
    if not c.contains(p):
        raise NotInCone(f"{tuple(p)} is not in {c!r}")
    tight = [f for f in c.facets if pair(f, p) == 0]
    gens = [g for g in c.generators if all(pair(f, g) == 0 for f in tight)]
    return Cone.from_generators(gens, c.rank, allow_lineality=c.allow_lineality)


@dataclass(frozen=True)
class Interval:
    """Closed rational interval; ``None`` endpoints stand for -inf / +inf."""

    lo: Fraction | None
    hi: Fraction | None
    empty: bool = False

    @classmethod
    def void(cls) -> Interval:
        return cls(None, None, True)

    def contains(self, t) -> bool:
        if self.empty:
            return False
        return (self.lo is None or t >= self.lo) and (self.hi is None or t <= self.hi)

    @property
    def is_point(self) -> bool:
        return not self.empty and self.lo is not None and self.lo == self.hi

    def endpoints(self) -> list[Fraction]:
        if self.empty:
            return []
        return [t for t in (self.lo, self.hi) if t is not None]

    def __str__(self):
        if self.empty:
            return "empty"
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        return f"[{lo}, {hi}]"


def segment_in_cone(c: Cone, base, direction) -> Interval:
    """The parameters t with base + t*direction in c."""
    if all(x == 0 for x in direction):
        raise ZeroVector("direction must be nonzero")
    lo = hi = None
    for e in c.span_equations:
        a, b = Fraction(pair(e, base)), pair(e, direction)
        if b == 0:
            if a != 0:
                return Interval.void()
            continue
        t = -a / b
        lo = t if lo is None else max(lo, t)
        hi = t if hi is None else min(hi, t)
    for f in c.facets:
        a, b = Fraction(pair(f, base)), pair(f, direction)
        if b == 0:
            if a < 0:
                return Interval.void()
        elif b > 0:
            lo = -a / b if lo is None else max(lo, -a / b)
        else:
            hi = -a / b if hi is None else min(hi, -a / b)
    if lo is not None and hi is not None and lo > hi:
        return Interval.void()
    return Interval(lo, hi)


# -- polytopes ----------------------------------------------------------------

@dataclass(frozen=True)
class Polytope:
    """A lattice polytope in M, given by its vertices (extreme points only)."""

    rank: int
    vertices: tuple[LatticeVector, ...]
    full_dimensional: bool

    @classmethod
    def from_points(cls, points) -> Polytope:
        pts = [tuple(p) for p in points]
        if not pts:
            raise ValueError("a polytope needs at least one point")
        rank = len(pts[0])
        for p in pts:
            if len(p) != rank:
                raise RankMismatch("points of different ranks")
            if not all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1) for x in p):
                raise NotLatticePolytope(f"vertex {p} is not a lattice point")
        cone = Cone.from_generators([tuple(p) + (1,) for p in pts], rank + 1)
        verts = tuple(sorted(LatticeVector(g[:-1]) for g in cone.generators))
        return cls(rank, verts, cone.dim == rank + 1)

    @cached_property
    def homogenization(self) -> Cone:
        """The cone over the polytope placed at height 1."""
        return Cone.from_generators([tuple(v) + (1,) for v in self.vertices], self.rank + 1)

    def facet_inequalities(self) -> list[tuple[LatticeVector, int]]:
        """Pairs (a, b) with <a, x> + b >= 0 cutting out the facets."""
        return [(LatticeVector(f[:-1]), f[-1]) for f in self.homogenization.facets]

    def contains(self, p) -> bool:
        return self.homogenization.contains(tuple(p) + (1,))

    def translate(self, shift) -> Polytope:
        return Polytope.from_points([tuple(v - LatticeVector(shift)) for v in self.vertices])

    def dilate(self, k: int) -> Polytope:
        """The polytope k * q; large enough k makes the cone over it generated in degree one."""
        if k < 1:
            raise ValueError("dilation factor must be a positive integer")
        return Polytope.from_points([tuple(v * k) for v in self.vertices])


def lattice_points(q: Polytope) -> list[LatticeVector]:
    lows = [min(v[i] for v in q.vertices) for i in range(q.rank)]
    highs = [max(v[i] for v in q.vertices) for i in range(q.rank)]
    box = itertools.product(*(range(a, b + 1) for a, b in zip(lows, highs)))
    return sorted(LatticeVector(p) for p in box if q.contains(p))


# -- affine monoids -----------------------------------------------------------

@dataclass(frozen=True)
class AffineMonoid:
    """A saturated affine monoid, presented by its irreducible elements."""

    rank: int
    generators: tuple[LatticeVector, ...]
    cone: Cone | None = field(default=None, compare=False, repr=False)

    def is_sum_of_generators(self, x) -> bool:
        x = LatticeVector(x)
        if self.cone is None:
            raise ValueError("membership test needs the underlying cone")
        return _decomposable(x, self.generators, _grading(self.cone), {})

    def irreducible_within_list(self) -> bool:
        gens = set(self.generators)
        return not any(a + b in gens for a in self.generators for b in self.generators)

    def check_saturation(self, bound: int) -> bool:
        """Every cone lattice point with coordinates in [-bound, bound] is a generator sum."""
        if self.cone is None:
            raise ValueError("saturation check needs the underlying cone")
        box = itertools.product(range(-bound, bound + 1), repeat=self.rank)
        return all(self.is_sum_of_generators(p) for p in box if self.cone.contains(p))


def _grading(c: Cone) -> LatticeVector:
    total = LatticeVector([0] * c.rank)
    for f in c.facets:
        total = total + f
    return total


def _decomposable(x, gens, grade, memo) -> bool:
    if x.is_zero():
        return True
    if x in memo:
        return memo[x]
    result = False
    for g in gens:
        rest = x - g
        if pair(grade, rest) < 0:
            continue
        if _decomposable(rest, gens, grade, memo):
            result = True
            break
    memo[x] = result
    return result


def hilbert_degree_bound(c: Cone) -> int:
    """A degree that every Hilbert basis element of c is guaranteed not to exceed."""
    grade = _grading(c)
    degrees = sorted((pair(grade, g) for g in c.generators), reverse=True)
    return sum(degrees[: c.dim])


def monoid_generators(c: Cone, degree_bound: int | None = None) -> AffineMonoid:
    """Hilbert basis of c ∩ Z^rank by bounded enumeration and reduction.

    Degrees are measured with the sum of the facet normals, which is
    strictly positive on c minus the origin.  ``degree_bound`` defaults to
    a bound known to be sufficient; a smaller explicit bound raises
    BoundInsufficient instead of returning a partial answer.
    """
    if c.rank > MAX_HILBERT_RANK:
        raise RankTooHigh(f"Hilbert bases are computed only up to rank {MAX_HILBERT_RANK}")
    if not c.is_pointed:
        raise NotStronglyConvex("monoid generators need a strongly convex cone")
    if c.dim == 0:
        return AffineMonoid(c.rank, (), c)
    grade = _grading(c)
    needed = hilbert_degree_bound(c)
    if degree_bound is None:
        degree_bound = needed
    if degree_bound < needed:
        raise BoundInsufficient(f"degree bound {degree_bound} below the sufficient bound {needed}")
    corners = [g * Fraction(degree_bound, pair(grade, g)) for g in c.generators]
    ranges = []
    for i in range(c.rank):
        lo = min([Fraction(0)] + [p[i] for p in corners])
        hi = max([Fraction(0)] + [p[i] for p in corners])
        ranges.append(range(math.floor(lo), math.ceil(hi) + 1))
    points = []
    for p in itertools.product(*ranges):
        if c.contains(p):
            deg = pair(grade, p)
            if 0 < deg <= degree_bound:
                points.append((deg, LatticeVector(p)))
    points.sort()
    irreducible: list[LatticeVector] = []
    for _, x in points:
        if not any(c.contains(x - h) for h in irreducible):
            irreducible.append(x)
    reachable = set()
    for _, x in points:
        if x in irreducible or any((x - h) in reachable for h in irreducible):
            reachable.add(x)
        else:
            raise BoundInsufficient(f"{tuple(x)} is not a sum of the computed generators")
    return AffineMonoid(c.rank, tuple(sorted(irreducible)), c)


__all__ = [
    "AffineMonoid",
    "Cone",
    "Interval",
    "Polytope",
    "dual_cone",
    "lattice_points",
    "minimal_face_containing",
    "monoid_generators",
    "segment_in_cone",
]
