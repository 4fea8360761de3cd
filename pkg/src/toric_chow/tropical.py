"""Parameterized tropical curves, their balancing, and the two Trop(f) constructions."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd

from .errors import DisconnectedGraph, InvalidCurve, NonIntegralDirection
from .lattice import LatticeVector, RationalVector, content, primitive_vector


@dataclass(frozen=True)
class BoundedEdge:
    """Edge from ``source`` to ``target`` with ``position(target) - position(source) = length * direction``.

    ``direction`` is the weighted vector weight * (primitive direction).
    """

    source: int
    target: int
    weight: int
    direction: LatticeVector
    length: Fraction


@dataclass(frozen=True)
class UnboundedEdge:
    vertex: int
    weight: int
    direction: LatticeVector
    label: str


@dataclass(frozen=True)
class TropicalCurve:
    rank: int
    vertices: tuple[tuple[int, RationalVector], ...]
    bounded_edges: tuple[BoundedEdge, ...] = ()
    unbounded_edges: tuple[UnboundedEdge, ...] = ()

    def __post_init__(self):
        pos = self.positions
        if len(pos) != len(self.vertices):
            raise InvalidCurve("duplicate vertex ids")
        for _, p in self.vertices:
            if len(p) != self.rank:
                raise InvalidCurve("vertex position of the wrong rank")
        for e in self.bounded_edges:
            _check_weighted(e.weight, e.direction)
            if e.source not in pos or e.target not in pos:
                raise InvalidCurve(f"edge {e} has an unknown endpoint")
            if e.length <= 0:
                raise InvalidCurve("edge lengths must be positive")
            if e.source == e.target and e.weight != 0:
                raise InvalidCurve("loops must have weight 0")
            if pos[e.target] - pos[e.source] != e.direction * Fraction(e.length):
                raise InvalidCurve(f"edge {e.source}->{e.target} does not match the vertex positions")
        for e in self.unbounded_edges:
            _check_weighted(e.weight, e.direction)
            if e.vertex not in pos:
                raise InvalidCurve(f"unbounded edge {e.label} has an unknown vertex")
        if not _connected(pos, self.bounded_edges):
            raise DisconnectedGraph("the underlying graph is not connected")

    @property
    def positions(self) -> dict[int, RationalVector]:
        return {v: RationalVector(p) for v, p in self.vertices}

    def flags(self, v: int) -> list[tuple[int, LatticeVector]]:
        """(weight, outgoing weighted direction) for every flag at v."""
        out = []
        for e in self.bounded_edges:
            if e.source == e.target:
                continue
            if e.source == v:
                out.append((e.weight, e.direction))
            if e.target == v:
                out.append((e.weight, -e.direction))
        out += [(e.weight, e.direction) for e in self.unbounded_edges if e.vertex == v]
        return out

    def valence(self, v: int) -> int:
        return sum(1 for e in self.bounded_edges for end in (e.source, e.target) if end == v) + sum(
            1 for e in self.unbounded_edges if e.vertex == v)

    def path_order(self) -> list[int] | None:
        """Vertex ids in path order when the bounded graph is a path, else None."""
        ids = [v for v, _ in self.vertices]
        if len(ids) == 1:
            return ids if not self.bounded_edges else None
        if len(self.bounded_edges) != len(ids) - 1:
            return None
        adj = defaultdict(list)
        for e in self.bounded_edges:
            if e.source == e.target:
                return None
            adj[e.source].append(e.target)
            adj[e.target].append(e.source)
        if any(len(adj[v]) > 2 for v in ids):
            return None
        ends = [v for v in ids if len(adj[v]) == 1]
        if len(ends) != 2:
            return None
        order = [min(ends)]
        prev = None
        while len(order) < len(ids):
            nxt = [w for w in adj[order[-1]] if w != prev]
            prev = order[-1]
            order.append(nxt[0])
        return order

    def edge_between(self, a: int, b: int) -> BoundedEdge:
        for e in self.bounded_edges:
            if (e.source, e.target) in ((a, b), (b, a)):
                return e
        raise KeyError((a, b))


def _check_weighted(weight, direction):
    if weight < 0:
        raise InvalidCurve("weights are nonnegative")
    if weight == 0:
        if not direction.is_zero():
            raise InvalidCurve("a weight-0 edge must have zero direction")
    elif content(direction) != weight:
        raise InvalidCurve(f"direction {tuple(direction)} is not {weight} times a primitive vector")


def _connected(pos, edges) -> bool:
    if not pos:
        return False
    parent = {v: v for v in pos}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        parent[find(e.source)] = find(e.target)
    return len({find(v) for v in pos}) == 1


def check_balancing(t: TropicalCurve) -> list[tuple[int, LatticeVector]]:
    """Per-vertex defect: the sum of weighted outgoing primitive directions."""
    result = []
    for v, _ in t.vertices:
        total = LatticeVector([0] * t.rank)
        for _, mu in t.flags(v):
            total = total + mu
        result.append((v, total))
    return result


def is_balanced(t: TropicalCurve) -> bool:
    return all(d.is_zero() for _, d in check_balancing(t))


@dataclass(frozen=True)
class ContactOrder:
    """Weighted direction of a marked point plus its tangency with each boundary divisor."""

    direction: LatticeVector
    tangency: dict = field(default_factory=dict, compare=False, hash=False)
    anchor_cone: object = field(default=None, compare=False, hash=False)

    @property
    def trivial(self) -> bool:
        return self.direction.is_zero()


def _weighted(mu) -> tuple[int, LatticeVector]:
    mu = LatticeVector(mu)
    if mu.is_zero():
        return 0, mu
    return primitive_vector(mu)[1], mu


def trop_nondegenerate(contacts, labels=None) -> TropicalCurve:
    """One vertex at the origin and one unbounded edge per marked point."""
    contacts = list(contacts)
    if not contacts:
        raise InvalidCurve("at least one contact order is needed to fix the rank")
    rank = len(contacts[0].direction)
    labels = labels or [str(i) for i in range(len(contacts))]
    legs = []
    for c, label in zip(contacts, labels):
        w, mu = _weighted(c.direction)
        legs.append(UnboundedEdge(0, w, mu, label))
    return TropicalCurve(rank, ((0, RationalVector([0] * rank)),), (), tuple(legs))


def trop_standard_log_point(vertex_positions, edges, contacts) -> TropicalCurve:
    """Curve over the standard log point from vertex positions and adjacency.

    ``edges`` holds pairs (i, j) or triples (i, j, weight); the weight
    defaults to 1 and the length is then the unique positive rational
    matching the positions.  Edges between coincident vertices are
    contracted (weight 0, length 1).
    ``contacts`` holds triples (vertex, direction, label).
    """
    positions = [RationalVector(p) for p in vertex_positions]
    if not positions:
        raise InvalidCurve("no vertices")
    rank = len(positions[0])
    bounded = []
    for edge in edges:
        i, j = edge[0], edge[1]
        diff = positions[j] - positions[i]
        if all(x == 0 for x in diff):
            bounded.append(BoundedEdge(i, j, 0, LatticeVector([0] * rank), Fraction(1)))
            continue
        if i == j:
            raise InvalidCurve("loops must be contracted")
        weight = edge[2] if len(edge) > 2 else 1
        if weight <= 0:
            raise NonIntegralDirection("a non-contracted edge needs positive weight")
        diff = [Fraction(x) for x in diff]
        denom = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in diff), 1)
        scaled = [int(x * denom) for x in diff]
        g = reduce(gcd, (abs(x) for x in scaled), 0)
        primitive = LatticeVector(x // g for x in scaled)
        mu = primitive * weight
        length = Fraction(g, denom) / weight
        if positions[i] + mu * length != positions[j]:
            raise NonIntegralDirection(f"edge {i}-{j} has no integral direction")
        bounded.append(BoundedEdge(i, j, weight, mu, length))
    legs = []
    for v, mu, label in contacts:
        w, mu = _weighted(mu)
        legs.append(UnboundedEdge(v, w, mu, label))
    verts = tuple((i, p) for i, p in enumerate(positions))
    return TropicalCurve(rank, verts, tuple(bounded), tuple(legs))


def integral_rescaling(t: TropicalCurve) -> int:
    """Smallest positive integer k making every k * e_l integral."""
    return reduce(lambda a, b: a * b // gcd(a, b),
                  (Fraction(e.length).denominator for e in t.bounded_edges), 1)


def canonical_type(t: TropicalCurve, vertex_cone_of) -> tuple:
    """Combinatorial type of a chain, forgetting positions and lengths.

    ``vertex_cone_of`` maps a vertex position to a hashable, sortable key
    for the minimal fan cone containing it.  The key lists, along the
    chain, each vertex's cone key and sorted legs, interleaved with
    bounded-edge weights; a chain and its reversal get the same key.
    """
    order = t.path_order()
    if order is None:
        raise InvalidCurve("canonical types are defined for chains only")
    pos = t.positions

    def vertex_key(v):
        legs = tuple(sorted((e.weight, tuple(e.direction)) for e in t.unbounded_edges if e.vertex == v))
        return (vertex_cone_of(pos[v]), legs)

    seq = [vertex_key(order[0])]
    for a, b in zip(order, order[1:]):
        seq.append(("edge", t.edge_between(a, b).weight))
        seq.append(vertex_key(b))
    forward = tuple(seq)
    return min(forward, tuple(reversed(seq)))
