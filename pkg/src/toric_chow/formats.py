"""JSON documents for fans, polytopes, chains and strata reports.

All numbers are exact: integers are written bare and other rationals as
"p/q" strings.  Key order is fixed by construction so that output is
byte-for-byte reproducible.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .chow import (
    MARK_INFINITY,
    MARK_ZERO,
    ChainLogMap,
    DiscreteData,
    Invariant,
    Mobile,
    QuotientFanResult,
    StrataReport,
    StratumEntry,
    ToricCycle,
    check_chain_shape,
    cycle_of_chain,
)
from .errors import NotLatticePolytope, ToricError
from .fan import Fan
from .lattice import LatticeVector, QuotientLatticeMap, RationalVector
from .polyhedra import Polytope
from .tropical import BoundedEdge, ContactOrder, TropicalCurve, UnboundedEdge, is_balanced

FORMAT_VERSION = 1


class DocumentError(ToricError):
    """A JSON document does not follow the expected layout."""


def rational_out(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rational_in(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise DocumentError(f"{x!r} is not an exact rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            raise DocumentError(f"cannot read {x!r} as a rational") from None
    raise DocumentError(f"cannot read {x!r} as a rational")


def integer_in(x) -> int:
    q = rational_in(x)
    if q.denominator != 1:
        raise DocumentError(f"{x!r} is not an integer")
    return q.numerator


def vector_out(v) -> list:
    return [rational_out(c) for c in v]


def lattice_in(v) -> LatticeVector:
    if not isinstance(v, list):
        raise DocumentError(f"expected a list of integers, got {v!r}")
    return LatticeVector(integer_in(c) for c in v)


def rational_vector_in(v) -> RationalVector:
    if not isinstance(v, list):
        raise DocumentError(f"expected a list of rationals, got {v!r}")
    return RationalVector(rational_in(c) for c in v)


INLINE_WIDTH = 72


def dumps(doc) -> str:
    """Indented JSON; arrays and objects that fit in a short line stay on one line."""
    return _dump(doc, 0) + "\n"


def _dump(x, depth) -> str:
    if not isinstance(x, (dict, list)):
        return json.dumps(x, ensure_ascii=False)
    flat = json.dumps(x, ensure_ascii=False, separators=(", ", ": "))
    if depth > 0 and len(flat) <= INLINE_WIDTH:
        return flat
    pad = "  " * (depth + 1)
    if isinstance(x, dict):
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {_dump(v, depth + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * depth + "}"
    return "[\n" + ",\n".join(pad + _dump(y, depth + 1) for y in x) + "\n" + "  " * depth + "]"


def _tuplify(x):
    return tuple(_tuplify(y) for y in x) if isinstance(x, list) else x


def _listify(x):
    return [_listify(y) for y in x] if isinstance(x, tuple) else x


# -- fans and polytopes -------------------------------------------------------

def fan_to_doc(f: Fan) -> dict:
    doc = {}
    if f.name:
        doc["name"] = f.name
    doc["rank"] = f.rank
    doc["rays"] = [list(r) for r in f.rays]
    doc["cones"] = [list(c) for c in f.max_cones]
    return doc


def fan_from_doc(doc) -> Fan:
    if not isinstance(doc, dict):
        raise DocumentError("a fan document is a JSON object")
    try:
        rank = integer_in(doc["rank"])
        rays = [lattice_in(r) for r in doc["rays"]]
        cones = [tuple(integer_in(i) for i in c) for c in doc["cones"]]
    except KeyError as exc:
        raise DocumentError(f"fan document is missing {exc.args[0]!r}") from None
    except TypeError as exc:
        raise DocumentError(f"malformed fan document: {exc}") from None
    return Fan(rank, tuple(rays), tuple(tuple(sorted(c)) for c in cones), None, doc.get("name"))


def polytope_from_doc(doc) -> Polytope:
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise DocumentError("a polytope document is an object with a 'vertices' list")
    vertices = []
    for v in doc["vertices"]:
        q = rational_vector_in(v)
        if not q.is_integral():
            raise NotLatticePolytope(f"vertex {vector_out(q)} is not a lattice point")
        vertices.append(q.to_lattice())
    if "rank" in doc and any(len(v) != integer_in(doc["rank"]) for v in vertices):
        raise DocumentError("vertex rank does not match the declared rank")
    return Polytope.from_points(vertices)


# -- chains -------------------------------------------------------------------

def cycle_to_doc(cyc: ToricCycle) -> list:
    out = []
    for desc, mult in cyc.terms:
        term = {"kind": "invariant" if isinstance(desc, Invariant) else "mobile",
                "cone": [list(g) for g in desc.cone]}
        if isinstance(desc, Mobile):
            term["direction"] = list(desc.direction)
        term["multiplicity"] = mult
        term["label"] = desc.label()
        out.append(term)
    return out


def cycle_from_doc(doc) -> ToricCycle:
    terms = []
    for t in doc:
        cone = tuple(tuple(lattice_in(g)) for g in t["cone"])
        if t["kind"] == "invariant":
            desc = Invariant(cone)
        else:
            desc = Mobile(cone, tuple(lattice_in(t["direction"])))
        terms.append((desc, integer_in(t["multiplicity"])))
    return ToricCycle.from_terms(terms)


def chain_to_doc(chain: ChainLogMap, include_fan: bool = True) -> dict:
    curve = chain.curve
    doc = {"kind": "chain"}
    if include_fan:
        doc["fan"] = fan_to_doc(chain.fan)
    doc["direction"] = list(chain.direction)
    doc["point"] = vector_out(chain.point)
    doc["vertices"] = [
        {"id": v, "position": vector_out(p), "parameter": rational_out(t),
         "cone": [list(chain.fan.rays[i]) for i in idx]}
        for (v, p), t, idx in zip(curve.vertices, chain.parameters, chain.vertex_cones)
    ]
    doc["edges"] = [
        {"source": e.source, "target": e.target, "weight": e.weight,
         "direction": list(e.direction), "length": rational_out(e.length)}
        for e in curve.bounded_edges
    ]
    doc["legs"] = [
        {"vertex": e.vertex, "label": e.label, "weight": e.weight, "direction": list(e.direction)}
        for e in curve.unbounded_edges
    ]
    doc["markers"] = {MARK_ZERO: chain.markers[MARK_ZERO], MARK_INFINITY: chain.markers[MARK_INFINITY]}
    doc["cycle"] = cycle_to_doc(cycle_of_chain(chain))
    shape = check_chain_shape(chain)
    doc["checks"] = {"balanced": is_balanced(curve), **shape}
    return doc


def chain_from_doc(doc, fan: Fan | None = None) -> ChainLogMap:
    from .fan import validate_fan

    if fan is None:
        fan = validate_fan(fan_from_doc(doc["fan"]))
    lookup = {tuple(r): i for i, r in enumerate(fan.rays)}
    n0 = lattice_in(doc["direction"])
    vertices = tuple((int(v["id"]), rational_vector_in(v["position"])) for v in doc["vertices"])
    cones = tuple(tuple(sorted(lookup[tuple(lattice_in(g))] for g in v["cone"])) for v in doc["vertices"])
    params = tuple(rational_in(v["parameter"]) for v in doc["vertices"])
    edges = tuple(BoundedEdge(e["source"], e["target"], e["weight"], lattice_in(e["direction"]),
                              rational_in(e["length"])) for e in doc["edges"])
    legs = tuple(UnboundedEdge(e["vertex"], e["weight"], lattice_in(e["direction"]), e["label"])
                 for e in doc["legs"])
    curve = TropicalCurve(fan.rank, vertices, edges, legs)
    markers = {k: int(v) for k, v in doc["markers"].items()}
    return ChainLogMap(curve, cones, markers, n0, rational_vector_in(doc["point"]), params, fan)


# -- reports ------------------------------------------------------------------

def _contact_doc(c: ContactOrder) -> dict:
    return {"direction": list(c.direction),
            "tangency": [{"ray": list(r), "order": rational_out(t)} for r, t in c.tangency.items()]}


def _contact_from(doc, fan) -> ContactOrder:
    tangency = {lattice_in(t["ray"]): rational_in(t["order"]) for t in doc["tangency"]}
    mu = lattice_in(doc["direction"])
    return ContactOrder(mu, tangency, fan.minimal_cone_containing(mu))


def _degrees_doc(degrees) -> list:
    return [{"ray": list(r), "degree": rational_out(v)} for r, v in degrees.items()]


def _degrees_from(doc) -> dict:
    return {lattice_in(d["ray"]): rational_in(d["degree"]) for d in doc}


def report_to_doc(report: StrataReport) -> dict:
    qf = report.quotient
    d = report.source.rank
    data = report.discrete_data
    doc = {
        "format": "toric-chow/strata-report",
        "version": FORMAT_VERSION,
        "fan": fan_to_doc(report.source),
        "direction": list(report.direction),
        "projection": {"matrix": [list(r) for r in qf.projection.matrix],
                       "right_inverse": [list(r) for r in qf.projection.right_inverse]},
        "discrete_data": None if data is None else {
            "genus": data.genus,
            "marked_points": data.num_marked,
            "contact_0": _contact_doc(data.contact_0),
            "contact_infinity": _contact_doc(data.contact_infinity),
            "degrees": _degrees_doc(data.degree_vector),
        },
        "quotient_fan": {"rank": qf.fan.rank, "rays": [list(r) for r in qf.fan.rays],
                         "cones": [list(c) for c in qf.fan.max_cones]},
        "dimension_check": {"quotient_rank": qf.fan.rank, "expected": d + 2 - 3, "ok": report.dimension_ok},
        "strata": [],
        "duplicate_types": [[list(a), list(b)] for a, b in report.duplicate_types],
        "notices": list(report.notices),
    }
    top = set(qf.fan.max_cones)
    for e in report.entries:
        doc["strata"].append({
            "cone": list(e.cone),
            "cone_rays": [list(qf.fan.rays[i]) for i in e.cone],
            "maximal": e.cone in top,
            "sample": vector_out(e.sample),
            "type": _listify(qf.per_cone_type[e.cone]),
            "chain": chain_to_doc(e.chain, include_fan=False),
            "cycle": cycle_to_doc(e.cycle),
            "class_degrees": None if e.degrees is None else _degrees_doc(e.degrees),
            "checks": dict(e.checks),
        })
    return doc


def report_from_doc(doc) -> StrataReport:
    from .fan import validate_fan

    if doc.get("format") != "toric-chow/strata-report":
        raise DocumentError("not a strata report")
    fan = validate_fan(fan_from_doc(doc["fan"]))
    n0 = lattice_in(doc["direction"])
    qdoc = doc["quotient_fan"]
    r = integer_in(qdoc["rank"])
    qfan = validate_fan(Fan(r, tuple(lattice_in(x) for x in qdoc["rays"]),
                            tuple(tuple(c) for c in qdoc["cones"])))
    pdoc = doc["projection"]
    proj = QuotientLatticeMap(fan.rank, r, tuple(tuple(x) for x in pdoc["matrix"]), n0,
                              tuple(tuple(x) for x in pdoc["right_inverse"]), (n0,))
    samples, chains, types, entries = {}, {}, {}, []
    for s in doc["strata"]:
        idx = tuple(s["cone"])
        chain = chain_from_doc(s["chain"], fan)
        samples[idx] = rational_vector_in(s["sample"])
        chains[idx] = chain
        types[idx] = _tuplify(s["type"])
        degrees = None if s["class_degrees"] is None else _degrees_from(s["class_degrees"])
        entries.append(StratumEntry(idx, samples[idx], chain, cycle_from_doc(s["cycle"]), degrees,
                                    dict(s["checks"])))
    qf = QuotientFanResult(n0, proj, qfan, fan, samples, chains, types)
    ddoc = doc["discrete_data"]
    data = None
    if ddoc is not None:
        data = DiscreteData(n0, _contact_from(ddoc["contact_0"], fan),
                            _contact_from(ddoc["contact_infinity"], fan), _degrees_from(ddoc["degrees"]))
    dupes = tuple((tuple(a), tuple(b)) for a, b in doc["duplicate_types"])
    return StrataReport(n0, fan, qf, data, tuple(entries), doc["dimension_check"]["ok"], dupes,
                        tuple(doc["notices"]))


def load_json(stream_or_text):
    text = stream_or_text if isinstance(stream_or_text, str) else stream_or_text.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from None
