import json
import subprocess
import sys
import xml.etree.ElementTree as ET
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from conftest import DATA, load_fan
from toric_chow import cli
from toric_chow.chow import enumerate_strata, trace_chain
from toric_chow.formats import (
    DocumentError,
    chain_from_doc,
    chain_to_doc,
    cycle_from_doc,
    cycle_to_doc,
    dumps,
    fan_from_doc,
    fan_to_doc,
    load_json,
    rational_in,
    rational_out,
    report_from_doc,
    report_to_doc,
)

GOLDEN = Path(__file__).parent / "golden"
FANS = DATA / "fans"
POLYTOPES = DATA / "polytopes"


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@given(st.fractions(max_denominator=50))
def test_rational_round_trip(q):
    assert rational_in(rational_out(q)) == q


@pytest.mark.parametrize("bad", [0.5, "x/2", [1], None])
def test_rational_rejects_inexact_or_malformed(bad):
    with pytest.raises(DocumentError):
        rational_in(bad)


@pytest.mark.parametrize("name", ["p1", "p2", "p1xp1", "f1", "p3", "p112", "pyramid"])
def test_fan_round_trip(name):
    f = load_fan(name)
    again = fan_from_doc(json.loads(dumps(fan_to_doc(f))))
    assert again.rays == f.rays and again.max_cones == f.max_cones


def test_chain_and_cycle_round_trip():
    f = load_fan("f1")
    chain = trace_chain(f, (1, 1), (Fraction(2, 3),))
    doc = json.loads(dumps(chain_to_doc(chain)))
    assert chain_from_doc(doc) == chain
    assert cycle_from_doc(doc["cycle"]) == cycle_from_doc(cycle_to_doc(cycle_from_doc(doc["cycle"])))


@pytest.mark.parametrize("name, n0", [("p2", (1, 2)), ("p3", (1, 1, 1)), ("pyramid", (0, 0, 1))])
def test_report_round_trip(name, n0):
    doc = report_to_doc(enumerate_strata(load_fan(name), n0))
    text = dumps(doc)
    assert dumps(report_to_doc(report_from_doc(json.loads(text)))) == text


def test_load_json_reports_parse_errors():
    with pytest.raises(DocumentError):
        load_json('{"rank": 2,')


# -- CLI ----------------------------------------------------------------------

def test_validate_ok(capsys):
    code, out, _ = run(["validate", FANS / "p2.json"], capsys)
    assert code == 0 and "complete: true" in out


def test_validate_overlapping_names_cones(capsys):
    code, _, err = run(["validate", FANS / "overlapping.json"], capsys)
    assert code == 1
    assert "cone((0, 1),(1, 0))" in err and "cone((1, -1),(1, 1))" in err


def test_validate_truncated(capsys):
    code, _, _ = run(["validate", FANS / "truncated.json"], capsys)
    assert code == 2


def test_validate_missing_file(capsys):
    code, _, _ = run(["validate", FANS / "nope.json"], capsys)
    assert code == 2


@pytest.mark.parametrize("argv, golden", [
    (["quotient", "--fan", FANS / "p2.json", "--direction", "0,1"], "p2_0_1.report.json"),
    (["quotient", "--fan", FANS / "p1xp1.json", "--direction", "1,1"], "p1xp1_1_1.report.json"),
    (["trace", "--fan", FANS / "p1xp1.json", "--direction", "1,1", "--point", "1"], "p1xp1_1_1.trace_1.json"),
    (["trace", "--fan", FANS / "p2.json", "--direction", "0,1", "--point", "0"], "p2_0_1.trace_0.json"),
    (["trace", "--fan", FANS / "p2.json", "--direction", "1,2", "--point", "-1"], "p2_1_2.trace_-1.json"),
    (["polytope", "--polytope", POLYTOPES / "square.json", "--emit", "charts"], "square.charts.json"),
])
def test_cli_goldens(argv, golden, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert out == (GOLDEN / golden).read_text(encoding="utf-8")


def test_golden_report_contents():
    doc = json.loads((GOLDEN / "p1xp1_1_1.report.json").read_text(encoding="utf-8"))
    cycles = sorted(" + ".join(t["label"] for t in s["cycle"]) for s in doc["strata"] if s["maximal"])
    assert cycles == ["D_(-1,0) + D_(0,1)", "D_(0,-1) + D_(1,0)"]
    trace = json.loads((GOLDEN / "p2_1_2.trace_-1.json").read_text(encoding="utf-8"))
    assert [v["position"] for v in trace["vertices"]] == [[-1, -1], [0, 1]]


def test_imprimitive_direction(capsys):
    code, _, err = run(["quotient", "--fan", FANS / "p2.json", "--direction", "0,2"], capsys)
    assert code == 3 and "primitive" in err
    code, out, err = run(["quotient", "--fan", FANS / "p2.json", "--direction", "0,2", "--allow-imprimitive"],
                         capsys)
    assert code == 0 and "WARNING" in err
    assert out == (GOLDEN / "p2_0_1.report.json").read_text(encoding="utf-8")


def test_nonsimplicial_anchor_still_writes_report(capsys, tmp_path):
    target = tmp_path / "pyramid.json"
    code, _, err = run(["quotient", "--fan", FANS / "pyramid.json", "--direction", "0,0,1", "--out", target],
                       capsys)
    assert code == 4 and "notice" in err
    doc = json.loads(target.read_text(encoding="utf-8"))
    assert doc["discrete_data"] is None and doc["notices"]


def test_incomplete_fan_is_invalid(capsys):
    code, _, _ = run(["quotient", "--fan", FANS / "quadrant.json", "--direction", "1,0"], capsys)
    assert code == 1


@pytest.mark.parametrize("direction", ["1", "a,b", "0,0", "1/2,1"])
def test_bad_direction_is_parse_error(direction, capsys):
    code, _, _ = run(["quotient", "--fan", FANS / "p2.json", "--direction", direction], capsys)
    assert code == 2


@pytest.mark.parametrize("emit, key, count", [("fan", "rays", 3), ("monoid", "generators", 3)])
def test_polytope_emit(emit, key, count, capsys):
    code, out, _ = run(["polytope", "--polytope", POLYTOPES / "simplex2.json", "--emit", emit], capsys)
    doc = json.loads(out)
    assert code == 0 and len(doc[key]) == count
    if emit == "monoid":
        assert doc["generated_in_degree_one"]
        assert all(g["degree"] == 1 for g in doc["generators"])


def test_polytope_not_full_dimensional(capsys):
    code, _, _ = run(["polytope", "--polytope", POLYTOPES / "flat.json"], capsys)
    assert code == 5


def test_quotient_is_byte_identical_across_processes(tmp_path):
    outputs = []
    for k in range(2):
        target = tmp_path / f"run{k}.json"
        subprocess.run([sys.executable, "-m", "toric_chow.cli", "quotient", "--fan", str(FANS / "p3.json"),
                        "--direction", "1,1,1", "--out", str(target)], check=True)
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1]


# -- SVG ----------------------------------------------------------------------

SVG = "{http://www.w3.org/2000/svg}"


def test_render_report_matches_golden(capsys, tmp_path):
    target = tmp_path / "p2.svg"
    code, _, _ = run(["render", "--report", GOLDEN / "p2_0_1.report.json", "--svg", target], capsys)
    assert code == 0
    text = target.read_text(encoding="utf-8")
    assert text == (GOLDEN / "p2_0_1.report.svg").read_text(encoding="utf-8")
    root = ET.fromstring(text)
    sectors = [e for e in root.iter(f"{SVG}polygon") if e.get("class") == "sector"]
    markers = [e for e in root.iter(f"{SVG}circle") if e.get("class") == "ray-marker"]
    assert len(sectors) == 3 and len(markers) == 3


def test_render_trace_passes_through_chain_vertices(capsys, tmp_path):
    target = tmp_path / "trace.svg"
    code, _, _ = run(["render", "--report", GOLDEN / "p1xp1_1_1.trace_1.json", "--svg", target], capsys)
    assert code == 0
    text = target.read_text(encoding="utf-8")
    assert text == (GOLDEN / "p1xp1_1_1.trace_1.svg").read_text(encoding="utf-8")
    root = ET.fromstring(text)
    [line] = [e for e in root.iter(f"{SVG}line") if e.get("class") == "trace"]
    x1, y1, x2, y2 = (float(line.get(k)) for k in ("x1", "y1", "x2", "y2"))
    vertices = [(float(e.get("cx")), float(e.get("cy"))) for e in root.iter(f"{SVG}circle")
                if e.get("class") == "vertex"]
    assert sorted(vertices) == [(240.0, 295.0), (295.0, 240.0)]
    for cx, cy in vertices:
        assert abs((x2 - x1) * (cy - y1) - (y2 - y1) * (cx - x1)) < 1e-6


def test_render_rejects_rank_three(capsys, tmp_path):
    report = tmp_path / "p3.json"
    run(["quotient", "--fan", FANS / "p3.json", "--direction", "1,1,1", "--out", report], capsys)
    code, _, err = run(["render", "--report", report, "--svg", tmp_path / "p3.svg"], capsys)
    assert code == 6 and "rank-2" in err
