import json
import sys
from pathlib import Path

import pytest

from toric_chow.fan import validate_fan
from toric_chow.formats import fan_from_doc

DATA = Path(__file__).resolve().parents[1] / "data"

# complete fans used across suites, with a primitive direction for each
CORPUS = {
    "p1": (1,),
    "p2": (1, 2),
    "p1xp1": (1, 1),
    "f1": (1, 1),
    "p3": (1, 1, 1),
    "p112": (1, 0),
}
EXTRA = {"p1xp1xp1": (1, 2, 0), "pyramid": (1, 1, 0)}


def load_fan(name: str):
    with open(DATA / "fans" / f"{name}.json", encoding="utf-8") as fh:
        return validate_fan(fan_from_doc(json.load(fh)))


def load_doc(kind: str, name: str):
    with open(DATA / kind / f"{name}.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def fans():
    return {name: load_fan(name) for name in list(CORPUS) + list(EXTRA)}


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
