import json
from importlib import resources
from pathlib import Path

import pytest
from hypothesis import settings
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from fi1.core import GENERATOR, Triple
from fi1.eset import IdemPoint, cells, ray_along
from fi1.subsemigroup import SubsemigroupSpec

settings.register_profile("fi1", deadline=None)
settings.load_profile("fi1")

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

SPECS = {
    "x": SubsemigroupSpec((GENERATOR,)),
    "x2": SubsemigroupSpec((Triple(0, 2, 2),)),
    "u123": SubsemigroupSpec((Triple(1, 2, 3),)),
    "ray": SubsemigroupSpec((Triple(1, 2, 3),), ray_along((1, 0), "a")),
    "x_idem10": SubsemigroupSpec((GENERATOR,), cells([IdemPoint(1, 0)])),
    "u123_idem11": SubsemigroupSpec((Triple(1, 2, 3),), cells([IdemPoint(1, 1)])),
}


def _registry() -> Registry:
    reg = Registry()
    for path in resources.files("fi1").joinpath("schemas").iterdir():
        if path.name.endswith(".schema.json"):
            reg = reg.with_resource(path.name, Resource.from_contents(json.loads(path.read_text())))
    return reg


_REGISTRY = _registry()


def validate(obj, schema_name: str) -> None:
    schema = _REGISTRY.contents(f"{schema_name}.schema.json")
    Draft202012Validator(schema, registry=_REGISTRY).validate(obj)


@pytest.fixture(scope="session")
def specs():
    return SPECS


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
