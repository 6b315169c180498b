"""Draft-07 JSON schemas for the serialized objects, shipped as package
data under ``qasym/schemas/``; ``validate_payload`` resolves the internal
``qasym:*`` cross-references."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

SCHEMA_NAMES = (
    "qframe",
    "equation_spec",
    "geometry_scenario",
    "model_scenario",
    "gevrey_fit",
    "qlaplace_result",
)


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    if name not in SCHEMA_NAMES:
        raise KeyError(f"unknown schema '{name}'; have {sorted(SCHEMA_NAMES)}")
    path = resources.files("qasym") / "schemas" / f"{name}.json"
    return json.loads(path.read_text(encoding="utf-8"))


@lru_cache(maxsize=None)
def _registry():
    from referencing import Registry, Resource

    return Registry().with_resources(
        (f"qasym:{name}", Resource.from_contents(load_schema(name)))
        for name in SCHEMA_NAMES
    )


def validator_for(name: str):
    from jsonschema import Draft7Validator

    return Draft7Validator(load_schema(name), registry=_registry())


def validate_payload(name: str, payload: dict) -> None:
    """Raise jsonschema.ValidationError if payload does not conform."""
    validator_for(name).validate(payload)
