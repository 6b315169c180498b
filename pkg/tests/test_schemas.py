import math

import jsonschema
import pytest

from qasym.asymptotics import RemainderTable, fit_q_gevrey
from qasym.equation import default_spec
from qasym.frames import make_qframe
from qasym.geometry import geometry_scenario_to_dict, make_cyclic_covering
from qasym.model import default_scenario
from qasym.schemas import (SCHEMA_NAMES, load_schema, validate_payload,
                           validator_for)


def planted_fit_payload():
    q, k, C, A = 2.0, 1.0, 0.7, 1.4
    table = RemainderTable()
    for N in range(5):
        for em in (0.2, 0.3):
            table.add(N, em, C * A ** (N + 1)
                      * q ** (N * (N + 1) / (2 * k)) * em ** (N + 1))
    return fit_q_gevrey(table, q, k).to_dict()


CANONICAL = {
    "qframe": lambda: make_qframe(2.0, 1.0, 2.0, 0.4, 0.9).to_dict(),
    "equation_spec": lambda: default_spec().to_dict(),
    "geometry_scenario": lambda: geometry_scenario_to_dict(
        make_cyclic_covering(4, 0.4, math.radians(60), math.radians(45)),
        [math.radians(90.0 * p) for p in range(4)], 0.3, 0.8),
    "model_scenario": lambda: default_scenario().to_dict(),
    "gevrey_fit": planted_fit_payload,
    "qlaplace_result": lambda: {"value": {"re": 0.064, "im": 0.0},
                                "error_estimate": 3.2e-13, "nodes_used": 87,
                                "direction_used": 0.0,
                                "relative_deviation": 2.2e-16},
}


class TestSchemaFiles:
    def test_every_schema_is_valid_draft07(self):
        for name in SCHEMA_NAMES:
            jsonschema.Draft7Validator.check_schema(load_schema(name))

    def test_names_and_ids_line_up(self):
        assert set(CANONICAL) == set(SCHEMA_NAMES)
        for name in SCHEMA_NAMES:
            assert load_schema(name)["$id"] == f"qasym:{name}"

    def test_unknown_name_raises(self):
        with pytest.raises(KeyError):
            load_schema("no_such_schema")


class TestCanonicalPayloads:
    @pytest.mark.parametrize("name", sorted(CANONICAL))
    def test_producer_output_validates(self, name):
        validate_payload(name, CANONICAL[name]())

    def test_validator_for_is_usable_directly(self):
        v = validator_for("qframe")
        assert v.is_valid(CANONICAL["qframe"]())
        assert not v.is_valid({"q": 2.0})


class TestRejections:
    def _refuse(self, name, payload):
        with pytest.raises(jsonschema.ValidationError):
            validate_payload(name, payload)

    def test_qframe(self):
        good = CANONICAL["qframe"]()
        self._refuse("qframe", {**good, "q": 1.0})        # base must exceed 1
        self._refuse("qframe", {k: v for k, v in good.items() if k != "rT"})
        self._refuse("qframe", {**good, "extra": 1})

    def test_equation_spec(self):
        good = CANONICAL["equation_spec"]()
        bad_term = dict(good["terms"][0])
        bad_term["delta"] = 1.5                            # must be [num, den]
        self._refuse("equation_spec", {**good,
                                       "terms": [bad_term] + good["terms"][1:]})
        self._refuse("equation_spec", {**good, "d_D1": 0})
        # cross-reference into the qframe schema must be enforced
        self._refuse("equation_spec",
                     {**good, "frame": {**good["frame"], "q": 0.5}})

    def test_geometry_scenario(self):
        good = CANONICAL["geometry_scenario"]()
        self._refuse("geometry_scenario",
                     {k: v for k, v in good.items() if k != "delta_t"})
        bad_cov = [dict(s) for s in good["covering"]]
        bad_cov[0]["opening"] = 0.0
        self._refuse("geometry_scenario", {**good, "covering": bad_cov})

    def test_model_scenario(self):
        good = CANONICAL["model_scenario"]()
        bad = {**good, "poles": [{"location": [1.2, 0.0], "strength": 0.5}]}
        self._refuse("model_scenario", bad)
        self._refuse("model_scenario",
                     {**good, "frame": {**good["frame"], "q": 0.5}})

    def test_gevrey_fit(self):
        good = CANONICAL["gevrey_fit"]()
        self._refuse("gevrey_fit", {**good, "kind": "other"})
        self._refuse("gevrey_fit", {**good, "n_rows": 0})
        self._refuse("gevrey_fit",
                     {k: v for k, v in good.items() if k != "certified"})

    def test_qlaplace_result(self):
        good = CANONICAL["qlaplace_result"]()
        self._refuse("qlaplace_result", {**good, "error_estimate": -1e-3})
        self._refuse("qlaplace_result", {**good, "value": {"re": 1.0}})
        self._refuse("qlaplace_result", {**good, "nodes_used": 3.5})
