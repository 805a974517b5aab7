# Copyright 2026 The norobi authors
#
#    Licensed under the Apache License, Version 2.0 (the "License");
#    you may not use this file except in compliance with the License.
#    You may obtain a copy of the License at
#
#        http://www.apache.org/licenses/LICENSE-2.0
#
#    Unless required by applicable law or agreed to in writing, software
#    distributed under the License is distributed on an "AS IS" BASIS,
#    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#    See the License for the specific language governing permissions and
#    limitations under the License.

"""Smoke tests for the python bindings."""

import json
import os
from fractions import Fraction

import pytest

import norobi

FIXTURES = os.environ.get(
    "NOROBI_FIXTURE_DIR",
    os.path.join(os.path.dirname(__file__), os.pardir, "fixtures"),
)


def fixture(name):
    return norobi.load_instance(os.path.join(FIXTURES, name))


def test_parse_and_introspect():
    inst = fixture("e1.json")
    assert inst.num_levels == 2
    assert inst.variable_names == ["x", "v"]
    assert norobi.validate(inst) == []
    again = norobi.parse_instance(inst.to_json())
    assert again.to_json() == inst.to_json()


def test_parse_errors_are_value_errors():
    with pytest.raises(ValueError):
        norobi.parse_instance("{not json")
    with pytest.raises(ValueError):
        norobi.parse_instance('{"variables": [], "levels": []}')


def test_solve_robust_bilevel():
    result = norobi.solve(fixture("e1.json"))
    assert result["status"] == "OPTIMAL"
    assert Fraction(result["value"]) == 4
    assert result["witness"] == {"v": "2", "x": "2"}


def test_solve_infeasible():
    result = norobi.solve(fixture("e1_infeasible.json"))
    assert result["status"] == "INFEASIBLE"
    assert "value" not in result


def test_compare_ordering():
    report = norobi.compare(fixture("e1.json"))
    values = [Fraction(report[k]["value"])
              for k in ("canonical", "norbip", "norbip_alt")]
    assert values == [2, 4, 4]
    assert values[0] <= values[1] <= values[2]


def test_verify_accept_and_reject():
    inst = fixture("e1.json")
    good = norobi.verify(inst, {"x": "2", "v": "2"}, bound="4")
    assert good["overall"] == "ACCEPT"
    assert [s["label"] for s in good["steps"]] == [
        "objective_bound",
        "upper_feasibility",
        "lower_feasibility",
        "lower_optimality",
        "worst_case_adversaries",
        "robust_feasibility",
    ]
    bad = norobi.verify(inst, {"x": "1", "v": "1"}, bound="4")
    assert bad["overall"] == "REJECT"
    assert bad["steps"][5]["verdict"] == "FAIL"


def test_exact_rationals_cross_the_boundary():
    inst = fixture("e_tu.json")
    result = norobi.solve(inst)
    assert Fraction(result["value"]) == -1
    report = norobi.verify(inst, {"x": "0", "y1": "1", "y2": "1"})
    worst = report["steps"][4]["evidence"]["adversaries"][0]
    assert Fraction(worst["worst_value"]) == Fraction(-1, 10)
    assert Fraction(worst["witness"]["y1"]) == Fraction(1, 2)


def test_delta_sweep_monotone():
    sweep = norobi.delta_sweep(fixture("e1.json"), ["0", "1", "2"])
    assert [entry[0] for entry in sweep] == ["0", "1", "2"]
    assert Fraction(sweep[0][1]["value"]) == 2
    assert Fraction(sweep[1][1]["value"]) == 4
    assert sweep[2][1]["status"] == "INFEASIBLE"


def test_anticipation_graph():
    dot = norobi.anticipation_graph_dot(fixture("e1.json"))
    assert dot.count('";') == 3
    assert 'label="param"' in dot
    assert 'label="anticipate"' in dot


def test_emit_subproblems_reparse():
    documents = norobi.emit_subproblems(fixture("e1.json"))
    assert "epigraph" in documents
    for text in documents.values():
        flat = norobi.parse_instance(text)
        assert flat.num_levels == 1


def test_evaluate_objective():
    inst = fixture("e1.json")
    assert norobi.evaluate_objective(inst, 0, {"x": "2", "v": "2"}) == "4"
    assert norobi.evaluate_objective(inst, 1, {"x": "2", "v": "1/2"}) == "-1/2"


def test_oracle_cap_is_enforced():
    with pytest.raises(RuntimeError):
        norobi.solve(fixture("e1.json"), oracle_cap=1)


def test_generalized_multilevel_nested_report():
    inst = fixture("g4.json")
    result = norobi.solve(inst)
    assert Fraction(result["value"]) == 5
    report = norobi.verify(inst, result["witness"], bound=result["value"])
    assert report["mode"] == "GNORMP"
    assert report["overall"] == "ACCEPT"
    uppers = report["steps"][3]
    assert uppers["label"] == "upper_level_optimality"
    nested = uppers["nested"]
    assert len(nested) == 1
    assert nested[0]["mode"] == "NORBIP"
    assert nested[0]["overall"] == "ACCEPT"
