from __future__ import annotations

import json

import pytest

from veripg.rules.catalog import catalog, primitive_spec
from veripg.rules.model import (
    ArityMismatch,
    Filter,
    Predicate,
    PrimitiveCall,
    Rule,
    RuleSchemaError,
    UnknownPrimitive,
    count_primitive_calls,
    parse_rule,
    rule_to_dict,
    serialize_rule,
)
from veripg.rules.packs import load_pack, pack_files


def test_catalog_is_closed_and_stable():
    specs = catalog()
    assert [s.name for s in specs] == [
        "Node",
        "Children",
        "Descendants",
        "Parents",
        "Branch",
        "CondVars",
        "Variable",
        "LoadStatement",
        "AssignStatement",
        "SensList",
        "FsmStates",
        "Exist",
        "Absent",
        "Count",
    ]
    assert len({s.name for s in specs}) == 14


def test_catalog_node_entry():
    node = primitive_spec("Node")
    assert node.category == "generic"
    assert node.param_schema == (("node_type", "node_type"),)
    assert node.input_state == "entry"


def test_catalog_branch_entry():
    branch = primitive_spec("Branch")
    assert branch.category == "verilog_specific"
    assert branch.input_state == frozenset({"IfStatement", "CaseStatement"})


def test_catalog_exist_is_boolean():
    exist = primitive_spec("Exist")
    assert exist.category == "boolean"
    assert exist.output_state == "boolean"


def test_pack_primitives_all_in_catalog(pack):
    names = {s.name for s in catalog()}

    def walk_operand(o):
        if isinstance(o, PrimitiveCall):
            assert o.primitive in names
            if o.filter is not None:
                walk_operand(o.filter)
        elif isinstance(o, Filter):
            for x in o.operands:
                walk_operand(x)
        elif hasattr(o, "steps"):
            for s in o.steps:
                walk_operand(s)

    for rule in pack:
        for step in rule.path.steps:
            walk_operand(step)


def test_shipped_cwe1280_rule_shape(pack):
    rule = next(r for r in pack if r.cwe == "CWE-1280")
    assert [s.primitive for s in rule.path.steps] == [
        "Variable",
        "LoadStatement",
        "AssignStatement",
        "Exist",
    ]
    assert rule.path.steps[2].params == ("blocking",)
    assert rule.verdict == "exists"


def test_empty_document_fails_at_root():
    with pytest.raises(RuleSchemaError) as err:
        parse_rule(b"{}")
    paths = {i.json_path for i in err.value.issues}
    assert "$" in paths
    assert any("rule_id" in i.message for i in err.value.issues)


def test_unknown_node_type_parses_structurally():
    rule = parse_rule(
        json.dumps(
            {
                "schema_version": 1,
                "rule_id": "r",
                "cwe": "CWE-1",
                "description": "d",
                "path": [{"primitive": "Node", "params": ["NoSuchType"]}],
                "verdict": "exists",
            }
        )
    )
    assert rule.path.steps[0].params == ("NoSuchType",)


def test_unknown_primitive_rejected_at_parse():
    with pytest.raises(UnknownPrimitive):
        parse_rule(
            json.dumps(
                {
                    "schema_version": 1,
                    "rule_id": "r",
                    "cwe": "CWE-1",
                    "description": "d",
                    "path": [{"primitive": "Teleport", "params": []}],
                    "verdict": "exists",
                }
            )
        )


def test_arity_mismatch_rejected_at_parse():
    with pytest.raises(ArityMismatch):
        parse_rule(
            json.dumps(
                {
                    "schema_version": 1,
                    "rule_id": "r",
                    "cwe": "CWE-1",
                    "description": "d",
                    "path": [{"primitive": "Node", "params": ["IfStatement", "Always"]}],
                    "verdict": "exists",
                }
            )
        )


def test_unknown_keys_are_errors():
    with pytest.raises(RuleSchemaError) as err:
        parse_rule(
            json.dumps(
                {
                    "schema_version": 1,
                    "rule_id": "r",
                    "cwe": "CWE-1",
                    "description": "d",
                    "path": [{"primitive": "Variable", "params": [], "extra": 1}],
                    "verdict": "exists",
                    "surprise": True,
                }
            )
        )
    paths = {i.json_path for i in err.value.issues}
    assert "$.surprise" in paths
    assert "$.path[0].extra" in paths


def test_unknown_schema_version_rejected():
    with pytest.raises(RuleSchemaError):
        parse_rule(
            json.dumps(
                {
                    "schema_version": 99,
                    "rule_id": "r",
                    "cwe": "CWE-1",
                    "description": "d",
                    "path": [{"primitive": "Variable", "params": []}],
                    "verdict": "exists",
                }
            )
        )


def test_filter_operand_order_preserved():
    doc = {
        "schema_version": 1,
        "rule_id": "r",
        "cwe": "CWE-1",
        "description": "d",
        "path": [
            {
                "primitive": "Variable",
                "params": [],
                "filter": {
                    "op": "AND",
                    "operands": [
                        {"attribute": "name", "relation": "eq", "literal": "ctrl"},
                        {"attribute": "type", "relation": "eq", "literal": "RegDecl"},
                    ],
                },
            },
            {"primitive": "Exist", "params": []},
        ],
        "verdict": "exists",
    }
    rule = parse_rule(json.dumps(doc))
    ops = rule.path.steps[0].filter.operands
    assert [o.literal for o in ops] == ["ctrl", "RegDecl"]
    again = parse_rule(serialize_rule(rule))
    assert again == rule


def test_filter_arity_contracts():
    base = {
        "schema_version": 1,
        "rule_id": "r",
        "cwe": "CWE-1",
        "description": "d",
        "verdict": "exists",
    }
    for bad_filter in [
        {"op": "NOT", "operands": []},
        {"op": "AND", "operands": [{"attribute": "type", "relation": "eq", "literal": "x"}]},
        {"op": "CMP", "operands": [{"primitive": "Exist", "params": []}]},
    ]:
        doc = dict(base, path=[{"primitive": "Variable", "params": [], "filter": bad_filter}])
        with pytest.raises(RuleSchemaError):
            parse_rule(json.dumps(doc))


def test_serialize_round_trip_all_pack_rules(pack):
    for rule in pack:
        data = serialize_rule(rule)
        assert parse_rule(data) == rule
        assert serialize_rule(parse_rule(data)) == data


def test_pack_files_are_canonical(pack):
    by_cwe = {r.cwe: r for r in pack}
    for name, data in pack_files():
        rule = parse_rule(data)
        assert serialize_rule(by_cwe[rule.cwe]) == data, name


def test_report_at_bounds_checked():
    with pytest.raises(RuleSchemaError):
        parse_rule(
            json.dumps(
                {
                    "schema_version": 1,
                    "rule_id": "r",
                    "cwe": "CWE-1",
                    "description": "d",
                    "path": [{"primitive": "Variable", "params": []}],
                    "verdict": "exists",
                    "report_at": 5,
                }
            )
        )


def test_count_primitive_calls_nested():
    rule = parse_rule(
        json.dumps(
            {
                "schema_version": 1,
                "rule_id": "r",
                "cwe": "CWE-1",
                "description": "d",
                "path": [
                    {
                        "primitive": "Node",
                        "params": ["IfStatement"],
                        "filter": {
                            "op": "AND",
                            "operands": [
                                {"path": [{"primitive": "CondVars", "params": []},
                                          {"primitive": "Exist", "params": []}]},
                                {"primitive": "Branch", "params": []},
                            ],
                        },
                    },
                    {"primitive": "Exist", "params": []},
                ],
                "verdict": "exists",
            }
        )
    )
    assert count_primitive_calls(rule) == 5
