#!/usr/bin/env python3
"""Regenerate golden AST dumps, graph exports, and generator fixtures."""

from __future__ import annotations

import json
from pathlib import Path

from veripg.frontend import SourceFile, dump_ast_json, parse
from veripg.generator.descriptions import builtin_description
from veripg.generator.pipeline import extract_conditions, generate_rule
from veripg.generator.provider import RecordingProvider, ScriptedProvider
from veripg.graph.build import build_graph
from veripg.graph.export import export_graph
from veripg.rules.catalog import catalog
from veripg.rules.validator import build_fsm

ROOT = Path(__file__).resolve().parents[1]
COVERAGE = ROOT / "tests" / "data" / "coverage"
GOLDEN_AST = ROOT / "tests" / "golden" / "ast"
GOLDEN_GRAPH = ROOT / "tests" / "golden" / "graph"
MISUSE = ROOT / "tests" / "fixtures" / "misuse"
TRANSCRIPTS = ROOT / "tests" / "fixtures" / "transcripts"

GRAPH_GOLDEN_DESIGNS = ["c01_ports_simple.v", "c08_seq_always.v", "c09_case.v"]


def make_ast_goldens() -> None:
    GOLDEN_AST.mkdir(parents=True, exist_ok=True)
    for f in sorted(COVERAGE.glob("*.v")):
        root, _diags = parse(SourceFile.from_path(f))
        (GOLDEN_AST / (f.stem + ".json")).write_bytes(dump_ast_json(root))
        print(f"ast golden: {f.stem}.json")


def make_graph_goldens() -> None:
    GOLDEN_GRAPH.mkdir(parents=True, exist_ok=True)
    for name in GRAPH_GOLDEN_DESIGNS:
        root, _diags = parse(SourceFile.from_path(COVERAGE / name))
        g = build_graph(root)
        out = GOLDEN_GRAPH / (Path(name).stem + ".graph.json")
        out.write_bytes(export_graph(g, "json"))
        print(f"graph golden: {out.name}")


def _rule(rule_id: str, cwe: str, path_steps: list[dict], verdict: str = "exists") -> dict:
    return {
        "schema_version": 1,
        "rule_id": rule_id,
        "cwe": cwe,
        "description": f"misuse fixture {rule_id}",
        "path": path_steps,
        "verdict": verdict,
    }


def _step(primitive: str, *params, filter=None) -> dict:
    out: dict = {"primitive": primitive, "params": list(params)}
    if filter is not None:
        out["filter"] = filter
    return out


MISUSE_FIXTURES: list[tuple[str, str, dict]] = [
    # (file stem, expected violation kind, rule document)
    ("ir01_branch_off_module", "IllegalRule",
     _rule("ir01", "CWE-1280", [_step("Node", "ModuleDef"), _step("Branch"), _step("Exist")])),
    ("ir02_senslist_off_decl", "IllegalRule",
     _rule("ir02", "CWE-1271", [_step("Variable"), _step("SensList"), _step("Exist")])),
    ("ir03_fsmstates_off_always", "IllegalRule",
     _rule("ir03", "CWE-1245", [_step("Node", "Always"), _step("FsmStates"), _step("Exist")])),
    ("ir04_branch_off_constant", "IllegalRule",
     _rule("ir04", "CWE-1234", [_step("Node", "Constant"), _step("Branch"), _step("Exist")])),
    ("ir05_primitive_after_boolean", "IllegalRule",
     _rule("ir05", "CWE-226", [_step("Node", "IfStatement"), _step("Exist"), _step("Exist")])),
    ("ir06_load_without_focus", "IllegalRule",
     _rule("ir06", "CWE-1280", [_step("Node", "Always"), _step("LoadStatement"), _step("Exist")])),
    ("ir07_assign_without_focus", "IllegalRule",
     _rule("ir07", "CWE-1280",
           [_step("Node", "IfStatement"), _step("AssignStatement", "blocking"), _step("Exist")])),
    ("ir08_cfg_step_off_decl", "IllegalRule",
     _rule("ir08", "CWE-1232", [_step("Variable"), _step("Children", "CFG"), _step("Exist")])),
    ("ir09_condvars_off_operator", "IllegalRule",
     _rule("ir09", "CWE-1234", [_step("Node", "Operator"), _step("CondVars"), _step("Exist")])),
    ("ir10_filter_internal_misapply", "IllegalRule",
     _rule("ir10", "CWE-1271",
           [_step("Node", "IfStatement",
                  filter={"path": [_step("SensList"), _step("Exist")]}),
            _step("Exist")])),
    ("ip01_unknown_node_type", "IllegalParameter",
     _rule("ip01", "CWE-1280", [_step("Node", "NoSuchType"), _step("Exist")])),
    ("ip02_unknown_edge_kind", "IllegalParameter",
     _rule("ip02", "CWE-1280", [_step("Node", "Always"), _step("Children", "XYZ"), _step("Exist")])),
    ("ip03_lowercase_edge_kind", "IllegalParameter",
     _rule("ip03", "CWE-1280", [_step("Node", "Always"), _step("Descendants", "ast"), _step("Exist")])),
    ("ip04_integer_edge_kind", "IllegalParameter",
     _rule("ip04", "CWE-1280", [_step("Node", "Always"), _step("Parents", 123), _step("Exist")])),
    ("ip05_bad_assign_kind", "IllegalParameter",
     _rule("ip05", "CWE-1280",
           [_step("Variable"), _step("AssignStatement", "sometimes"), _step("Exist")])),
    ("ip06_bad_count_comparator", "IllegalParameter",
     _rule("ip06", "CWE-1232", [_step("Node", "Always"), _step("Count", "approximately", 3)])),
    ("ip07_count_with_string", "IllegalParameter",
     _rule("ip07", "CWE-1232", [_step("Node", "Always"), _step("Count", "ge", "three")])),
    ("ip08_integer_node_type", "IllegalParameter",
     _rule("ip08", "CWE-1280", [_step("Node", 7), _step("Exist")])),
    ("ip09_unknown_attribute", "IllegalParameter",
     _rule("ip09", "CWE-1234",
           [_step("Node", "IfStatement",
                  filter={"op": "CMP",
                          "operands": [{"attribute": "color", "relation": "eq", "literal": "x"}]}),
            _step("Exist")])),
    ("ip10_unknown_relation", "IllegalParameter",
     _rule("ip10", "CWE-1234",
           [_step("Node", "IfStatement",
                  filter={"op": "CMP",
                          "operands": [{"attribute": "type", "relation": "matches", "literal": "x"}]}),
            _step("Exist")])),
]


def make_misuse_fixtures() -> None:
    MISUSE.mkdir(parents=True, exist_ok=True)
    index = {}
    for stem, kind, doc in MISUSE_FIXTURES:
        path = MISUSE / f"{stem}.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        index[f"{stem}.json"] = kind
    (MISUSE / "expected.json").write_text(
        json.dumps(index, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"misuse fixtures: {len(MISUSE_FIXTURES)}")


_CONDITIONS_REPLY = """Here are the conditions.
```json
{
  "cwe_id": "CWE-1280",
  "conditions": [
    {"subject": "registered access-control signal",
     "constraint": "read by a branch condition",
     "polarity": "must_exist"},
    {"subject": "blocking assignment producing that signal",
     "constraint": "must not execute after the reading branch in the same process",
     "polarity": "must_not_exist"}
  ]
}
```"""

_VALID_RULE_REPLY = """```json
{
  "schema_version": 1,
  "rule_id": "gen-uninit-access-check",
  "cwe": "CWE-1280",
  "description": "Registered signal read by a branch before its blocking assignment lands.",
  "path": [
    {"primitive": "Variable", "params": [],
     "filter": {"op": "CMP", "operands": [{"attribute": "type", "relation": "eq", "literal": "RegDecl"}]}},
    {"primitive": "LoadStatement", "params": [],
     "filter": {"op": "CMP", "operands": [{"attribute": "type", "relation": "eq", "literal": "IfStatement"}]}},
    {"primitive": "AssignStatement", "params": ["blocking"]},
    {"primitive": "Exist", "params": []}
  ],
  "verdict": "exists",
  "report_at": 1
}
```"""

_ILLEGAL_RULE_REPLY = """```json
{
  "schema_version": 1,
  "rule_id": "gen-bad-branch",
  "cwe": "CWE-1280",
  "description": "Broken first attempt.",
  "path": [
    {"primitive": "Node", "params": ["ModuleDef"]},
    {"primitive": "Branch", "params": []},
    {"primitive": "Exist", "params": []}
  ],
  "verdict": "exists"
}
```"""

_ILLEGAL_PARAM_REPLY = """```json
{
  "schema_version": 1,
  "rule_id": "gen-bad-kind",
  "cwe": "CWE-1280",
  "description": "Broken second attempt.",
  "path": [
    {"primitive": "Variable", "params": []},
    {"primitive": "AssignStatement", "params": ["sometimes"]},
    {"primitive": "Exist", "params": []}
  ],
  "verdict": "exists"
}
```"""


def _record(name: str, responses: list[str], cap: int) -> None:
    provider = RecordingProvider(ScriptedProvider(responses))
    desc = builtin_description("CWE-1280")
    conds = extract_conditions(desc, provider)
    fsm = build_fsm(catalog())
    session = generate_rule(conds, fsm, provider, cap=cap)
    provider.dump(TRANSCRIPTS / name)
    print(f"transcript {name}: outcome={session.outcome} iterations={len(session.iterations)}")


def make_transcripts() -> None:
    TRANSCRIPTS.mkdir(parents=True, exist_ok=True)
    _record("cwe1280_first_try.json", [_CONDITIONS_REPLY, _VALID_RULE_REPLY], cap=50)
    _record(
        "cwe1280_corrected.json",
        [_CONDITIONS_REPLY, _ILLEGAL_RULE_REPLY, _VALID_RULE_REPLY],
        cap=50,
    )
    _record(
        "cwe1280_exhausted.json",
        [_CONDITIONS_REPLY, _ILLEGAL_RULE_REPLY, _ILLEGAL_PARAM_REPLY],
        cap=2,
    )


if __name__ == "__main__":
    make_ast_goldens()
    make_graph_goldens()
    make_misuse_fixtures()
    make_transcripts()
