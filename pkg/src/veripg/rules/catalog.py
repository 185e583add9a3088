"""Closed catalog of graph-traversal primitives.

Three categories: generic graph walks, Verilog-aware walks, and boolean
folds.  Each entry pins the parameter schema and the node-type states a
primitive may be applied at / produces, which is exactly the data the
validation state machine is built from.

The *_CHILD/SUCC tables describe which node types can be adjacent in a
well-formed graph, per edge kind.  They mirror the construction rules in
veripg.graph.build and are what makes parameter-aware state tracking
possible before any concrete graph exists.
"""

from __future__ import annotations

from dataclasses import dataclass

from veripg.frontend.nodes import NodeType

NODE_TYPE_NAMES = frozenset(t.value for t in NodeType)
EDGE_KIND_NAMES = frozenset({"AST", "CFG", "DDG"})
ASSIGN_KIND_VALUES = frozenset({"blocking", "nonblocking", "continuous", "any"})
COUNT_COMPARATORS = frozenset({"eq", "ne", "lt", "le", "gt", "ge"})
PREDICATE_ATTRIBUTES = frozenset({"type", "name", "value", "lineno", "condition"})
PREDICATE_RELATIONS = frozenset({"eq", "neq", "contains", "in"})

STMT_STATES = frozenset(
    {"IfStatement", "CaseStatement", "ForStatement", "BlockingSubstitution", "NonblockingSubstitution"}
)
USE_ANCHOR_STATES = STMT_STATES | {"Always", "CaseItem", "Assign"}
DEF_STATES = frozenset({"BlockingSubstitution", "NonblockingSubstitution", "Assign"})
SIGNAL_DECL_STATES = frozenset(
    {"Port", "InputDecl", "OutputDecl", "InoutDecl", "WireDecl", "RegDecl"}
)

_EXPR = frozenset({"Operator", "Identifier", "Constant", "PartSelect"})

# Possible child types along kept AST edges (fusion removes edges whose
# destination is a statement-level node).
AST_CHILD_TYPES: dict[str, frozenset[str]] = {
    "Source": frozenset({"ModuleDef"}),
    "ModuleDef": frozenset({"Instance", "Opaque"}),
    "Port": frozenset(),
    "InputDecl": frozenset(),
    "OutputDecl": frozenset(),
    "InoutDecl": frozenset(),
    "WireDecl": frozenset(),
    "RegDecl": frozenset(),
    "Parameter": _EXPR,
    "Assign": _EXPR,
    "Always": frozenset({"SensList", "Block", "Opaque"}),
    "SensList": frozenset({"Identifier"}),
    "Block": frozenset({"Block", "Opaque"}),
    "IfStatement": _EXPR | {"Block", "Opaque"},
    "CaseStatement": _EXPR | {"Opaque"},
    "CaseItem": _EXPR | {"Block", "Opaque"},
    "ForStatement": _EXPR | {"Block", "Opaque"},
    "BlockingSubstitution": _EXPR,
    "NonblockingSubstitution": _EXPR,
    "Operator": _EXPR,
    "Identifier": frozenset(),
    "Constant": frozenset(),
    "PartSelect": _EXPR,
    "Instance": _EXPR,
    "Opaque": frozenset(),
}

# Possible CFG successor types (within one procedural fragment).
CFG_SUCC_TYPES: dict[str, frozenset[str]] = {
    "Always": STMT_STATES,
    "IfStatement": STMT_STATES,
    "CaseStatement": frozenset({"CaseItem"}) | STMT_STATES,
    "CaseItem": STMT_STATES,
    "ForStatement": STMT_STATES,
    "BlockingSubstitution": STMT_STATES,
    "NonblockingSubstitution": STMT_STATES,
}

# Possible DDG successor types (definition sites to use anchors).
DDG_SUCC_TYPES: dict[str, frozenset[str]] = {
    "BlockingSubstitution": USE_ANCHOR_STATES,
    "NonblockingSubstitution": USE_ANCHOR_STATES,
    "Assign": USE_ANCHOR_STATES,
}


def _reverse(table: dict[str, frozenset[str]]) -> dict[str, frozenset[str]]:
    rev: dict[str, set[str]] = {}
    for src, dsts in table.items():
        for dst in dsts:
            rev.setdefault(dst, set()).add(src)
    return {k: frozenset(v) for k, v in rev.items()}


AST_PARENT_TYPES = _reverse(AST_CHILD_TYPES)
CFG_PRED_TYPES = _reverse(CFG_SUCC_TYPES)
DDG_PRED_TYPES = _reverse(DDG_SUCC_TYPES)

FORWARD_STEP_TABLES = {"AST": AST_CHILD_TYPES, "CFG": CFG_SUCC_TYPES, "DDG": DDG_SUCC_TYPES}
REVERSE_STEP_TABLES = {"AST": AST_PARENT_TYPES, "CFG": CFG_PRED_TYPES, "DDG": DDG_PRED_TYPES}


@dataclass(frozen=True)
class PrimitiveSpec:
    name: str
    category: str  # generic | verilog_specific | boolean
    param_schema: tuple[tuple[str, str], ...]  # (param name, param kind)
    input_state: frozenset[str] | str  # set of node types, "any", or "entry"
    output_state: frozenset[str] | str  # set of node types, "any", or "boolean"
    sets_focus: bool = False
    needs_focus: bool = False


_CATALOG: tuple[PrimitiveSpec, ...] = (
    # generic graph traversal
    PrimitiveSpec("Node", "generic", (("node_type", "node_type"),), "entry", "any"),
    PrimitiveSpec("Children", "generic", (("edge_kind", "edge_kind"),), "any", "any"),
    PrimitiveSpec("Descendants", "generic", (("edge_kind", "edge_kind"),), "any", "any"),
    PrimitiveSpec("Parents", "generic", (("edge_kind", "edge_kind"),), "any", "any"),
    # Verilog-specific traversal
    PrimitiveSpec(
        "Branch", "verilog_specific", (), frozenset({"IfStatement", "CaseStatement"}), STMT_STATES | {"CaseItem"}
    ),
    PrimitiveSpec(
        "CondVars",
        "verilog_specific",
        (),
        frozenset({"IfStatement", "CaseStatement"}),
        frozenset({"Identifier", "PartSelect"}),
    ),
    PrimitiveSpec("Variable", "verilog_specific", (), "entry", SIGNAL_DECL_STATES, sets_focus=True),
    PrimitiveSpec("LoadStatement", "verilog_specific", (), "any", USE_ANCHOR_STATES, needs_focus=True),
    PrimitiveSpec(
        "AssignStatement",
        "verilog_specific",
        (("assign_kind", "string"),),
        "any",
        DEF_STATES,
        needs_focus=True,
    ),
    PrimitiveSpec("SensList", "verilog_specific", (), frozenset({"Always"}), frozenset({"Identifier"})),
    PrimitiveSpec("FsmStates", "verilog_specific", (), frozenset({"CaseStatement"}), frozenset({"CaseItem"})),
    # boolean folds
    PrimitiveSpec("Exist", "boolean", (), "any", "boolean"),
    PrimitiveSpec("Absent", "boolean", (), "any", "boolean"),
    PrimitiveSpec("Count", "boolean", (("comparator", "string"), ("count", "integer")), "any", "boolean"),
)

_BY_NAME = {spec.name: spec for spec in _CATALOG}


def catalog() -> list[PrimitiveSpec]:
    """The closed primitive catalog, in stable order."""
    return list(_CATALOG)


def primitive_spec(name: str) -> PrimitiveSpec | None:
    return _BY_NAME.get(name)


def check_param_values(spec: PrimitiveSpec, params: tuple) -> str | None:
    """Value-level parameter legality; returns a message or None."""
    if len(params) != len(spec.param_schema):
        return f"{spec.name} expects {len(spec.param_schema)} parameter(s), got {len(params)}"
    for (pname, pkind), value in zip(spec.param_schema, params):
        if pkind == "node_type":
            if not isinstance(value, str) or value not in NODE_TYPE_NAMES:
                return f"{spec.name}: {pname} must be a node type, got {value!r}"
        elif pkind == "edge_kind":
            if not isinstance(value, str) or value not in EDGE_KIND_NAMES:
                return f"{spec.name}: {pname} must be one of AST/CFG/DDG, got {value!r}"
        elif pkind == "integer":
            if not isinstance(value, int) or isinstance(value, bool):
                return f"{spec.name}: {pname} must be an integer, got {value!r}"
        elif pkind == "string":
            if not isinstance(value, str):
                return f"{spec.name}: {pname} must be a string, got {value!r}"
            if spec.name == "AssignStatement" and value not in ASSIGN_KIND_VALUES:
                return f"AssignStatement: kind must be one of {sorted(ASSIGN_KIND_VALUES)}, got {value!r}"
            if spec.name == "Count" and pname == "comparator" and value not in COUNT_COMPARATORS:
                return f"Count: comparator must be one of {sorted(COUNT_COMPARATORS)}, got {value!r}"
    return None
