"""Typed AST node model.

Every node carries the four queryable properties (type, name, lineno,
value) plus its ordered children.  Node ids are dense integers assigned
in pre-order after a parse, so id order equals source order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator


class NodeType(str, Enum):
    Source = "Source"
    ModuleDef = "ModuleDef"
    Port = "Port"
    InputDecl = "InputDecl"
    OutputDecl = "OutputDecl"
    InoutDecl = "InoutDecl"
    WireDecl = "WireDecl"
    RegDecl = "RegDecl"
    Parameter = "Parameter"
    Assign = "Assign"
    Always = "Always"
    SensList = "SensList"
    Block = "Block"
    IfStatement = "IfStatement"
    CaseStatement = "CaseStatement"
    CaseItem = "CaseItem"
    ForStatement = "ForStatement"
    BlockingSubstitution = "BlockingSubstitution"
    NonblockingSubstitution = "NonblockingSubstitution"
    Operator = "Operator"
    Identifier = "Identifier"
    Constant = "Constant"
    PartSelect = "PartSelect"
    Instance = "Instance"
    Opaque = "Opaque"


# Node types that must carry a non-empty name.
NAMED_TYPES = frozenset(
    {
        NodeType.Identifier,
        NodeType.ModuleDef,
        NodeType.Port,
        NodeType.RegDecl,
        NodeType.WireDecl,
        NodeType.InputDecl,
        NodeType.OutputDecl,
        NodeType.InoutDecl,
        NodeType.Parameter,
    }
)

# Declaration node types; these double as the "declared signal" carriers
# for the Variable traversal primitive (Parameter is a named constant,
# not a signal, and is deliberately excluded there).
DECL_TYPES = frozenset(
    {
        NodeType.Port,
        NodeType.InputDecl,
        NodeType.OutputDecl,
        NodeType.InoutDecl,
        NodeType.WireDecl,
        NodeType.RegDecl,
        NodeType.Parameter,
    }
)

SIGNAL_DECL_TYPES = frozenset(DECL_TYPES - {NodeType.Parameter})

# Statement-level node types: the common nodes shared by AST, CFG and DDG.
COMMON_TYPES = frozenset(
    {
        NodeType.Always,
        NodeType.Assign,
        NodeType.IfStatement,
        NodeType.CaseStatement,
        NodeType.CaseItem,
        NodeType.ForStatement,
        NodeType.BlockingSubstitution,
        NodeType.NonblockingSubstitution,
    }
    | DECL_TYPES
)


@dataclass
class AstNode:
    node_type: NodeType
    lineno: int
    name: str | None = None
    value: str | None = None
    children: list["AstNode"] = field(default_factory=list)
    id: int = -1

    def walk(self) -> Iterator["AstNode"]:
        """Pre-order traversal of this subtree."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def __repr__(self) -> str:
        bits = [self.node_type.value, f"L{self.lineno}"]
        if self.name:
            bits.append(f"name={self.name}")
        if self.value is not None:
            bits.append(f"value={self.value!r}")
        return f"AstNode({', '.join(bits)}, {len(self.children)} children)"


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str  # "error" | "warning"
    lineno: int
    message: str


def assign_ids(root: AstNode) -> None:
    """Assign dense pre-order ids starting at 0."""
    for i, node in enumerate(root.walk()):
        node.id = i


def node_index(root: AstNode) -> dict[int, AstNode]:
    return {n.id: n for n in root.walk()}


def ast_to_records(root: AstNode) -> list[dict]:
    """Pre-order list of {id, type, name, lineno, value, children} records."""
    return [
        {
            "id": n.id,
            "type": n.node_type.value,
            "name": n.name,
            "lineno": n.lineno,
            "value": n.value,
            "children": [c.id for c in n.children],
        }
        for n in root.walk()
    ]


def dump_ast_json(root: AstNode) -> bytes:
    """Stable JSON export consumed by golden-file tests."""
    text = json.dumps(ast_to_records(root), indent=2, sort_keys=True)
    return (text + "\n").encode("utf-8")


def isomorphic(a: AstNode, b: AstNode) -> bool:
    """Structural equality ignoring ids and line numbers."""
    if a.node_type != b.node_type or a.name != b.name or a.value != b.value:
        return False
    if len(a.children) != len(b.children):
        return False
    return all(isomorphic(x, y) for x, y in zip(a.children, b.children))
