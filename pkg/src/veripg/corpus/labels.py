"""Structural ground-truth checks, one per covered CWE.

These scan the graph directly (no rule machinery) and are used to assert
that a mutation kept the labeled vulnerability pattern alive.
"""

from __future__ import annotations

from typing import Callable

from veripg.frontend.nodes import NodeType
from veripg.graph.model import EdgeKind, VeriPG


def _reg_names(g: VeriPG) -> set[str]:
    return {g.nodes[n].name for n in g.type_index.get("RegDecl", []) if g.nodes[n].name}


def _typed(g: VeriPG, ids, node_type: NodeType) -> list[int]:
    return [n for n in ids if g.nodes[n].node_type == node_type]


def _cfg_parents(g: VeriPG, nid: int) -> list[int]:
    return g.adjacency(EdgeKind.CFG, reverse=True).get(nid, [])


def _cfg_children(g: VeriPG, nid: int) -> list[int]:
    return g.adjacency(EdgeKind.CFG).get(nid, [])


def _ast_closure(g: VeriPG, root: int) -> set[int]:
    out: set[int] = set()
    stack = [root]
    while stack:
        cur = stack.pop()
        out.add(cur)
        stack.extend(g.ast_children(cur))
    return out


def _sens_values(g: VeriPG, always_id: int) -> list[str]:
    values = []
    for child in g.ast_children(always_id):
        if g.nodes[child].node_type == NodeType.SensList:
            for entry in g.ast_children(child):
                values.append(g.nodes[entry].value or "level")
    return values


def check_1280(g: VeriPG) -> bool:
    regs = _reg_names(g)
    for signal, rec in g.def_use.items():
        if signal not in regs:
            continue
        if_uses = _typed(g, rec.uses, NodeType.IfStatement)
        for def_id, kind in rec.defs:
            if kind != "blocking":
                continue
            for use in if_uses:
                if not g.has_edge(def_id, use, EdgeKind.DDG, dep_signal=signal):
                    return True
    return False


def check_1231(g: VeriPG) -> bool:
    regs = _reg_names(g)
    for signal, rec in g.def_use.items():
        if signal not in regs or not _typed(g, rec.uses, NodeType.IfStatement):
            continue
        for def_id, kind in rec.defs:
            if kind == "nonblocking" and _typed(g, _cfg_parents(g, def_id), NodeType.Always):
                return True
    return False


def check_1232(g: VeriPG) -> bool:
    regs = _reg_names(g)
    for signal, rec in g.def_use.items():
        if signal not in regs:
            continue
        owners = set()
        for def_id, kind in rec.defs:
            if kind == "nonblocking":
                owners.update(_typed(g, _cfg_parents(g, def_id), NodeType.Always))
        if len(owners) >= 2:
            return True
    return False


def check_1243(g: VeriPG) -> bool:
    for nid in g.type_index.get("Instance", []):
        if _typed(g, g.ast_children(nid), NodeType.Identifier):
            return True
    return False


def check_1244(g: VeriPG) -> bool:
    for nid in g.type_index.get("Assign", []):
        if _typed(g, g.ast_children(nid), NodeType.PartSelect):
            return True
    return False


def check_226(g: VeriPG) -> bool:
    regs = _reg_names(g)
    for signal, rec in g.def_use.items():
        if signal not in regs or not _typed(g, rec.uses, NodeType.Assign):
            continue
        cleared = False
        for def_id, _kind in rec.defs:
            if _typed(g, g.ast_children(def_id), NodeType.Constant):
                cleared = True
        if not cleared:
            return True
    return False


def check_1258(g: VeriPG) -> bool:
    for nid in g.type_index.get("Assign", []):
        for child in g.ast_children(nid):
            node = g.nodes[child]
            if node.node_type == NodeType.Operator and node.value == "{}":
                return True
    return False


def check_1271(g: VeriPG) -> bool:
    for always_id in g.type_index.get("Always", []):
        values = _sens_values(g, always_id)
        if "posedge" not in values or "negedge" in values:
            continue
        reachable = set()
        frontier = [always_id]
        while frontier:
            cur = frontier.pop()
            for succ in _cfg_children(g, cur):
                if succ not in reachable:
                    reachable.add(succ)
                    frontier.append(succ)
        if not _typed(g, reachable, NodeType.IfStatement):
            return True
    return False


def check_1234(g: VeriPG) -> bool:
    for nid in g.type_index.get("IfStatement", []):
        kids = g.ast_children(nid)
        if not kids:
            continue
        cond = g.nodes[kids[0]]
        if cond.node_type == NodeType.Operator and cond.value == "||":
            if _typed(g, _cfg_children(g, nid), NodeType.NonblockingSubstitution):
                return True
    return False


def check_1255(g: VeriPG) -> bool:
    for nid in g.type_index.get("ForStatement", []):
        if _typed(g, _cfg_children(g, nid), NodeType.IfStatement):
            return True
    return False


def check_1300(g: VeriPG) -> bool:
    for nid in g.type_index.get("Assign", []):
        for sub in _ast_closure(g, nid):
            node = g.nodes[sub]
            if node.node_type == NodeType.Operator and node.value == "^":
                return True
    return False


def check_1245(g: VeriPG) -> bool:
    regs = _reg_names(g)
    for nid in g.type_index.get("CaseStatement", []):
        kids = g.ast_children(nid)
        if not kids:
            continue
        sel_names = {
            g.nodes[s].name
            for s in _ast_closure(g, kids[0])
            if g.nodes[s].node_type in (NodeType.Identifier, NodeType.PartSelect)
        }
        if not (sel_names & regs):
            continue
        has_default = any(
            e.src == nid and e.kind == EdgeKind.CFG and e.condition == "case:default"
            for e in g.edges
        )
        if not has_default:
            return True
    return False


LABEL_CHECKS: dict[str, Callable[[VeriPG], bool]] = {
    "CWE-226": check_226,
    "CWE-1231": check_1231,
    "CWE-1232": check_1232,
    "CWE-1234": check_1234,
    "CWE-1243": check_1243,
    "CWE-1244": check_1244,
    "CWE-1245": check_1245,
    "CWE-1255": check_1255,
    "CWE-1258": check_1258,
    "CWE-1271": check_1271,
    "CWE-1280": check_1280,
    "CWE-1300": check_1300,
}
