"""Graph construction: common-node extraction, per-block CFGs, module DDG,
and the fusion step that ties them into one VeriPG.

Fusion drops every AST edge whose destination is a common node, which
decomposes the syntax tree into one subtree per statement plus the
Source/ModuleDef scaffolding; connectivity between statements is then
carried by CFG and DDG edges only.
"""

from __future__ import annotations

from veripg.frontend.nodes import COMMON_TYPES, AstNode, NodeType, node_index
from veripg.graph.defuse import dependency_edges, scan_def_use
from veripg.graph.model import (
    CfgFragment,
    DefUseRecord,
    Edge,
    EdgeKind,
    InconsistentInput,
    VeriPG,
)

_BRANCHING = (NodeType.IfStatement, NodeType.CaseStatement, NodeType.ForStatement)
_SIMPLE_STMTS = (NodeType.BlockingSubstitution, NodeType.NonblockingSubstitution)


def extract_common_nodes(ast: AstNode) -> set[int]:
    """Ids of all statement-level nodes in the (sub)tree."""
    return {n.id for n in ast.walk() if n.node_type in COMMON_TYPES}


# -- CFG ----------------------------------------------------------------

def _flatten(stmt: AstNode) -> list[AstNode]:
    """Expand transparent Block nesting into a flat statement sequence,
    dropping Opaque placeholders."""
    if stmt.node_type == NodeType.Block:
        out: list[AstNode] = []
        for child in stmt.children:
            out.extend(_flatten(child))
        return out
    if stmt.node_type == NodeType.Opaque:
        return []
    return [stmt]


def _connect(edges: list[Edge], tails: list[tuple[int, str]], head: int) -> None:
    for tail_id, label in tails:
        edges.append(Edge(tail_id, head, EdgeKind.CFG, condition=label))


def _chain(stmts: list[AstNode], tails: list[tuple[int, str]], edges: list[Edge]) -> list[tuple[int, str]]:
    for stmt in stmts:
        _connect(edges, tails, stmt.id)
        tails = _stmt_tails(stmt, edges)
    return tails


def _stmt_tails(stmt: AstNode, edges: list[Edge]) -> list[tuple[int, str]]:
    t = stmt.node_type

    if t in _SIMPLE_STMTS:
        return [(stmt.id, "fallthrough")]

    if t == NodeType.IfStatement:
        then_stmts = _flatten(stmt.children[1])
        tails = _chain(then_stmts, [(stmt.id, "true")], edges) if then_stmts else [(stmt.id, "true")]
        if len(stmt.children) > 2:
            else_stmts = _flatten(stmt.children[2])
            tails += _chain(else_stmts, [(stmt.id, "false")], edges) if else_stmts else [(stmt.id, "false")]
        else:
            tails.append((stmt.id, "false"))
        return tails

    if t == NodeType.CaseStatement:
        tails: list[tuple[int, str]] = []
        has_default = False
        for item in stmt.children[1:]:
            if item.node_type != NodeType.CaseItem:
                continue
            label = f"case:{item.value}"
            has_default = has_default or item.value == "default"
            edges.append(Edge(stmt.id, item.id, EdgeKind.CFG, condition=label))
            body = [c for c in item.children if c.node_type not in (NodeType.Operator, NodeType.Identifier, NodeType.Constant, NodeType.PartSelect)]
            body_stmts: list[AstNode] = []
            for b in body:
                body_stmts.extend(_flatten(b))
            tails += _chain(body_stmts, [(item.id, "fallthrough")], edges) if body_stmts else [(item.id, "fallthrough")]
        if not has_default:
            tails.append((stmt.id, "fallthrough"))
        return tails

    if t == NodeType.ForStatement:
        body_stmts = _flatten(stmt.children[3])
        if body_stmts:
            loop_tails = _chain(body_stmts, [(stmt.id, "true")], edges)
            for tail_id, _ in loop_tails:
                edges.append(Edge(tail_id, stmt.id, EdgeKind.CFG, condition="loop"))
        return [(stmt.id, "false")]

    # Opaque and anything unexpected: transparent.
    return []


def build_cfg(ast: AstNode, common: set[int], warnings: list | None = None) -> list[CfgFragment]:
    """One fragment per always block, one trivial fragment per continuous
    assign.  Fragments never share edges (parallel blocks stay apart)."""
    fragments: list[CfgFragment] = []
    for node in ast.walk():
        if node.node_type == NodeType.Always:
            edges: list[Edge] = []
            body_stmts = _flatten(node.children[1]) if len(node.children) > 1 else []
            if not body_stmts and warnings is not None:
                warnings.append((node.lineno, "always block with no analyzable statements"))
            tails = _chain(body_stmts, [(node.id, "fallthrough")], edges)
            fragments.append(
                CfgFragment(owner=node.id, entry=node.id, exits=sorted({t for t, _ in tails}), edges=edges)
            )
        elif node.node_type == NodeType.Assign:
            fragments.append(CfgFragment(owner=node.id, entry=node.id, exits=[node.id], edges=[]))
    return fragments


# -- DDG ----------------------------------------------------------------

def _tree_children(ast: AstNode):
    table = {n.id: [c.id for c in n.children] for n in ast.walk()}
    return lambda nid: table.get(nid, [])


def build_ddg(ast: AstNode, common: set[int]) -> tuple[list[DefUseRecord], list[Edge]]:
    nodes = node_index(ast)
    records = scan_def_use(nodes, _tree_children(ast), common)
    edges = dependency_edges(records, nodes)
    return list(records.values()), edges


# -- fusion -------------------------------------------------------------

def fuse(
    ast: AstNode,
    common: set[int],
    cfg_fragments: list[CfgFragment],
    ddg_edges: list[Edge],
    module: AstNode | None = None,
) -> VeriPG:
    """Combine the three views into one immutable graph.

    `ast` is the Source root (kept in the graph as scaffolding); `module`
    selects which ModuleDef to fuse when the file holds several.
    """
    if ast.node_type == NodeType.Source:
        source = ast
        if module is None:
            if not ast.children:
                raise InconsistentInput("source tree has no modules")
            module = ast.children[0]
    else:
        source = None
        module = ast

    nodes: dict[int, AstNode] = {n.id: n for n in module.walk()}
    edges: list[Edge] = []
    if source is not None:
        nodes[source.id] = source
        edges.append(Edge(source.id, module.id, EdgeKind.AST))

    for parent in module.walk():
        for child in parent.children:
            if child.id in common:
                continue
            edges.append(Edge(parent.id, child.id, EdgeKind.AST))

    for frag in cfg_fragments:
        for e in frag.edges:
            if e.src not in common or e.dst not in common:
                raise InconsistentInput(f"CFG edge {e.src}->{e.dst} endpoint is not a common node")
            edges.append(e)
    for e in ddg_edges:
        if e.src not in common or e.dst not in common:
            raise InconsistentInput(f"DDG edge {e.src}->{e.dst} endpoint is not a common node")
        edges.append(e)

    module_nodes = nodes
    def_use = scan_def_use(
        module_nodes,
        _tree_children(module),
        common,
    )
    return VeriPG(
        module_name=module.name or "<anonymous>",
        nodes=nodes,
        edges=edges,
        common_nodes=set(common),
        def_use=def_use,
    )


def build_graph(root: AstNode, module_index: int = 0) -> VeriPG:
    """Parse-tree to VeriPG pipeline for one module of a Source tree."""
    if root.node_type != NodeType.Source:
        raise InconsistentInput("build_graph expects a Source root")
    try:
        module = root.children[module_index]
    except IndexError:
        raise InconsistentInput(f"no module at index {module_index}") from None
    common = extract_common_nodes(module)
    fragments = build_cfg(module, common)
    _records, ddg = build_ddg(module, common)
    return fuse(root, common, fragments, ddg, module=module)


def build_graphs(root: AstNode) -> list[VeriPG]:
    return [build_graph(root, i) for i in range(len(root.children))]
