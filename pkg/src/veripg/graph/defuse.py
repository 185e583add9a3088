"""Signal definition/use analysis shared by graph construction and import.

Works over an abstract (nodes, children) view so it can run both on the
freshly parsed tree and on a re-imported graph whose AST edges already
have the common-to-common links removed.

Dependency semantics:
  - non-blocking and continuous defs reach every use of the signal in
    the module (register state is visible module-wide);
  - a blocking def reaches only uses at later statements within its own
    always block, but crosses block boundaries unrestricted;
  - a use that no def reaches is recorded with no edge.

Bit and part selects alias the whole signal.
"""

from __future__ import annotations

from typing import Callable

from veripg.frontend.nodes import AstNode, NodeType
from veripg.graph.model import DefUseRecord, Edge, EdgeKind

_ASSIGN_KINDS = {
    NodeType.Assign: "continuous",
    NodeType.BlockingSubstitution: "blocking",
    NodeType.NonblockingSubstitution: "nonblocking",
}

# Module items that terminate an always block's id extent.
_TOP_LEVEL_TYPES = frozenset(
    {
        NodeType.Always,
        NodeType.Assign,
        NodeType.Instance,
        NodeType.Port,
        NodeType.InputDecl,
        NodeType.OutputDecl,
        NodeType.InoutDecl,
        NodeType.WireDecl,
        NodeType.RegDecl,
        NodeType.Parameter,
    }
)

ChildrenFn = Callable[[int], list[int]]


def _own_subtree(nid: int, nodes: dict[int, AstNode], children: ChildrenFn, common: set[int]):
    """Yield the nodes of `nid`'s syntax segment, not descending into
    other common nodes."""
    stack = [nid]
    while stack:
        cur = stack.pop()
        yield nodes[cur]
        for c in children(cur):
            if c != nid and c in common:
                continue
            stack.append(c)


def _identifier_reads(root: AstNode) -> set[str]:
    names: set[str] = set()
    for n in root.walk():
        if n.node_type in (NodeType.Identifier, NodeType.PartSelect) and n.name:
            names.add(n.name)
    return names


def _lhs_targets(lhs: AstNode) -> tuple[set[str], set[str]]:
    """Split an lvalue subtree into (written names, read names).

    Part-select indexes on the left-hand side are reads; concatenation
    elements are all written.
    """
    written: set[str] = set()
    read: set[str] = set()
    elements = lhs.children if lhs.node_type == NodeType.Operator and lhs.value == "{}" else [lhs]
    for el in elements:
        if el.node_type == NodeType.Identifier and el.name:
            written.add(el.name)
        elif el.node_type == NodeType.PartSelect and el.name:
            written.add(el.name)
            for idx in el.children:
                read |= _identifier_reads(idx)
        else:
            read |= _identifier_reads(el)
    return written, read


def always_extents(nodes: dict[int, AstNode]) -> dict[int, tuple[int, int]]:
    """Half-open id extent (start, end) of every always block.

    Statement ids are pre-order, so a block's statements all fall
    between its own id and the next top-level item's id.
    """
    tops = sorted(nid for nid, n in nodes.items() if n.node_type in _TOP_LEVEL_TYPES)
    extents: dict[int, tuple[int, int]] = {}
    sentinel = (max(nodes) + 1) if nodes else 0
    for i, nid in enumerate(tops):
        if nodes[nid].node_type != NodeType.Always:
            continue
        end = sentinel
        for later in tops[i + 1 :]:
            end = later
            break
        extents[nid] = (nid, end)
    return extents


def owner_always(nid: int, extents: dict[int, tuple[int, int]]) -> int | None:
    for always_id, (start, end) in extents.items():
        if start < nid < end or nid == always_id:
            return always_id
    return None


def scan_def_use(
    nodes: dict[int, AstNode],
    children: ChildrenFn,
    common: set[int],
) -> dict[str, DefUseRecord]:
    """Collect per-signal defs and uses anchored at common nodes."""
    records: dict[str, DefUseRecord] = {}

    def rec(signal: str) -> DefUseRecord:
        if signal not in records:
            records[signal] = DefUseRecord(signal)
        return records[signal]

    for cid in sorted(common):
        node = nodes[cid]
        written: set[str] = set()
        read: set[str] = set()
        if node.node_type in _ASSIGN_KINDS:
            kids = children(cid)
            if len(kids) >= 2:
                written, read = _lhs_targets(nodes[kids[0]])
                for rhs in kids[1:]:
                    read |= _collect_reads(rhs, nodes, children, common, skip=cid)
        else:
            for sub in _own_subtree(cid, nodes, children, common):
                if sub.id == cid:
                    continue
                if sub.node_type in (NodeType.Identifier, NodeType.PartSelect) and sub.name:
                    read.add(sub.name)
        kind = _ASSIGN_KINDS.get(node.node_type)
        for name in sorted(written):
            rec(name).defs.append((cid, kind or "continuous"))
        for name in sorted(read):
            uses = rec(name).uses
            if not uses or uses[-1] != cid:
                uses.append(cid)

    for r in records.values():
        r.defs.sort(key=lambda d: d[0])
        r.uses = sorted(set(r.uses))
    return dict(sorted(records.items()))


def _collect_reads(
    root_id: int,
    nodes: dict[int, AstNode],
    children: ChildrenFn,
    common: set[int],
    skip: int,
) -> set[str]:
    names: set[str] = set()
    stack = [root_id]
    while stack:
        cur = stack.pop()
        n = nodes[cur]
        if n.node_type in (NodeType.Identifier, NodeType.PartSelect) and n.name:
            names.add(n.name)
        for c in children(cur):
            if c != skip and c in common:
                continue
            stack.append(c)
    return names


def def_reaches_use(
    def_id: int,
    kind: str,
    use_id: int,
    extents: dict[int, tuple[int, int]],
) -> bool:
    if kind != "blocking":
        return True
    d_owner = owner_always(def_id, extents)
    u_owner = owner_always(use_id, extents)
    if d_owner is not None and d_owner == u_owner:
        return use_id > def_id
    return True


def dependency_edges(
    records: dict[str, DefUseRecord],
    nodes: dict[int, AstNode],
) -> list[Edge]:
    extents = always_extents(nodes)
    edges: set[Edge] = set()
    for signal, r in records.items():
        for def_id, kind in r.defs:
            for use_id in r.uses:
                if def_id == use_id and kind == "blocking":
                    continue  # the RHS read happens before the write
                if def_reaches_use(def_id, kind, use_id, extents):
                    edges.add(Edge(def_id, use_id, EdgeKind.DDG, dep_signal=signal))
    return sorted(edges, key=lambda e: (e.src, e.dst, e.dep_signal or ""))
