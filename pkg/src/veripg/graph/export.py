"""Graph serialization: stable JSON (re-importable) and DOT for eyeballs."""

from __future__ import annotations

import json

from veripg.frontend.nodes import AstNode, NodeType
from veripg.graph.defuse import scan_def_use
from veripg.graph.model import Edge, EdgeKind, VeriPG

_DOT_COLORS = {EdgeKind.AST: "black", EdgeKind.CFG: "blue", EdgeKind.DDG: "darkgreen"}


def graph_to_dict(g: VeriPG) -> dict:
    return {
        "module": g.module_name,
        "nodes": [
            {
                "id": nid,
                "type": n.node_type.value,
                "name": n.name,
                "lineno": n.lineno,
                "value": n.value,
            }
            for nid, n in g.nodes.items()
        ],
        "edges": [
            {
                "src": e.src,
                "dst": e.dst,
                "kind": e.kind.value,
                "condition": e.condition,
                "dep_signal": e.dep_signal,
            }
            for e in g.edges
        ],
        "common_nodes": sorted(g.common_nodes),
    }


def export_graph(g: VeriPG, format: str = "json") -> bytes:
    if format == "json":
        return (json.dumps(graph_to_dict(g), indent=2, sort_keys=True) + "\n").encode("utf-8")
    if format == "dot":
        return _to_dot(g).encode("utf-8")
    raise ValueError(f"unknown export format: {format!r}")


def _to_dot(g: VeriPG) -> str:
    lines = [f'digraph "{g.module_name}" {{', "  rankdir=TB;"]
    for nid, n in g.nodes.items():
        label_bits = [f"{nid}:{n.node_type.value}"]
        if n.name:
            label_bits.append(n.name)
        if n.value is not None:
            label_bits.append(n.value)
        label = " ".join(label_bits).replace('"', '\\"')
        shape = "box" if nid in g.common_nodes else "ellipse"
        lines.append(f'  n{nid} [label="{label}", shape={shape}];')
    for e in g.edges:
        attrs = [f"color={_DOT_COLORS[e.kind]}"]
        tag = e.condition if e.kind == EdgeKind.CFG else e.dep_signal
        if tag:
            escaped = tag.replace('"', '\\"')
            attrs.append(f'label="{escaped}"')
        lines.append(f"  n{e.src} -> n{e.dst} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def import_graph(data: bytes) -> VeriPG:
    """Rebuild a VeriPG from its JSON export.

    AST structure comes back from the kept AST edges, and the def/use
    table is recomputed from that structure, so the imported graph is
    fully executable by rules."""
    doc = json.loads(data.decode("utf-8"))
    nodes: dict[int, AstNode] = {}
    for rec in doc["nodes"]:
        nodes[rec["id"]] = AstNode(
            node_type=NodeType(rec["type"]),
            lineno=rec["lineno"],
            name=rec["name"],
            value=rec["value"],
            id=rec["id"],
        )
    edges: list[Edge] = []
    for rec in doc["edges"]:
        edges.append(
            Edge(
                src=rec["src"],
                dst=rec["dst"],
                kind=EdgeKind(rec["kind"]),
                condition=rec.get("condition"),
                dep_signal=rec.get("dep_signal"),
            )
        )
    common = set(doc["common_nodes"])

    ast_children: dict[int, list[int]] = {}
    for e in edges:
        if e.kind == EdgeKind.AST:
            ast_children.setdefault(e.src, []).append(e.dst)
    for nid, kids in ast_children.items():
        kids.sort()
        nodes[nid].children = [nodes[c] for c in kids]

    def_use = scan_def_use(nodes, lambda nid: [c.id for c in nodes[nid].children], common)
    return VeriPG(
        module_name=doc["module"],
        nodes=nodes,
        edges=edges,
        common_nodes=common,
        def_use=def_use,
    )
