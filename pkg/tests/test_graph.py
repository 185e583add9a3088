from __future__ import annotations

from collections import defaultdict

import pytest

from veripg.frontend import COMMON_TYPES, NodeType, node_index
from veripg.graph.build import build_cfg, build_ddg, build_graph, extract_common_nodes, fuse
from veripg.graph.export import export_graph
from veripg.graph.model import Edge, EdgeKind, InconsistentInput
from conftest import graph_of, parse_text


def _module(text: str):
    root, diags = parse_text(text)
    assert not [d for d in diags if d.severity == "error"], diags
    return root, root.children[0]


def test_common_nodes_empty_module():
    _root, mod = _module("module m; endmodule")
    assert extract_common_nodes(mod) == set()


def test_common_nodes_always_if_nonblocking():
    _root, mod = _module(
        "module m(clk, c, d); input clk, c, d; output reg q;\n"
        "always @(posedge clk) if (c) q <= d; endmodule"
    )
    common = extract_common_nodes(mod)
    stmt_types = {NodeType.Always, NodeType.IfStatement, NodeType.NonblockingSubstitution}
    stmt_ids = {n.id for n in mod.walk() if n.node_type in stmt_types}
    assert len(stmt_ids) == 3
    assert stmt_ids <= common
    # brute-force re-derivation over the full node list
    assert common == {n.id for n in mod.walk() if n.node_type in COMMON_TYPES}


def test_common_nodes_match_brute_force(coverage_files):
    from conftest import parse_file

    for f in coverage_files:
        root, _ = parse_file(f)
        for mod in root.children:
            got = extract_common_nodes(mod)
            want = {n.id for n in mod.walk() if n.node_type in COMMON_TYPES}
            assert got == want, f.name


def _cfg_triples(fragments):
    return sorted((e.src, e.dst, e.condition) for frag in fragments for e in frag.edges)


def test_cfg_single_statement_always():
    _root, mod = _module(
        "module m(clk, d); input clk, d; output reg q; always @(posedge clk) q <= d; endmodule"
    )
    frags = build_cfg(mod, extract_common_nodes(mod))
    assert len(frags) == 1
    frag = frags[0]
    always = next(n for n in mod.walk() if n.node_type == NodeType.Always)
    stmt = next(n for n in mod.walk() if n.node_type == NodeType.NonblockingSubstitution)
    # entry is the block itself; the only edge feeds its single statement
    assert frag.entry == always.id
    assert [(e.src, e.dst, e.condition) for e in frag.edges] == [
        (always.id, stmt.id, "fallthrough")
    ]
    assert frag.exits == [stmt.id]


def test_cfg_if_else_edges():
    _root, mod = _module(
        "module m(clk, c); input clk, c; output reg a;\n"
        "always @(posedge clk) begin if (c) a <= 1'b1; else a <= 1'b0; end endmodule"
    )
    idx = {n.node_type: n.id for n in mod.walk()}
    always = idx[NodeType.Always]
    if_id = idx[NodeType.IfStatement]
    nbs = sorted(n.id for n in mod.walk() if n.node_type == NodeType.NonblockingSubstitution)
    frags = build_cfg(mod, extract_common_nodes(mod))
    assert _cfg_triples(frags) == sorted(
        [
            (always, if_id, "fallthrough"),
            (if_id, nbs[0], "true"),
            (if_id, nbs[1], "false"),
        ]
    )


def test_cfg_parallel_blocks_stay_apart():
    _root, mod = _module(
        "module m(clk, a, b); input clk, a, b; output reg x, y;\n"
        "always @(posedge clk) x <= a;\n"
        "always @(posedge clk) y <= b;\n"
        "endmodule"
    )
    common = extract_common_nodes(mod)
    frags = build_cfg(mod, common)
    assert len(frags) == 2
    node_sets = [frag.node_ids() for frag in frags]
    assert node_sets[0].isdisjoint(node_sets[1])
    for frag in frags:
        for e in frag.edges:
            assert e.src in frag.node_ids() and e.dst in frag.node_ids()


def test_cfg_case_and_for_edges():
    _root, mod = _module(
        "module m(s, v); input [1:0] s; input [3:0] v; output reg o; integer i;\n"
        "always @(*) begin\n"
        "  case (s)\n"
        "    2'b00: o = 1'b0;\n"
        "    default: o = 1'b1;\n"
        "  endcase\n"
        "  for (i = 0; i < 4; i = i + 1) begin o = o ^ v[i]; end\n"
        "  o = ~o;\n"
        "end endmodule"
    )
    common = extract_common_nodes(mod)
    frags = build_cfg(mod, common)
    assert len(frags) == 1
    edges = frags[0].edges
    labels = sorted(e.condition for e in edges)
    assert "case:2'b00" in labels and "case:default" in labels
    assert "loop" in labels and "true" in labels and "false" in labels
    case_id = next(n.id for n in mod.walk() if n.node_type == NodeType.CaseStatement)
    for_id = next(n.id for n in mod.walk() if n.node_type == NodeType.ForStatement)
    # the case arms rejoin at the for statement
    joins = {(e.src, e.dst) for e in edges if e.dst == for_id and e.condition == "fallthrough"}
    assert joins, edges
    assert all(src != case_id for src, _ in joins)  # default exists, no case-level fallthrough
    # the loop exit lands on the trailing statement
    false_exits = [(e.src, e.dst) for e in edges if e.condition == "false"]
    assert len(false_exits) == 1 and false_exits[0][0] == for_id


def test_cfg_entry_reaches_all_fragment_nodes(coverage_graphs):
    for name, g in coverage_graphs:
        adj = g.adjacency(EdgeKind.CFG)
        entries = [n for n in g.type_index.get("Always", [])] + [
            n for n in g.type_index.get("Assign", [])
        ]
        cfg_nodes = {e.src for e in g.edges if e.kind == EdgeKind.CFG} | {
            e.dst for e in g.edges if e.kind == EdgeKind.CFG
        }
        reached = set(entries)
        stack = list(entries)
        while stack:
            cur = stack.pop()
            for nxt in adj.get(cur, []):
                if nxt not in reached:
                    reached.add(nxt)
                    stack.append(nxt)
        assert cfg_nodes <= reached, name


def test_ddg_continuous_assign_no_pair():
    _root, mod = _module("module m(a, y); input a; output y; assign y = a; endmodule")
    records, edges = build_ddg(mod, extract_common_nodes(mod))
    by_signal = {r.signal: r for r in records}
    assert len(by_signal["y"].defs) == 1
    assert by_signal["y"].defs[0][1] == "continuous"
    assert by_signal["y"].uses == []
    assert by_signal["a"].defs == []
    assert len(by_signal["a"].uses) == 1
    assert edges == []


def test_ddg_blocking_order_absence():
    _root, mod = _module(
        "module m(clk, x); input clk, x; output reg g; reg ctl;\n"
        "always @(posedge clk) begin\n"
        "  if (ctl) begin g = 1'b0; end\n"
        "  ctl = x;\n"
        "end endmodule"
    )
    common = extract_common_nodes(mod)
    records, edges = build_ddg(mod, common)
    ctl = next(r for r in records if r.signal == "ctl")
    if_use = next(n.id for n in mod.walk() if n.node_type == NodeType.IfStatement)
    assert if_use in ctl.uses
    ctl_def = ctl.defs[0][0]
    assert ctl.defs[0][1] == "blocking"
    assert not any(e.src == ctl_def and e.dst == if_use for e in edges)


def test_ddg_cross_block_register_edge():
    _root, mod = _module(
        "module m(clk, d, y); input clk, d; output y; output reg q;\n"
        "always @(posedge clk) q <= d;\n"
        "assign y = q;\n"
        "endmodule"
    )
    records, edges = build_ddg(mod, extract_common_nodes(mod))
    nb = next(n.id for n in mod.walk() if n.node_type == NodeType.NonblockingSubstitution)
    assign = next(n.id for n in mod.walk() if n.node_type == NodeType.Assign)
    q_edges = [e for e in edges if e.dep_signal == "q"]
    assert [(e.src, e.dst) for e in q_edges] == [(nb, assign)]


def test_fuse_exact_edge_set():
    root, mod = _module(
        "module m(clk, c); input clk, c; output reg a;\n"
        "always @(posedge clk) if (c) a <= 1'b1;\n"
        "endmodule"
    )
    idx = node_index(root)
    by_type = defaultdict(list)
    for n in root.walk():
        by_type[n.node_type].append(n.id)
    g = build_graph(root)

    always = by_type[NodeType.Always][0]
    sens = by_type[NodeType.SensList][0]
    if_id = by_type[NodeType.IfStatement][0]
    nb = by_type[NodeType.NonblockingSubstitution][0]
    cond_ident = next(
        n.id for n in root.walk() if n.node_type == NodeType.Identifier and n.name == "c" and n.id > sens
    )
    sens_entry = next(n.id for n in root.walk() if n.node_type == NodeType.Identifier and n.value == "posedge")
    lhs = next(n.id for n in root.walk() if n.node_type == NodeType.Identifier and n.name == "a")
    const = by_type[NodeType.Constant][0]

    expected = sorted(
        [
            Edge(0, 1, EdgeKind.AST),
            Edge(always, sens, EdgeKind.AST),
            Edge(sens, sens_entry, EdgeKind.AST),
            Edge(if_id, cond_ident, EdgeKind.AST),
            Edge(nb, lhs, EdgeKind.AST),
            Edge(nb, const, EdgeKind.AST),
            Edge(always, if_id, EdgeKind.CFG, condition="fallthrough"),
            Edge(if_id, nb, EdgeKind.CFG, condition="true"),
        ],
        key=lambda e: (e.src, e.dst, e.kind.value, e.condition or "", e.dep_signal or ""),
    )
    assert g.edges == expected
    # the statement-to-statement syntax edge is gone, connectivity is CFG-only
    assert not g.has_edge(always, if_id, EdgeKind.AST)
    assert g.has_edge(always, if_id, EdgeKind.CFG, condition="fallthrough")


def test_fuse_rejects_foreign_endpoints():
    root, mod = _module("module m(a, y); input a; output y; assign y = a; endmodule")
    common = extract_common_nodes(mod)
    frags = build_cfg(mod, common)
    bad = [Edge(0, 1, EdgeKind.DDG, dep_signal="x")]
    with pytest.raises(InconsistentInput):
        fuse(root, common, frags, bad)


def _all_graphs(coverage_graphs, corpus_graphs):
    for name, g in coverage_graphs:
        yield name, g
    for entry, g in corpus_graphs:
        yield entry.path, g


def test_invariant_semantic_edges_land_on_common(coverage_graphs, corpus_graphs):
    for name, g in _all_graphs(coverage_graphs, corpus_graphs):
        for e in g.edges:
            if e.kind in (EdgeKind.CFG, EdgeKind.DDG):
                assert e.src in g.common_nodes and e.dst in g.common_nodes, name


def test_invariant_no_cross_always_cfg(coverage_graphs, corpus_graphs):
    for name, g in _all_graphs(coverage_graphs, corpus_graphs):
        owner: dict[int, int] = {}
        for always_id in g.type_index.get("Always", []):
            stack = [always_id]
            while stack:
                cur = stack.pop()
                for e in g.edges:
                    if e.kind == EdgeKind.CFG and e.src == cur and e.dst not in owner:
                        owner[e.dst] = always_id
                        stack.append(e.dst)
        for e in g.edges:
            if e.kind != EdgeKind.CFG:
                continue
            src_owner = owner.get(e.src, e.src if g.nodes[e.src].node_type == NodeType.Always else None)
            dst_owner = owner.get(e.dst)
            assert src_owner is not None and src_owner == dst_owner, (name, e)


def test_invariant_blocking_order(coverage_graphs, corpus_graphs):
    from veripg.graph.defuse import always_extents, owner_always

    for name, g in _all_graphs(coverage_graphs, corpus_graphs):
        extents = always_extents(g.nodes)
        for signal, rec in g.def_use.items():
            blocking = [d for d, kind in rec.defs if kind == "blocking"]
            for e in g.edges:
                if e.kind != EdgeKind.DDG or e.dep_signal != signal or e.src not in blocking:
                    continue
                if owner_always(e.src, extents) == owner_always(e.dst, extents):
                    assert e.dst > e.src, (name, e)


def test_invariant_ast_forest(coverage_graphs, corpus_graphs):
    for name, g in _all_graphs(coverage_graphs, corpus_graphs):
        incoming: dict[int, int] = defaultdict(int)
        for e in g.edges:
            if e.kind == EdgeKind.AST:
                incoming[e.dst] += 1
                assert e.dst not in g.common_nodes, (name, e)
        for nid, count in incoming.items():
            assert count == 1, (name, nid)
        # roots (no incoming AST edge) are the Source or common nodes
        source_ids = set(g.type_index.get("Source", []))
        for nid in g.nodes:
            if incoming.get(nid, 0) == 0:
                assert nid in source_ids or nid in g.common_nodes or not g.ast_children(nid), (
                    name,
                    nid,
                )


def test_invariant_index_consistency(coverage_graphs, corpus_graphs):
    for name, g in _all_graphs(coverage_graphs, corpus_graphs):
        for type_name, ids in g.type_index.items():
            brute = sorted(n for n, node in g.nodes.items() if node.node_type.value == type_name)
            assert ids == brute, (name, type_name)
        for sig, ids in g.name_index.items():
            brute = sorted(n for n, node in g.nodes.items() if node.name == sig)
            assert ids == brute, (name, sig)


def test_invariant_deterministic_build(coverage_files):
    from conftest import parse_file
    from veripg.graph.build import build_graphs

    for f in coverage_files:
        root1, _ = parse_file(f)
        root2, _ = parse_file(f)
        for g1, g2 in zip(build_graphs(root1), build_graphs(root2)):
            assert export_graph(g1) == export_graph(g2), f.name


def test_edge_property_contracts():
    with pytest.raises(ValueError):
        Edge(0, 1, EdgeKind.AST, condition="true")
    with pytest.raises(ValueError):
        Edge(0, 1, EdgeKind.DDG)
    with pytest.raises(ValueError):
        Edge(0, 1, EdgeKind.CFG, dep_signal="x")


def test_no_duplicate_edges(coverage_graphs, corpus_graphs):
    for name, g in _all_graphs(coverage_graphs, corpus_graphs):
        keys = [(e.src, e.dst, e.kind, e.condition, e.dep_signal) for e in g.edges]
        assert len(keys) == len(set(keys)), name
