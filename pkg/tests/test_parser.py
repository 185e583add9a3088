from __future__ import annotations

import re

from veripg.frontend import (
    NodeType,
    dump_ast_json,
    isomorphic,
    node_index,
    parse,
    print_source,
    SourceFile,
)
from conftest import GOLDEN_AST, parse_file, parse_text


def test_minimal_module():
    root, diags = parse_text("module m; endmodule")
    assert diags == []
    assert root.node_type == NodeType.Source
    assert len(root.children) == 1
    mod = root.children[0]
    assert mod.node_type == NodeType.ModuleDef
    assert mod.name == "m"
    assert mod.children == []


def test_clocked_if_nonblocking_shape():
    root, diags = parse_text("module m(clk, en, d, q); input clk, en, d; output reg q;\n"
                             "always @(posedge clk) if (en) q <= d; endmodule")
    assert not [d for d in diags if d.severity == "error"]
    mod = root.children[0]
    always = [c for c in mod.children if c.node_type == NodeType.Always][0]
    sens, body = always.children
    assert sens.node_type == NodeType.SensList
    assert [(e.name, e.value) for e in sens.children] == [("clk", "posedge")]
    assert body.node_type == NodeType.IfStatement
    cond, then = body.children
    assert cond.node_type == NodeType.Identifier and cond.name == "en"
    assert then.node_type == NodeType.NonblockingSubstitution
    lhs, rhs = then.children
    assert (lhs.name, rhs.name) == ("q", "d")


def test_use_before_blocking_write_order():
    text = """\
module m(clk, x, g);
  input clk, x;
  output reg g;
  reg ctl;
  always @(posedge clk) begin
    if (ctl) begin
      g = 1'b0;
    end
    ctl = x;
  end
endmodule
"""
    root, _ = parse_text(text)
    always = [n for n in root.walk() if n.node_type == NodeType.Always][0]
    block = always.children[1]
    assert block.node_type == NodeType.Block
    assert [c.node_type for c in block.children] == [
        NodeType.IfStatement,
        NodeType.BlockingSubstitution,
    ]
    if_stmt, assign = block.children
    assert if_stmt.lineno < assign.lineno


def test_ids_are_dense_preorder():
    root, _ = parse_text("module m(a, y); input a; output y; assign y = ~a; endmodule")
    ids = [n.id for n in root.walk()]
    assert ids == list(range(len(ids)))


def test_linenos_inside_file_range(coverage_files):
    for f in coverage_files:
        src = SourceFile.from_path(f)
        root, _ = parse_file(f)
        for node in root.walk():
            assert 1 <= node.lineno <= src.line_count, (f.name, node)


def test_module_count_matches_keyword_count(coverage_files):
    for f in coverage_files:
        text = f.read_text(encoding="utf-8")
        stripped = re.sub(r"/\*.*?\*/", " ", text, flags=re.DOTALL)
        stripped = re.sub(r"//[^\n]*", " ", stripped)
        stripped = re.sub(r'"[^"\n]*"', " ", stripped)
        expected = len(re.findall(r"\bmodule\b", stripped))
        root, _ = parse_file(f)
        assert len(root.children) == expected, f.name


def test_coverage_has_no_opaque_and_no_diags(coverage_files):
    for f in coverage_files:
        root, diags = parse_file(f)
        assert diags == [], (f.name, diags)
        assert not [n for n in root.walk() if n.node_type == NodeType.Opaque], f.name


def test_coverage_ast_matches_goldens(coverage_files):
    for f in coverage_files:
        root, _ = parse_file(f)
        golden = (GOLDEN_AST / (f.stem + ".json")).read_bytes()
        assert dump_ast_json(root) == golden, f.name


def test_pretty_print_round_trip(coverage_files):
    for f in coverage_files:
        root, _ = parse_file(f)
        reparsed, diags = parse_text(print_source(root), name=f.name)
        assert not [d for d in diags if d.severity == "error"], f.name
        assert isomorphic(root, reparsed), f.name


def test_named_name_invariant(coverage_files):
    from veripg.frontend import NAMED_TYPES

    for f in coverage_files:
        root, _ = parse_file(f)
        for node in root.walk():
            if node.node_type in NAMED_TYPES:
                assert node.name, (f.name, node)


def test_children_form_a_tree(coverage_files):
    for f in coverage_files:
        root, _ = parse_file(f)
        seen: set[int] = set()
        for node in root.walk():
            for child in node.children:
                assert child.id not in seen, f.name
                seen.add(child.id)


def test_unsupported_statement_becomes_opaque_warning():
    root, diags = parse_text(
        "module m(clk); input clk;\n"
        "always @(posedge clk) begin\n"
        "  $display(1);\n"
        "end\n"
        "endmodule"
    )
    warnings = [d for d in diags if d.severity == "warning"]
    assert warnings and warnings[0].lineno == 3
    opaque = [n for n in root.walk() if n.node_type == NodeType.Opaque]
    assert len(opaque) == 1
    assert "$display" in opaque[0].value


def test_bad_statement_does_not_discard_module():
    root, diags = parse_text(
        "module m(a, y); input a; output y;\n"
        "assign y = = a;\n"
        "assign y = a;\n"
        "endmodule"
    )
    assert any(d.severity == "warning" for d in diags)
    mod = root.children[0]
    assigns = [c for c in mod.children if c.node_type == NodeType.Assign]
    assert len(assigns) == 1  # the good one survives


def test_unclosed_module_dropped_with_error():
    root, diags = parse_text("module m(a); input a;\n")
    assert root.children == []
    assert any(d.severity == "error" and "endmodule" in d.message for d in diags)


def test_initial_block_is_single_opaque():
    root, diags = parse_text(
        "module m; initial begin x = 0; y = 1; end wire w; endmodule"
    )
    mod = root.children[0]
    kinds = [c.node_type for c in mod.children]
    assert kinds == [NodeType.Opaque, NodeType.WireDecl]


def test_lex_error_yields_error_diagnostic_and_empty_source():
    root, diags = parse_text("module m; /* broken")
    assert root.children == []
    assert len(diags) == 1 and diags[0].severity == "error"


def test_source_file_line_index_invariant(coverage_files):
    for f in coverage_files:
        src = SourceFile.from_path(f)
        assert list(src.line_index) == sorted(set(src.line_index))
        assert src.line_index[0] == 0
        assert src.line_of(len(src.text) - 1) == src.line_count or src.text == ""


def test_node_index_roundtrip():
    root, _ = parse_text("module m(a, y); input a; output y; assign y = a; endmodule")
    idx = node_index(root)
    assert set(idx) == {n.id for n in root.walk()}
    assert all(idx[n.id] is n for n in root.walk())
