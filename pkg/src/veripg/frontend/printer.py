"""AST debug printer.

Emits canonical Verilog that re-parses to a structurally isomorphic
tree: expressions are fully parenthesized, bodies keep their begin/end
shape, and opaque statements replay their normalized token text.
"""

from __future__ import annotations

from veripg.frontend.nodes import AstNode, NodeType

_STMT_TYPES = frozenset(
    {
        NodeType.IfStatement,
        NodeType.CaseStatement,
        NodeType.ForStatement,
        NodeType.BlockingSubstitution,
        NodeType.NonblockingSubstitution,
        NodeType.Block,
        NodeType.Opaque,
    }
)


def print_expr(node: AstNode) -> str:
    t = node.node_type
    if t == NodeType.Identifier:
        return node.name or ""
    if t == NodeType.Constant:
        return node.value or ""
    if t == NodeType.PartSelect:
        idx = ":".join(print_expr(c) for c in node.children)
        return f"{node.name}[{idx}]"
    if t == NodeType.Operator:
        op = node.value or ""
        kids = node.children
        if op == "?:":
            return f"({print_expr(kids[0])} ? {print_expr(kids[1])} : {print_expr(kids[2])})"
        if op == "{}":
            return "{" + ", ".join(print_expr(c) for c in kids) + "}"
        if op == "repl":
            items = ", ".join(print_expr(c) for c in kids[1:])
            return "{" + print_expr(kids[0]) + "{" + items + "}}"
        if len(kids) == 1:
            return f"({op}{print_expr(kids[0])})"
        return f"({print_expr(kids[0])} {op} {print_expr(kids[1])})"
    raise ValueError(f"not an expression node: {node!r}")


def _sens_entry(entry: AstNode) -> str:
    if entry.value in ("posedge", "negedge"):
        return f"{entry.value} {entry.name}"
    return entry.name or ""


def _decl_shape(value: str | None) -> tuple[str, str]:
    """Split a stored decl shape into (before-name, after-name) parts."""
    if not value:
        return "", ""
    if " " in value:
        head, tail = value.split(" ", 1)
        return head + " ", " " + tail
    return value + " ", ""


def _print_decl(node: AstNode) -> str:
    t = node.node_type
    kw = {
        NodeType.InputDecl: "input",
        NodeType.OutputDecl: "output",
        NodeType.InoutDecl: "inout",
        NodeType.WireDecl: "wire",
        NodeType.RegDecl: "reg",
    }[t]
    if t == NodeType.RegDecl and node.value == "integer":
        return f"integer {node.name};"
    head, tail = _decl_shape(node.value)
    return f"{kw} {head}{node.name}{tail};"


def print_statement(node: AstNode, indent: int) -> list[str]:
    pad = "  " * indent
    t = node.node_type

    if t == NodeType.Block:
        lines = [pad + "begin"]
        for c in node.children:
            lines.extend(print_statement(c, indent + 1))
        lines.append(pad + "end")
        return lines

    if t == NodeType.Opaque:
        return [pad + (node.value or ";")]

    if t == NodeType.BlockingSubstitution:
        return [pad + f"{print_expr(node.children[0])} = {print_expr(node.children[1])};"]

    if t == NodeType.NonblockingSubstitution:
        return [pad + f"{print_expr(node.children[0])} <= {print_expr(node.children[1])};"]

    if t == NodeType.IfStatement:
        lines = [pad + f"if ({print_expr(node.children[0])})"]
        lines.extend(print_statement(node.children[1], indent + 1))
        if len(node.children) > 2:
            lines.append(pad + "else")
            lines.extend(print_statement(node.children[2], indent + 1))
        return lines

    if t == NodeType.CaseStatement:
        kw = node.value or "case"
        lines = [pad + f"{kw} ({print_expr(node.children[0])})"]
        for item in node.children[1:]:
            lines.extend(print_statement(item, indent + 1))
        lines.append(pad + "endcase")
        return lines

    if t == NodeType.CaseItem:
        body = None
        labels = list(node.children)
        if labels and labels[-1].node_type in _STMT_TYPES:
            body = labels.pop()
        head = "default" if node.value == "default" else ", ".join(print_expr(x) for x in labels)
        lines = [pad + head + ":"]
        if body is not None:
            lines.extend(print_statement(body, indent + 1))
        else:
            lines.append("  " * (indent + 1) + ";")
        return lines

    if t == NodeType.ForStatement:
        init, cond, step, body = node.children
        head = (
            f"for ({print_expr(init.children[0])} = {print_expr(init.children[1])}; "
            f"{print_expr(cond)}; "
            f"{print_expr(step.children[0])} = {print_expr(step.children[1])})"
        )
        lines = [pad + head]
        lines.extend(print_statement(body, indent + 1))
        return lines

    raise ValueError(f"not a statement node: {node!r}")


def print_module_item(node: AstNode, indent: int) -> list[str]:
    pad = "  " * indent
    t = node.node_type

    if t in (
        NodeType.InputDecl,
        NodeType.OutputDecl,
        NodeType.InoutDecl,
        NodeType.WireDecl,
        NodeType.RegDecl,
    ):
        return [pad + _print_decl(node)]

    if t == NodeType.Parameter:
        kw = node.value or "parameter"
        return [pad + f"{kw} {node.name} = {print_expr(node.children[0])};"]

    if t == NodeType.Assign:
        return [pad + f"assign {print_expr(node.children[0])} = {print_expr(node.children[1])};"]

    if t == NodeType.Always:
        sens = node.children[0]
        if sens.value == "*":
            head = "always @(*)"
        else:
            head = "always @(" + " or ".join(_sens_entry(e) for e in sens.children) + ")"
        lines = [pad + head]
        lines.extend(print_statement(node.children[1], indent + 1))
        return lines

    if t == NodeType.Instance:
        conns = ", ".join(print_expr(c) for c in node.children)
        return [pad + f"{node.value} {node.name} ({conns});"]

    if t == NodeType.Opaque:
        return [pad + (node.value or ";")]

    raise ValueError(f"not a module item: {node!r}")


def print_source(root: AstNode) -> str:
    """Render a Source tree back to parseable text."""
    lines: list[str] = []
    for mod in root.children:
        ports = [c.name for c in mod.children if c.node_type == NodeType.Port]
        if ports:
            lines.append(f"module {mod.name} ({', '.join(ports)});")
        else:
            lines.append(f"module {mod.name};")
        for item in mod.children:
            if item.node_type == NodeType.Port:
                continue
            lines.extend(print_module_item(item, 1))
        lines.append("endmodule")
        lines.append("")
    return "\n".join(lines)
