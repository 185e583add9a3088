"""Recursive-descent parser for the RTL Verilog subset.

Supported constructs:
  - module/endmodule with simple or ANSI port headers
  - input/output/inout, wire/reg (with ranges), integer, parameter/localparam
  - continuous assign (including comma lists and wire initializers)
  - always @(...) with posedge/negedge/level sensitivity lists
  - begin/end blocks, if/else, case/casex/casez with default, for loops
  - blocking (=) and non-blocking (<=) assignments
  - unary/binary/ternary operators, concatenation, replication,
    bit and part selects, sized and unsized literals
  - module instantiation (interior opaque; connections kept as expressions)

Anything else degrades to an Opaque statement with a warning diagnostic.
Statement-level recovery skips to the next ';' or 'end', so one bad
statement never discards the whole module; a module that cannot be
closed at all is dropped with an error diagnostic.
"""

from __future__ import annotations

from veripg.frontend.lexer import LexError, tokenize
from veripg.frontend.nodes import AstNode, NodeType, ParseDiagnostic, assign_ids
from veripg.frontend.printer import print_expr
from veripg.frontend.source import SourceFile
from veripg.frontend.tokens import Token

_EOF = Token("eof", "", 0)

_UNARY_OPS = {
    "bang": "!",
    "tilde": "~",
    "amp": "&",
    "pipe": "|",
    "caret": "^",
    "tildeamp": "~&",
    "tildepipe": "~|",
    "tildecaret": "~^",
    "carettilde": "^~",
    "plus": "+",
    "minus": "-",
}

# Binary precedence levels, loosest first.
_BINARY_LEVELS = [
    {"pipepipe": "||"},
    {"ampamp": "&&"},
    {"pipe": "|"},
    {"caret": "^", "tildecaret": "~^", "carettilde": "^~"},
    {"amp": "&"},
    {"eqeq": "==", "noteq": "!=", "caseeq": "===", "caseneq": "!=="},
    {"lt": "<", "le": "<=", "gt": ">", "ge": ">="},
    {"lshift": "<<", "rshift": ">>", "arshift": ">>>", "alshift": "<<<"},
    {"plus": "+", "minus": "-"},
    {"star": "*", "slash": "/", "percent": "%"},
]

_STMT_STOP_KINDS = frozenset({"kw_end", "kw_endmodule", "kw_endcase", "kw_else"})


class _Fail(Exception):
    """Internal syntax failure; converted to recovery + warning."""

    def __init__(self, lineno: int, expected: str, found: str):
        super().__init__(f"expected {expected}, found {found}")
        self.lineno = lineno
        self.expected = expected
        self.found = found


class _Abort(Exception):
    """Module cannot be salvaged; converted to an error diagnostic."""

    def __init__(self, lineno: int, message: str):
        super().__init__(message)
        self.lineno = lineno


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.diags: list[ParseDiagnostic] = []

    # -- token helpers --

    def _cur(self) -> Token:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return _EOF

    def _peek(self, off: int = 1) -> Token:
        p = self.pos + off
        if p < len(self.tokens):
            return self.tokens[p]
        return _EOF

    def _at(self, *kinds: str) -> bool:
        return self._cur().kind in kinds

    def _advance(self) -> Token:
        tok = self._cur()
        if self.pos < len(self.tokens):
            self.pos += 1
        return tok

    def _eat(self, kind: str, expected: str | None = None) -> Token:
        tok = self._cur()
        if tok.kind != kind:
            raise _Fail(tok.lineno or self._last_line(), expected or kind, tok.kind or "eof")
        return self._advance()

    def _eat_if(self, kind: str) -> Token | None:
        if self._at(kind):
            return self._advance()
        return None

    def _last_line(self) -> int:
        if self.tokens:
            return self.tokens[min(self.pos, len(self.tokens) - 1)].lineno or self.tokens[-1].lineno
        return 1

    def _warn(self, lineno: int, message: str) -> None:
        self.diags.append(ParseDiagnostic("warning", lineno, message))

    # -- top level --

    def parse_source(self) -> AstNode:
        root = AstNode(NodeType.Source, 1)
        while not self._at("eof") and self.pos < len(self.tokens):
            if self._at("kw_module"):
                start = self.pos
                try:
                    root.children.append(self._parse_module())
                except _Abort as abort:
                    self.diags.append(ParseDiagnostic("error", abort.lineno, str(abort)))
                    self._skip_failed_module(start)
                except _Fail as fail:
                    self.diags.append(
                        ParseDiagnostic("error", fail.lineno, f"module header: {fail}")
                    )
                    self._skip_failed_module(start)
            else:
                tok = self._advance()
                self.diags.append(
                    ParseDiagnostic("error", tok.lineno, f"expected 'module', found {tok.text!r}")
                )
                while not self._at("kw_module") and not self._at("eof") and self.pos < len(self.tokens):
                    self._advance()
        return root

    def _skip_failed_module(self, start: int) -> None:
        self.pos = max(self.pos, start + 1)
        while self.pos < len(self.tokens):
            tok = self._cur()
            if tok.kind == "kw_endmodule":
                self._advance()
                return
            if tok.kind == "kw_module":
                return
            self._advance()

    # -- module --

    def _parse_module(self) -> AstNode:
        kw = self._eat("kw_module")
        name = self._eat("ident", "module name")
        mod = AstNode(NodeType.ModuleDef, kw.lineno, name=name.text)

        header_params = AstNode(NodeType.ModuleDef, kw.lineno, name=name.text)
        if self._eat_if("hash"):
            self._eat("lparen")
            self._parse_header_params(header_params)
            self._eat("rparen")

        if self._eat_if("lparen"):
            if not self._at("rparen"):
                self._parse_port_header(mod)
            self._eat("rparen")
        # Ports first, then header parameters: keeps the printed form's
        # item order identical to the parsed one.
        mod.children.extend(header_params.children)
        self._eat("semi", "';' after module header")

        while not self._at("kw_endmodule"):
            if self._at("eof") or self.pos >= len(self.tokens):
                raise _Abort(mod.lineno, f"module '{mod.name}': missing endmodule")
            start = self.pos
            try:
                self._parse_module_item(mod)
            except _Fail as fail:
                self._recover_opaque(mod, start, fail, context="module item")
        self._eat("kw_endmodule")
        return mod

    def _parse_header_params(self, mod: AstNode) -> None:
        while not self._at("rparen"):
            kw = self._eat_if("kw_parameter")
            lineno = kw.lineno if kw else self._cur().lineno
            if self._at("lbracket"):
                self._parse_range_text()
            name = self._eat("ident", "parameter name")
            self._eat("eq", "'=' in parameter")
            default = self._parse_expr()
            mod.children.append(
                AstNode(NodeType.Parameter, lineno, name=name.text, value="parameter", children=[default])
            )
            if not self._eat_if("comma"):
                break

    def _parse_port_header(self, mod: AstNode) -> None:
        if self._at("kw_input", "kw_output", "kw_inout"):
            self._parse_ansi_ports(mod)
            return
        while True:
            name = self._eat("ident", "port name")
            mod.children.append(AstNode(NodeType.Port, name.lineno, name=name.text))
            if not self._eat_if("comma"):
                break

    def _parse_ansi_ports(self, mod: AstNode) -> None:
        direction = None
        reg_flag = False
        shape: str | None = None
        while True:
            if self._at("kw_input", "kw_output", "kw_inout"):
                direction = self._advance().kind
                reg_flag = bool(self._eat_if("kw_reg"))
                if not reg_flag:
                    self._eat_if("kw_wire")
                shape = self._parse_range_text() if self._at("lbracket") else None
            if direction is None:
                raise _Fail(self._cur().lineno, "port direction", self._cur().kind)
            name = self._eat("ident", "port name")
            node_type = {
                "kw_input": NodeType.InputDecl,
                "kw_output": NodeType.OutputDecl,
                "kw_inout": NodeType.InoutDecl,
            }[direction]
            mod.children.append(AstNode(node_type, name.lineno, name=name.text, value=shape))
            if reg_flag:
                mod.children.append(AstNode(NodeType.RegDecl, name.lineno, name=name.text, value=shape))
            if not self._eat_if("comma"):
                break

    # -- module items --

    def _parse_module_item(self, mod: AstNode) -> None:
        tok = self._cur()
        kind = tok.kind

        if kind in ("kw_input", "kw_output", "kw_inout"):
            self._parse_direction_decl(mod)
        elif kind == "kw_wire":
            self._parse_net_decl(mod, NodeType.WireDecl)
        elif kind == "kw_reg":
            self._parse_net_decl(mod, NodeType.RegDecl)
        elif kind == "kw_integer":
            self._parse_integer_decl(mod)
        elif kind in ("kw_parameter", "kw_localparam"):
            self._parse_parameter_decl(mod)
        elif kind == "kw_assign":
            self._parse_continuous_assign(mod)
        elif kind == "kw_always":
            mod.children.append(self._parse_always())
        elif kind == "ident":
            mod.children.append(self._parse_instance())
        elif kind in ("kw_initial", "kw_function", "kw_task", "kw_generate", "kw_genvar", "sysident"):
            self._parse_known_opaque(mod)
        else:
            raise _Fail(tok.lineno, "module item", kind)

    def _parse_direction_decl(self, mod: AstNode) -> None:
        direction = self._advance()
        node_type = {
            "kw_input": NodeType.InputDecl,
            "kw_output": NodeType.OutputDecl,
            "kw_inout": NodeType.InoutDecl,
        }[direction.kind]
        reg_flag = bool(self._eat_if("kw_reg"))
        if not reg_flag:
            self._eat_if("kw_wire")
        shape = self._parse_range_text() if self._at("lbracket") else None
        while True:
            name = self._eat("ident", "declared name")
            mod.children.append(AstNode(node_type, name.lineno, name=name.text, value=shape))
            if reg_flag:
                mod.children.append(AstNode(NodeType.RegDecl, name.lineno, name=name.text, value=shape))
            if not self._eat_if("comma"):
                break
        self._eat("semi", "';' after declaration")

    def _parse_net_decl(self, mod: AstNode, node_type: NodeType) -> None:
        self._advance()
        shape = self._parse_range_text() if self._at("lbracket") else None
        while True:
            name = self._eat("ident", "declared name")
            value = shape
            if node_type == NodeType.RegDecl and self._at("lbracket"):
                dims = self._parse_range_text()
                value = f"{shape} {dims}" if shape else f" {dims}"
            mod.children.append(AstNode(node_type, name.lineno, name=name.text, value=value))
            if node_type == NodeType.WireDecl and self._at("eq"):
                self._advance()
                rhs = self._parse_expr()
                lhs = AstNode(NodeType.Identifier, name.lineno, name=name.text)
                mod.children.append(AstNode(NodeType.Assign, name.lineno, children=[lhs, rhs]))
            if not self._eat_if("comma"):
                break
        self._eat("semi", "';' after declaration")

    def _parse_integer_decl(self, mod: AstNode) -> None:
        self._advance()
        while True:
            name = self._eat("ident", "declared name")
            mod.children.append(AstNode(NodeType.RegDecl, name.lineno, name=name.text, value="integer"))
            if not self._eat_if("comma"):
                break
        self._eat("semi", "';' after declaration")

    def _parse_parameter_decl(self, mod: AstNode) -> None:
        kw = self._advance()
        which = "parameter" if kw.kind == "kw_parameter" else "localparam"
        if self._at("lbracket"):
            self._parse_range_text()
        while True:
            name = self._eat("ident", "parameter name")
            self._eat("eq", "'=' in parameter")
            default = self._parse_expr()
            mod.children.append(
                AstNode(NodeType.Parameter, name.lineno, name=name.text, value=which, children=[default])
            )
            if not self._eat_if("comma"):
                break
        self._eat("semi", "';' after parameter")

    def _parse_continuous_assign(self, mod: AstNode) -> None:
        self._advance()
        while True:
            lhs = self._parse_lvalue()
            self._eat("eq", "'=' in assign")
            rhs = self._parse_expr()
            mod.children.append(AstNode(NodeType.Assign, lhs.lineno, children=[lhs, rhs]))
            if not self._eat_if("comma"):
                break
        self._eat("semi", "';' after assign")

    def _parse_always(self) -> AstNode:
        kw = self._eat("kw_always")
        self._eat("at", "'@' after always")
        sens = self._parse_sens_list()
        body = self._parse_statement()
        return AstNode(NodeType.Always, kw.lineno, children=[sens, body])

    def _parse_sens_list(self) -> AstNode:
        tok = self._cur()
        sens = AstNode(NodeType.SensList, tok.lineno)
        if self._eat_if("star"):
            sens.value = "*"
            return sens
        self._eat("lparen", "'(' after '@'")
        if self._eat_if("star"):
            sens.value = "*"
            self._eat("rparen")
            return sens
        while True:
            qual = "level"
            if self._at("kw_posedge", "kw_negedge"):
                qual = self._advance().text
            name = self._eat("ident", "sensitivity signal")
            sens.children.append(AstNode(NodeType.Identifier, name.lineno, name=name.text, value=qual))
            if not (self._eat_if("kw_or") or self._eat_if("comma")):
                break
        self._eat("rparen", "')' closing sensitivity list")
        return sens

    def _parse_instance(self) -> AstNode:
        type_name = self._eat("ident", "module type")
        children: list[AstNode] = []
        if self._eat_if("hash"):
            self._eat("lparen")
            while not self._at("rparen"):
                if self._eat_if("dot"):
                    self._eat("ident", "parameter name")
                    self._eat("lparen")
                    if not self._at("rparen"):
                        children.append(self._parse_expr())
                    self._eat("rparen")
                else:
                    children.append(self._parse_expr())
                if not self._eat_if("comma"):
                    break
            self._eat("rparen")
        inst_name = self._eat("ident", "instance name")
        self._eat("lparen", "'(' opening port connections")
        while not self._at("rparen"):
            if self._eat_if("dot"):
                self._eat("ident", "port name")
                self._eat("lparen")
                if not self._at("rparen"):
                    children.append(self._parse_expr())
                self._eat("rparen")
            else:
                children.append(self._parse_expr())
            if not self._eat_if("comma"):
                break
        self._eat("rparen")
        self._eat("semi", "';' after instantiation")
        return AstNode(
            NodeType.Instance, type_name.lineno, name=inst_name.text, value=type_name.text, children=children
        )

    # -- opaque handling --

    def _parse_known_opaque(self, mod: AstNode) -> None:
        tok = self._cur()
        start = self.pos
        if tok.kind == "kw_initial":
            self._advance()
            if self._at("kw_begin"):
                self._skip_balanced("kw_begin", "kw_end")
            else:
                self._skip_to_semi()
        elif tok.kind in ("kw_function", "kw_task", "kw_generate"):
            closer = {"kw_function": "kw_endfunction", "kw_task": "kw_endtask", "kw_generate": "kw_endgenerate"}
            self._advance()
            depth = 1
            while depth and self.pos < len(self.tokens):
                cur = self._advance()
                if cur.kind == tok.kind:
                    depth += 1
                elif cur.kind == closer[tok.kind]:
                    depth -= 1
        else:  # genvar decls, system tasks
            self._skip_to_semi()
        text = " ".join(t.text for t in self.tokens[start : self.pos])
        mod.children.append(AstNode(NodeType.Opaque, tok.lineno, value=text))
        self._warn(tok.lineno, f"construct outside the supported subset: {tok.text!r}")

    def _skip_balanced(self, open_kind: str, close_kind: str) -> None:
        self._eat(open_kind)
        depth = 1
        while depth and self.pos < len(self.tokens):
            cur = self._advance()
            if cur.kind == open_kind:
                depth += 1
            elif cur.kind == close_kind:
                depth -= 1

    def _skip_to_semi(self) -> None:
        while self.pos < len(self.tokens):
            if self._advance().kind == "semi":
                return

    def _recover_opaque(self, parent: AstNode, start: int, fail: _Fail, context: str) -> None:
        """Skip to the next ';' or statement closer, recording an Opaque node."""
        self.pos = start
        collected: list[Token] = []
        while self.pos < len(self.tokens):
            tok = self._cur()
            if tok.kind == "semi":
                collected.append(self._advance())
                break
            if tok.kind in _STMT_STOP_KINDS:
                if not collected:
                    collected.append(self._advance())
                break
            collected.append(self._advance())
        lineno = collected[0].lineno if collected else fail.lineno
        text = " ".join(t.text for t in collected)
        parent.children.append(AstNode(NodeType.Opaque, lineno, value=text))
        self._warn(lineno, f"{context} skipped ({fail})")

    # -- statements --

    def _parse_statement(self) -> AstNode:
        tok = self._cur()
        kind = tok.kind

        if kind == "kw_begin":
            return self._parse_block()
        if kind == "kw_if":
            return self._parse_if()
        if kind in ("kw_case", "kw_casex", "kw_casez"):
            return self._parse_case()
        if kind == "kw_for":
            return self._parse_for()
        if kind in ("ident", "lbrace"):
            return self._parse_assignment_statement()
        raise _Fail(tok.lineno, "statement", kind)

    def _parse_block(self) -> AstNode:
        kw = self._eat("kw_begin")
        if self._eat_if("colon"):
            self._eat("ident", "block label")
        block = AstNode(NodeType.Block, kw.lineno)
        while not self._at("kw_end"):
            if self._at("eof") or self.pos >= len(self.tokens):
                raise _Fail(kw.lineno, "'end'", "eof")
            start = self.pos
            try:
                block.children.append(self._parse_statement())
            except _Fail as fail:
                self._recover_opaque(block, start, fail, context="statement")
        self._eat("kw_end")
        return block

    def _parse_if(self) -> AstNode:
        kw = self._eat("kw_if")
        self._eat("lparen", "'(' after if")
        cond = self._parse_expr()
        self._eat("rparen", "')' closing condition")
        then = self._parse_statement()
        node = AstNode(NodeType.IfStatement, kw.lineno, children=[cond, then])
        if self._eat_if("kw_else"):
            node.children.append(self._parse_statement())
        return node

    def _parse_case(self) -> AstNode:
        kw = self._advance()
        which = kw.text  # case | casex | casez
        self._eat("lparen", "'(' after case")
        selector = self._parse_expr()
        self._eat("rparen", "')' closing selector")
        node = AstNode(NodeType.CaseStatement, kw.lineno, value=which, children=[selector])
        while not self._at("kw_endcase"):
            if self._at("eof") or self.pos >= len(self.tokens):
                raise _Fail(kw.lineno, "'endcase'", "eof")
            start = self.pos
            try:
                node.children.append(self._parse_case_item())
            except _Fail as fail:
                self._recover_opaque(node, start, fail, context="case item")
        self._eat("kw_endcase")
        return node

    def _parse_case_item(self) -> AstNode:
        tok = self._cur()
        item = AstNode(NodeType.CaseItem, tok.lineno)
        if self._eat_if("kw_default"):
            item.value = "default"
            self._eat_if("colon")
        else:
            labels = [self._parse_expr()]
            while self._eat_if("comma"):
                labels.append(self._parse_expr())
            self._eat("colon", "':' after case label")
            item.children.extend(labels)
            item.value = ", ".join(print_expr(x) for x in labels)
        if self._eat_if("semi"):
            return item  # null statement arm
        item.children.append(self._parse_statement())
        return item

    def _parse_for(self) -> AstNode:
        kw = self._eat("kw_for")
        self._eat("lparen", "'(' after for")
        init = self._parse_plain_assignment()
        self._eat("semi", "';' in for header")
        cond = self._parse_expr()
        self._eat("semi", "';' in for header")
        step = self._parse_plain_assignment()
        self._eat("rparen", "')' closing for header")
        body = self._parse_statement()
        return AstNode(NodeType.ForStatement, kw.lineno, children=[init, cond, step, body])

    def _parse_plain_assignment(self) -> AstNode:
        lhs = self._parse_lvalue()
        self._eat("eq", "'=' in for header")
        rhs = self._parse_expr()
        return AstNode(NodeType.BlockingSubstitution, lhs.lineno, children=[lhs, rhs])

    def _parse_assignment_statement(self) -> AstNode:
        lhs = self._parse_lvalue()
        tok = self._cur()
        if tok.kind == "eq":
            self._advance()
            rhs = self._parse_expr()
            self._eat("semi", "';' after assignment")
            return AstNode(NodeType.BlockingSubstitution, lhs.lineno, children=[lhs, rhs])
        if tok.kind == "le":
            self._advance()
            rhs = self._parse_expr()
            self._eat("semi", "';' after assignment")
            return AstNode(NodeType.NonblockingSubstitution, lhs.lineno, children=[lhs, rhs])
        raise _Fail(tok.lineno, "'=' or '<='", tok.kind)

    def _parse_lvalue(self) -> AstNode:
        if self._at("lbrace"):
            return self._parse_concat()
        name = self._eat("ident", "lvalue")
        if self._at("lbracket"):
            return self._parse_select(name)
        return AstNode(NodeType.Identifier, name.lineno, name=name.text)

    # -- expressions --

    def _parse_expr(self) -> AstNode:
        cond = self._parse_binary(0)
        if self._eat_if("question"):
            then = self._parse_expr()
            self._eat("colon", "':' in ternary")
            other = self._parse_expr()
            return AstNode(NodeType.Operator, cond.lineno, value="?:", children=[cond, then, other])
        return cond

    def _parse_binary(self, level: int) -> AstNode:
        if level >= len(_BINARY_LEVELS):
            return self._parse_unary()
        ops = _BINARY_LEVELS[level]
        node = self._parse_binary(level + 1)
        while self._cur().kind in ops:
            op = self._advance()
            rhs = self._parse_binary(level + 1)
            node = AstNode(NodeType.Operator, node.lineno, value=ops[op.kind], children=[node, rhs])
        return node

    def _parse_unary(self) -> AstNode:
        tok = self._cur()
        if tok.kind in _UNARY_OPS:
            self._advance()
            operand = self._parse_unary()
            return AstNode(NodeType.Operator, tok.lineno, value=_UNARY_OPS[tok.kind], children=[operand])
        return self._parse_primary()

    def _parse_primary(self) -> AstNode:
        tok = self._cur()
        kind = tok.kind
        if kind in ("number", "sized_number", "string"):
            self._advance()
            return AstNode(NodeType.Constant, tok.lineno, value=tok.text)
        if kind == "ident":
            self._advance()
            if self._at("lbracket"):
                return self._parse_select(tok)
            return AstNode(NodeType.Identifier, tok.lineno, name=tok.text)
        if kind == "lparen":
            self._advance()
            node = self._parse_expr()
            self._eat("rparen", "')' closing expression")
            return node
        if kind == "lbrace":
            return self._parse_concat()
        raise _Fail(tok.lineno, "expression", kind)

    def _parse_select(self, name: Token) -> AstNode:
        self._eat("lbracket")
        first = self._parse_expr()
        children = [first]
        if self._eat_if("colon"):
            children.append(self._parse_expr())
        self._eat("rbracket", "']' closing select")
        return AstNode(NodeType.PartSelect, name.lineno, name=name.text, children=children)

    def _parse_concat(self) -> AstNode:
        brace = self._eat("lbrace")
        first = self._parse_expr()
        if self._at("lbrace"):
            # Replication: {count{item, ...}}
            inner = self._parse_concat()
            self._eat("rbrace", "'}' closing replication")
            items = inner.children if inner.value == "{}" else [inner]
            return AstNode(NodeType.Operator, brace.lineno, value="repl", children=[first, *items])
        items = [first]
        while self._eat_if("comma"):
            items.append(self._parse_expr())
        self._eat("rbrace", "'}' closing concatenation")
        return AstNode(NodeType.Operator, brace.lineno, value="{}", children=items)

    def _parse_range_text(self) -> str:
        """Consume a bracketed range, returning its compact text form."""
        self._eat("lbracket")
        parts = ["["]
        depth = 1
        while depth and self.pos < len(self.tokens):
            tok = self._advance()
            if tok.kind == "lbracket":
                depth += 1
            elif tok.kind == "rbracket":
                depth -= 1
                if depth == 0:
                    break
            parts.append(tok.text)
        parts.append("]")
        return "".join(parts)


def parse(src: SourceFile) -> tuple[AstNode, list[ParseDiagnostic]]:
    """Parse a source file into a Source tree plus diagnostics.

    Total over the subset: errors abort single modules only, and a lex
    error yields an empty Source with one error diagnostic.
    """
    warnings: list = []
    try:
        tokens = tokenize(src, warnings)
    except LexError as err:
        root = AstNode(NodeType.Source, 1)
        assign_ids(root)
        return root, [ParseDiagnostic("error", err.lineno, str(err))]

    parser = Parser(tokens)
    root = parser.parse_source()
    diags = [ParseDiagnostic("warning", line, msg) for line, msg in warnings]
    diags.extend(parser.diags)
    diags.sort(key=lambda d: (d.lineno, d.severity, d.message))
    assign_ids(root)
    return root, diags
