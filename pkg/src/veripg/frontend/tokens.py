"""Token stream types for the RTL Verilog subset."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    lineno: int

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.text!r}, L{self.lineno})"


# Keywords of the supported subset.  Each lexes to kind "kw_<word>".
KEYWORDS = frozenset(
    [
        "module",
        "endmodule",
        "input",
        "output",
        "inout",
        "wire",
        "reg",
        "integer",
        "parameter",
        "localparam",
        "assign",
        "always",
        "begin",
        "end",
        "if",
        "else",
        "case",
        "casex",
        "casez",
        "endcase",
        "default",
        "for",
        "posedge",
        "negedge",
        "or",
        # Recognized so the parser can skip them as single opaque statements
        # instead of cascading recovery errors.
        "initial",
        "function",
        "endfunction",
        "task",
        "endtask",
        "generate",
        "endgenerate",
        "genvar",
    ]
)

# Multi-character operators, longest match first.
MULTI_OPS = [
    ("<<<", "alshift"),
    (">>>", "arshift"),
    ("===", "caseeq"),
    ("!==", "caseneq"),
    ("<<", "lshift"),
    (">>", "rshift"),
    ("==", "eqeq"),
    ("!=", "noteq"),
    ("<=", "le"),
    (">=", "ge"),
    ("&&", "ampamp"),
    ("||", "pipepipe"),
    ("~&", "tildeamp"),
    ("~|", "tildepipe"),
    ("~^", "tildecaret"),
    ("^~", "carettilde"),
]

SINGLE_OPS = {
    "(": "lparen",
    ")": "rparen",
    "[": "lbracket",
    "]": "rbracket",
    "{": "lbrace",
    "}": "rbrace",
    ";": "semi",
    ",": "comma",
    ".": "dot",
    ":": "colon",
    "?": "question",
    "@": "at",
    "#": "hash",
    "=": "eq",
    "+": "plus",
    "-": "minus",
    "*": "star",
    "/": "slash",
    "%": "percent",
    "&": "amp",
    "|": "pipe",
    "^": "caret",
    "~": "tilde",
    "!": "bang",
    "<": "lt",
    ">": "gt",
}
