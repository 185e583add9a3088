from veripg.frontend.lexer import (
    IllegalCharacter,
    LexError,
    UnterminatedComment,
    UnterminatedString,
    tokenize,
)
from veripg.frontend.nodes import (
    COMMON_TYPES,
    DECL_TYPES,
    NAMED_TYPES,
    SIGNAL_DECL_TYPES,
    AstNode,
    NodeType,
    ParseDiagnostic,
    assign_ids,
    ast_to_records,
    dump_ast_json,
    isomorphic,
    node_index,
)
from veripg.frontend.parser import parse
from veripg.frontend.printer import print_expr, print_source
from veripg.frontend.source import SourceFile

__all__ = [
    "AstNode",
    "COMMON_TYPES",
    "DECL_TYPES",
    "IllegalCharacter",
    "LexError",
    "NAMED_TYPES",
    "NodeType",
    "ParseDiagnostic",
    "SIGNAL_DECL_TYPES",
    "SourceFile",
    "UnterminatedComment",
    "UnterminatedString",
    "assign_ids",
    "ast_to_records",
    "dump_ast_json",
    "isomorphic",
    "node_index",
    "parse",
    "print_expr",
    "print_source",
    "tokenize",
]
