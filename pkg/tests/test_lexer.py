from __future__ import annotations

import re

import pytest

from veripg.frontend import (
    IllegalCharacter,
    SourceFile,
    UnterminatedComment,
    UnterminatedString,
    tokenize,
)
from conftest import COVERAGE_DIR


def kinds(text: str) -> list[str]:
    return [t.kind for t in tokenize(SourceFile("<t>", text))]


def test_assign_statement_tokens():
    toks = tokenize(SourceFile("<t>", "assign y = a & b;"))
    assert [(t.kind, t.text) for t in toks] == [
        ("kw_assign", "assign"),
        ("ident", "y"),
        ("eq", "="),
        ("ident", "a"),
        ("amp", "&"),
        ("ident", "b"),
        ("semi", ";"),
    ]


def test_block_comment_elided():
    toks = tokenize(SourceFile("<t>", "/* x */ wire w;"))
    assert [(t.kind, t.text) for t in toks] == [
        ("kw_wire", "wire"),
        ("ident", "w"),
        ("semi", ";"),
    ]


def test_sized_literal_single_token():
    toks = tokenize(SourceFile("<t>", "4'b1010"))
    assert len(toks) == 1
    assert toks[0].kind == "sized_number"
    assert toks[0].text == "4'b1010"


@pytest.mark.parametrize(
    "literal",
    ["8'hFF", "8'hff", "'b0", "4'sd15", "12'o777", "8'b1010_1010", "4'bxxzz", "16'h00_ff"],
)
def test_sized_literal_forms(literal):
    toks = tokenize(SourceFile("<t>", literal))
    assert [t.kind for t in toks] == ["sized_number"]


def test_line_numbers_track_comments_and_newlines():
    text = "// one\n/* two\nthree */\nwire w;\nreg r;\n"
    toks = tokenize(SourceFile("<t>", text))
    assert [(t.text, t.lineno) for t in toks] == [
        ("wire", 4),
        ("w", 4),
        (";", 4),
        ("reg", 5),
        ("r", 5),
        (";", 5),
    ]


def test_unterminated_comment():
    with pytest.raises(UnterminatedComment) as err:
        tokenize(SourceFile("<t>", "wire w;\n/* oops"))
    assert err.value.lineno == 2


def test_unterminated_string():
    with pytest.raises(UnterminatedString):
        tokenize(SourceFile("<t>", 'x = "abc'))


def test_illegal_character():
    with pytest.raises(IllegalCharacter) as err:
        tokenize(SourceFile("<t>", "wire \x01;"))
    assert err.value.lineno == 1


def test_directive_lines_skipped_with_warning():
    warnings = []
    toks = tokenize(SourceFile("<t>", "`define X 1\nwire w;"), warnings)
    assert [t.text for t in toks] == ["wire", "w", ";"]
    assert warnings == [(1, "compiler directive skipped")]


def test_system_identifier_tokenizes():
    assert kinds("$display(1);") == ["sysident", "lparen", "number", "rparen", "semi"]


# Independent reference lexer: a single regex alternation over the token
# alphabet, used to cross-check segmentation on the whole coverage corpus.
_REF = re.compile(
    r"""
    //[^\n]*
  | /\*.*?\*/
  | `[^\n]*
  | "[^"\n]*"
  | (?:\d[\d_]*)?'[sS]?[bodhBODH][0-9a-fA-FxXzZ_?]+
  | \d[\d_]*
  | \$[A-Za-z_][A-Za-z0-9_$]*
  | [A-Za-z_][A-Za-z0-9_$]*
  | <<<|>>>|===|!==|<<|>>|==|!=|<=|>=|&&|\|\||~&|~\||~\^|\^~
  | [()\[\]{};,.:?@#=+\-*/%&|^~!<>]
  | \s+
    """,
    re.VERBOSE | re.DOTALL,
)


def _reference_lex(text: str) -> list[str]:
    out = []
    pos = 0
    while pos < len(text):
        m = _REF.match(text, pos)
        assert m, f"reference lexer stuck at {text[pos:pos+20]!r}"
        tok = m.group()
        pos = m.end()
        if tok.isspace() or tok.startswith(("//", "/*", "`")):
            continue
        out.append(tok)
    return out


def test_corpus_matches_reference_lexer():
    for path in sorted(COVERAGE_DIR.glob("*.v")):
        text = path.read_text(encoding="utf-8")
        ours = [t.text for t in tokenize(SourceFile(str(path), text))]
        assert ours == _reference_lex(text), path.name
