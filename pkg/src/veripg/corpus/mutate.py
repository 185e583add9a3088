"""Seeded source mutations for corpus generation.

Three strategies: consistent renaming of user identifiers, insertion of
self-contained padding blocks, and structural complication (neutral
statements inside the first procedural block plus appended if/for
wrapped padding).  All are deterministic in (source, seed) and must keep
the design parseable and its ground-truth label intact.
"""

from __future__ import annotations

import random
import re
from typing import Callable

from veripg.frontend.lexer import tokenize
from veripg.frontend.nodes import NodeType
from veripg.frontend.parser import parse
from veripg.frontend.source import SourceFile
from veripg.frontend.tokens import KEYWORDS
from veripg.graph.build import build_graph
from veripg.graph.model import VeriPG


class MutationBroke(Exception):
    pass


def _identifiers(src: str) -> list[str]:
    tokens = tokenize(SourceFile("<mut>", src), [])
    seen: list[str] = []
    for t in tokens:
        if t.kind == "ident" and t.text not in seen:
            seen.append(t.text)
    return seen


def _fresh_name(rng: random.Random, taken: set[str], prefix: str) -> str:
    while True:
        cand = f"{prefix}{rng.randrange(100000):05d}"
        if cand not in taken and cand not in KEYWORDS:
            taken.add(cand)
            return cand


def mutate_name_substitution(src: str, seed: int) -> str:
    """Rename every user identifier consistently; structure untouched."""
    rng = random.Random(seed)
    idents = _identifiers(src)
    taken = set(idents)
    mapping = {name: _fresh_name(rng, taken, "s") for name in idents}
    out = src
    for old in sorted(mapping, key=len, reverse=True):
        # Lookbehind keeps based literals like 8'hA5 out of reach.
        out = re.sub(rf"(?<!')\b{re.escape(old)}\b", mapping[old], out)
    return out


_PAD_BLOCK = """\
  reg [3:0] {p}_q;
  wire {p}_t;
  always @(posedge {p}_t) begin
    if ({p}_q[0]) begin
      {p}_q <= 4'h0;
    end else begin
      {p}_q <= {p}_q + 4'h1;
    end
  end
"""


def mutate_block_extension(src: str, seed: int) -> str:
    """Insert 1-5 unrelated procedural blocks over fresh signals."""
    rng = random.Random(seed)
    taken = set(_identifiers(src))
    k = 1 + rng.randrange(5)
    blocks = [_PAD_BLOCK.format(p=_fresh_name(rng, taken, "pad")) for _ in range(k)]
    cut = src.rfind("endmodule")
    if cut < 0:
        raise MutationBroke("no endmodule to extend")
    return src[:cut] + "".join(blocks) + src[cut:]


_WRAP_BLOCKS = """\
  reg {p}_q;
  wire {p}_c;
  integer {p}_i;
  reg [3:0] {p}_acc;
  always @(*) begin
    if ({p}_c) begin
      {p}_q = 1'b1;
    end else begin
      {p}_q = 1'b0;
    end
  end
  always @(*) begin
    {p}_acc = 4'h0;
    for ({p}_i = 0; {p}_i < 4; {p}_i = {p}_i + 1) begin
      {p}_acc = {p}_acc + 4'h1;
    end
  end
"""

_ALWAYS_RE = re.compile(r"\balways\b")
_BEGIN_END_RE = re.compile(r"\b(begin|end)\b")


def _block_end_offset(src: str, begin_match: re.Match) -> int | None:
    """Offset of the `end` closing the block opened by `begin_match`."""
    depth = 1
    for m in _BEGIN_END_RE.finditer(src, begin_match.end()):
        depth += 1 if m.group() == "begin" else -1
        if depth == 0:
            return m.start()
    return None


def _structural_once(src: str, rng: random.Random) -> str:
    taken = set(_identifiers(src))
    out = src

    # Neutral statements at the tail of the first procedural block.  The
    # tail position keeps first-statement and def-before-use orderings
    # of the original statements intact.
    m = _ALWAYS_RE.search(out)
    if m:
        b = _BEGIN_END_RE.search(out, m.end())
        if b and b.group() == "begin":
            close = _block_end_offset(out, b)
            if close is not None:
                name = _fresh_name(rng, taken, "gap")
                k = 1 + rng.randrange(3)
                filler = "".join(f"  {name} = {name};\n    " for _ in range(k))
                out = out[:close] + filler + out[close:]
                decl = f"  reg {name};\n"
                out = out[: m.start()] + decl + out[m.start() :]

    wrap = _WRAP_BLOCKS.format(p=_fresh_name(rng, taken, "pw"))
    cut = out.rfind("endmodule")
    if cut < 0:
        raise MutationBroke("no endmodule to extend")
    return out[:cut] + wrap + out[cut:]


def mutate_structural(
    src: str,
    seed: int,
    label_check: Callable[[VeriPG], bool] | None = None,
    retries: int = 8,
) -> str:
    """Stretch the vulnerable pattern and add neutral branching/looping.

    The defining pattern of the labeled vulnerability must survive; the
    mutation is retried with derived seeds and MutationBroke raised if
    the check never passes.
    """
    last_reason = "label check failed"
    for attempt in range(retries):
        rng = random.Random(seed + attempt * 7919)
        out = _structural_once(src, rng)
        root, diags = parse(SourceFile("<mut>", out))
        if any(d.severity == "error" for d in diags) or not root.children:
            last_reason = "mutated source no longer parses"
            continue
        if label_check is not None and not label_check(build_graph(root)):
            continue
        return out
    raise MutationBroke(last_reason)
