"""Corpus assembly: seeds, patched negatives, and seeded mutants."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from veripg.corpus.labels import LABEL_CHECKS
from veripg.corpus.mutate import (
    MutationBroke,
    mutate_block_extension,
    mutate_name_substitution,
    mutate_structural,
)
from veripg.corpus.score import ALL_CWES, CorpusEntry, save_manifest
from veripg.frontend.parser import parse
from veripg.frontend.source import SourceFile
from veripg.graph.build import build_graph


def seed_text(name: str) -> str:
    return (resources.files("veripg.corpus") / "seeds" / name).read_text(encoding="utf-8")


def seed_pairs() -> list[tuple[str, str, str]]:
    """(cwe, positive seed file, patched negative file) triples."""
    out = []
    for cwe in sorted(ALL_CWES, key=lambda c: int(c.split("-")[1])):
        num = cwe.split("-")[1]
        out.append((cwe, f"cwe{num}_pos.v", f"cwe{num}_neg.v"))
    return out


def _check_label(text: str, cwe: str, expect: bool, context: str) -> None:
    root, diags = parse(SourceFile(context, text))
    if any(d.severity == "error" for d in diags) or not root.children:
        raise MutationBroke(f"{context}: does not parse")
    if LABEL_CHECKS[cwe](build_graph(root)) != expect:
        raise MutationBroke(f"{context}: label check for {cwe} expected {expect}")


def build_corpus(out_dir: str | Path, seed: int = 2024) -> Path:
    """Materialize the evaluation corpus; returns the manifest path.

    Per positive seed: one mutant per strategy plus one chained
    block-extension variant for size spread.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries: list[CorpusEntry] = []

    def emit(name: str, text: str, cwe: str, origin: str, mutation: str | None = None) -> None:
        path = out / name
        path.write_text(text, encoding="utf-8")
        entries.append(CorpusEntry(str(path), cwe, origin, mutation))

    for i, (cwe, pos_name, neg_name) in enumerate(seed_pairs()):
        pos = seed_text(pos_name)
        neg = seed_text(neg_name)
        _check_label(pos, cwe, True, pos_name)
        _check_label(neg, cwe, False, neg_name)
        emit(pos_name, pos, cwe, "seed")
        emit(neg_name, neg, "none", "patched")

        check = LABEL_CHECKS[cwe]
        renamed = mutate_name_substitution(pos, seed + i)
        _check_label(renamed, cwe, True, f"{pos_name}+rename")
        emit(pos_name.replace(".v", "_m_rename.v"), renamed, cwe, "mutated", "name_substitution")

        extended = mutate_block_extension(pos, seed + i)
        _check_label(extended, cwe, True, f"{pos_name}+extend")
        emit(pos_name.replace(".v", "_m_extend.v"), extended, cwe, "mutated", "block_extension")

        structured = mutate_structural(pos, seed + i, label_check=check)
        emit(pos_name.replace(".v", "_m_struct.v"), structured, cwe, "mutated", "structural")

        heavy = pos
        for j in range(3):
            heavy = mutate_block_extension(heavy, seed + 31 * i + 7 * j + 1)
        _check_label(heavy, cwe, True, f"{pos_name}+heavy")
        emit(pos_name.replace(".v", "_m_heavy.v"), heavy, cwe, "mutated", "block_extension_x3")

    emit("clean_add8.v", seed_text("clean_add8.v"), "none", "seed")

    manifest = out / "manifest.jsonl"
    save_manifest(entries, manifest)
    return manifest
