"""Canned detection rules, one JSON file per covered CWE."""

from __future__ import annotations

from importlib import resources

from veripg.rules.model import Rule, parse_rule


def pack_files() -> list[tuple[str, bytes]]:
    root = resources.files(__name__)
    out = []
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            out.append((entry.name, entry.read_bytes()))
    return out


def load_pack() -> list[Rule]:
    """All shipped rules, ordered by rule id."""
    rules = [parse_rule(data) for _name, data in pack_files()]
    return sorted(rules, key=lambda r: r.rule_id)
