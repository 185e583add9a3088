"""Deterministic prompt assembly for condition extraction and rule synthesis."""

from __future__ import annotations

import json

from veripg.rules.catalog import PrimitiveSpec
from veripg.rules.validator import ValidationReport

_RULE_SCHEMA_SKETCH = """\
{
  "schema_version": 1,
  "rule_id": "<short id>",
  "cwe": "CWE-<digits>",
  "description": "<one line>",
  "path": [ {"primitive": "<name>", "params": [..], "filter": {..optional..}} ],
  "verdict": "exists" | "forall_absent",
  "report_at": <optional step index>
}
Filters: {"op": "AND"|"OR"|"NOT"|"CMP", "operands": [predicate | call | {"path": [..]} | filter]}
Predicates: {"attribute": "type"|"name"|"value"|"lineno"|"condition", "relation": "eq"|"neq"|"contains"|"in", "literal": ...}"""


def _states(v) -> str:
    if isinstance(v, str):
        return v
    return "{" + ", ".join(sorted(v)) + "}"


def render_catalog(specs: list[PrimitiveSpec]) -> str:
    lines = []
    for s in specs:
        params = ", ".join(f"{n}:{k}" for n, k in s.param_schema) or "-"
        lines.append(
            f"- {s.name} [{s.category}] params({params}) applies at {_states(s.input_state)}"
            f" -> {_states(s.output_state)}"
        )
    return "\n".join(lines)


def extraction_messages(cwe_id: str, title: str, body: str) -> list[dict]:
    system = (
        "You turn hardware weakness descriptions into structured vulnerability "
        "judgment conditions. Reply with exactly one fenced JSON block of the form:\n"
        '```json\n{"cwe_id": "...", "conditions": [{"subject": "...", '
        '"constraint": "...", "polarity": "must_exist"|"must_not_exist"}]}\n```\n'
        "List every condition implied by the manifestation and the root cause."
    )
    user = f"{cwe_id}: {title}\n\n{body}"
    return [
        {"role": "system", "content": system},
        {"role": "user", "content": user},
    ]


def generation_messages(
    cwe_id: str,
    conditions: list[dict],
    specs: list[PrimitiveSpec],
    example_rule: dict,
    feedback: list[tuple[str, ValidationReport | None]],
) -> list[dict]:
    """Conversation for one generation session.

    `feedback` holds (candidate text, report) pairs from earlier
    iterations; a None report means the candidate did not even parse.
    """
    system = (
        "You write graph-traversal vulnerability detection rules for RTL Verilog "
        "property graphs. A rule is a JSON document chaining traversal primitives; "
        "it must satisfy the state machine implied by the primitive table below.\n\n"
        "Primitive table:\n" + render_catalog(specs) + "\n\n"
        "Rule JSON schema:\n" + _RULE_SCHEMA_SKETCH + "\n\n"
        "Example rule:\n```json\n" + json.dumps(example_rule, indent=2, sort_keys=True) + "\n```\n\n"
        "Reply with exactly one fenced JSON block containing the rule and nothing else."
    )
    user = (
        f"Write a detection rule for {cwe_id} from these judgment conditions:\n"
        + json.dumps({"conditions": conditions}, indent=2, sort_keys=True)
    )
    messages = [
        {"role": "system", "content": system},
        {"role": "user", "content": user},
    ]
    for candidate, report in feedback:
        messages.append({"role": "assistant", "content": candidate})
        if report is None:
            correction = "The reply was not a single fenced JSON rule. Emit exactly one fenced JSON block."
        else:
            correction = (
                "The rule failed validation:\n"
                + json.dumps(report.to_dict(), indent=2, sort_keys=True)
                + "\nFix the rule. The allowed_next list names the primitives that are "
                "legal from the last surviving states."
            )
        messages.append({"role": "user", "content": correction})
    return messages


def extract_fenced_json(text: str) -> str | None:
    """Pull the payload of the first ```json fenced block (or bare ``` fence)."""
    marker = "```"
    start = text.find(marker)
    if start < 0:
        return None
    after = start + len(marker)
    if text[after : after + 4].lower() == "json":
        after += 4
    end = text.find(marker, after)
    if end < 0:
        return None
    payload = text[after:end].strip()
    return payload or None
