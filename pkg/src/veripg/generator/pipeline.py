"""Two-stage rule generation: condition extraction, then validated synthesis.

Stage one turns a CWE description into structured judgment conditions.
Stage two asks for a rule, validates every candidate against the schema
FSM, and feeds violations (with the allowed-next primitive list) back
into the prompt until a candidate validates or the iteration cap is hit.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from veripg.generator.prompts import (
    extract_fenced_json,
    extraction_messages,
    generation_messages,
)
from veripg.generator.provider import Provider
from veripg.rules.catalog import catalog
from veripg.rules.model import Rule, RuleSchemaError, count_primitive_calls, parse_rule, rule_to_dict
from veripg.rules.validator import (
    ILLEGAL_PARAMETER,
    ILLEGAL_RULE,
    SchemaFsm,
    ValidationReport,
    Violation,
    validate,
)

_CWE_RE = re.compile(r"^CWE-\d+$")
_POLARITIES = {"must_exist", "must_not_exist"}


class FormatError(Exception):
    pass


@dataclass(frozen=True)
class CweDescription:
    cwe_id: str
    title: str
    body: str

    def __post_init__(self) -> None:
        if not _CWE_RE.match(self.cwe_id):
            raise ValueError(f"cwe_id must look like CWE-<digits>, got {self.cwe_id!r}")


@dataclass
class VulnerabilityConditions:
    cwe_id: str
    conditions: list[dict]  # {"subject", "constraint", "polarity"}


@dataclass
class GenerationSession:
    cwe_id: str
    iterations: list[tuple[str, ValidationReport]] = field(default_factory=list)
    outcome: str = "exhausted"  # validated | exhausted
    iteration_cap: int = 50
    rule: Rule | None = None


def _parse_conditions(payload: str, cwe_id: str) -> VulnerabilityConditions:
    doc = json.loads(payload)
    conditions = doc.get("conditions")
    if not isinstance(conditions, list) or not conditions:
        raise FormatError("response lacks a non-empty conditions list")
    for cond in conditions:
        if not isinstance(cond, dict) or not {"subject", "constraint", "polarity"} <= set(cond):
            raise FormatError(f"malformed condition entry: {cond!r}")
        if cond["polarity"] not in _POLARITIES:
            raise FormatError(f"bad polarity {cond['polarity']!r}")
    return VulnerabilityConditions(cwe_id=doc.get("cwe_id", cwe_id), conditions=conditions)


def extract_conditions(
    desc: CweDescription, provider: Provider, retries: int = 3
) -> VulnerabilityConditions:
    """Ask for structured conditions; malformed replies retried up to 3 times."""
    if not desc.body.strip():
        raise FormatError(f"{desc.cwe_id}: empty description body")
    messages = extraction_messages(desc.cwe_id, desc.title, desc.body)
    last = "no response"
    for _ in range(retries):
        text = provider.complete(messages)
        payload = extract_fenced_json(text)
        if payload is not None:
            try:
                return _parse_conditions(payload, desc.cwe_id)
            except (json.JSONDecodeError, FormatError) as err:
                last = str(err)
        else:
            last = "response had no fenced JSON block"
        messages = messages + [
            {"role": "assistant", "content": text},
            {
                "role": "user",
                "content": "That was not parseable. Reply with exactly one fenced JSON block "
                "matching the requested shape.",
            },
        ]
    raise FormatError(f"{desc.cwe_id}: conditions unparseable after {retries} attempts ({last})")


def _synthetic_parse_report(message: str) -> ValidationReport:
    return ValidationReport(
        valid=False,
        violations=[Violation(step=-1, kind=ILLEGAL_RULE, message=message, allowed_next=())],
    )


def generate_rule(
    conds: VulnerabilityConditions,
    fsm: SchemaFsm,
    provider: Provider,
    cap: int = 50,
    example_rule: dict | None = None,
) -> GenerationSession:
    """Validation loop: candidates are parsed, validated, and corrected."""
    if cap < 1:
        raise ValueError("iteration cap must be at least 1")
    if example_rule is None:
        example_rule = _default_example_rule()

    session = GenerationSession(cwe_id=conds.cwe_id, iteration_cap=cap)
    feedback: list[tuple[str, ValidationReport | None]] = []
    for _ in range(cap):
        messages = generation_messages(
            conds.cwe_id, conds.conditions, catalog(), example_rule, feedback
        )
        text = provider.complete(messages)
        payload = extract_fenced_json(text)
        if payload is None:
            report = _synthetic_parse_report("reply had no fenced JSON block")
            session.iterations.append((text, report))
            feedback.append((text, None))
            continue
        try:
            rule = parse_rule(payload)
        except RuleSchemaError as err:
            report = _synthetic_parse_report(f"rule JSON did not parse: {err}")
            session.iterations.append((text, report))
            feedback.append((text, None))
            continue
        report = validate(rule, fsm)
        session.iterations.append((text, report))
        if report.valid:
            session.outcome = "validated"
            session.rule = rule
            return session
        feedback.append((text, report))
    session.outcome = "exhausted"
    return session


def _default_example_rule() -> dict:
    from veripg.rules.packs import load_pack

    pack = load_pack()
    for rule in pack:
        if rule.cwe == "CWE-1280":
            return rule_to_dict(rule)
    return rule_to_dict(pack[0])


def misuse_metrics(sessions: list[GenerationSession]) -> tuple[float, float, float]:
    """(illegal rule rate, illegal parameter rate, total) over all candidate
    primitive calls, mirroring how rule-misuse is scored per generated
    primitive."""
    if not sessions:
        raise ValueError("misuse_metrics needs at least one session")
    total_calls = 0
    illegal_rule = 0
    illegal_param = 0
    for session in sessions:
        for text, report in session.iterations:
            payload = extract_fenced_json(text)
            if payload is None:
                continue
            try:
                rule = parse_rule(payload)
            except RuleSchemaError:
                continue
            total_calls += count_primitive_calls(rule)
            for v in report.violations:
                if v.step < 0:
                    continue
                if v.kind == ILLEGAL_RULE:
                    illegal_rule += 1
                elif v.kind == ILLEGAL_PARAMETER:
                    illegal_param += 1
    if total_calls == 0:
        return (0.0, 0.0, 0.0)
    r1 = illegal_rule / total_calls
    r2 = illegal_param / total_calls
    return (r1, r2, r1 + r2)


def session_to_dict(session: GenerationSession) -> dict:
    return {
        "cwe_id": session.cwe_id,
        "outcome": session.outcome,
        "iteration_cap": session.iteration_cap,
        "iterations": [
            {"candidate": text, "report": report.to_dict()}
            for text, report in session.iterations
        ],
        "rule": rule_to_dict(session.rule) if session.rule else None,
    }
