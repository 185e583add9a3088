#!/usr/bin/env python3
"""Regenerate the canned rule pack in canonical serialized form."""

from __future__ import annotations

from pathlib import Path

from veripg.rules.model import (
    Filter,
    Path as RulePath,
    Predicate,
    PrimitiveCall,
    Rule,
    serialize_rule,
)

PACK_DIR = Path(__file__).resolve().parents[1] / "src" / "veripg" / "rules" / "packs"


def call(name: str, *params, filter=None) -> PrimitiveCall:
    return PrimitiveCall(name, tuple(params), filter)


def cmp(attribute: str, relation: str, literal) -> Filter:
    return Filter("CMP", (Predicate(attribute, relation, literal),))


def sub(*steps: PrimitiveCall) -> RulePath:
    return RulePath(tuple(steps))


RULES = [
    Rule(
        rule_id="uninit-access-check",
        cwe="CWE-1280",
        description=(
            "A registered signal is read by an if-condition although the blocking "
            "assignment producing it only executes later in the same process."
        ),
        path=RulePath(
            (
                call("Variable", filter=cmp("type", "eq", "RegDecl")),
                call("LoadStatement", filter=cmp("type", "eq", "IfStatement")),
                call("AssignStatement", "blocking"),
                call("Exist"),
            )
        ),
        verdict="exists",
        report_at=1,
    ),
    Rule(
        rule_id="unguarded-lock-write",
        cwe="CWE-1231",
        description=(
            "A register that gates branch decisions is rewritten by an unconditional "
            "first-statement non-blocking assignment, so the lock is never protected."
        ),
        path=RulePath(
            (
                call(
                    "Variable",
                    filter=Filter(
                        "AND",
                        (
                            Predicate("type", "eq", "RegDecl"),
                            sub(
                                call("LoadStatement", filter=cmp("type", "eq", "IfStatement")),
                                call("Exist"),
                            ),
                        ),
                    ),
                ),
                call("AssignStatement", "nonblocking"),
                call("Parents", "CFG", filter=cmp("type", "eq", "Always")),
                call("Exist"),
            )
        ),
        verdict="exists",
        report_at=1,
    ),
    Rule(
        rule_id="multi-domain-config-drive",
        cwe="CWE-1232",
        description=(
            "Two or more processes drive the same protection register with "
            "unconditional first-statement non-blocking writes."
        ),
        path=RulePath(
            (
                call("Variable", filter=cmp("type", "eq", "RegDecl")),
                call("AssignStatement", "nonblocking"),
                call("Parents", "CFG", filter=cmp("type", "eq", "Always")),
                call("Count", "ge", 2),
            )
        ),
        verdict="exists",
        report_at=1,
    ),
    Rule(
        rule_id="override-term-in-write-guard",
        cwe="CWE-1234",
        description=(
            "A write guard ORs an override term into its condition and the guarded "
            "branch performs a register update."
        ),
        path=RulePath(
            (
                call(
                    "Node",
                    "IfStatement",
                    filter=Filter(
                        "AND",
                        (
                            sub(
                                call(
                                    "Children",
                                    "AST",
                                    filter=Filter(
                                        "AND",
                                        (
                                            Predicate("type", "eq", "Operator"),
                                            Predicate("value", "eq", "||"),
                                        ),
                                    ),
                                ),
                                call("Exist"),
                            ),
                            sub(call("CondVars"), call("Count", "ge", 2)),
                            sub(
                                call(
                                    "Branch",
                                    filter=cmp("type", "eq", "NonblockingSubstitution"),
                                ),
                                call("Exist"),
                            ),
                        ),
                    ),
                ),
                call("Exist"),
            )
        ),
        verdict="exists",
        report_at=0,
    ),
    Rule(
        rule_id="debug-tap-instantiated",
        cwe="CWE-1243",
        description="A debug observation cell is instantiated with live signal connections.",
        path=RulePath(
            (
                call(
                    "Node",
                    "Instance",
                    filter=sub(
                        call("Children", "AST", filter=cmp("type", "eq", "Identifier")),
                        call("Exist"),
                    ),
                ),
                call("Count", "ge", 1),
            )
        ),
        verdict="exists",
        report_at=0,
    ),
    Rule(
        rule_id="internal-bit-tapped-out",
        cwe="CWE-1244",
        description="A continuous assignment taps selected bits of internal state onto a net.",
        path=RulePath(
            (
                call(
                    "Node",
                    "Assign",
                    filter=sub(
                        call("Children", "AST", filter=cmp("type", "eq", "PartSelect")),
                        call("Exist"),
                    ),
                ),
                call("Exist"),
            )
        ),
        verdict="exists",
        report_at=0,
    ),
    Rule(
        rule_id="exposed-register-never-cleared",
        cwe="CWE-226",
        description=(
            "Every register exposed through a continuous assignment must somewhere be "
            "loaded with a constant (a scrub/reset value); a register without one "
            "keeps stale secrets."
        ),
        path=RulePath(
            (
                call(
                    "Variable",
                    filter=Filter(
                        "AND",
                        (
                            Predicate("type", "eq", "RegDecl"),
                            sub(
                                call("LoadStatement", filter=cmp("type", "eq", "Assign")),
                                call("Exist"),
                            ),
                        ),
                    ),
                ),
                call(
                    "AssignStatement",
                    "nonblocking",
                    filter=sub(
                        call("Children", "AST", filter=cmp("type", "eq", "Constant")),
                        call("Exist"),
                    ),
                ),
                call("Exist"),
            )
        ),
        verdict="forall_absent",
        report_at=0,
    ),
    Rule(
        rule_id="state-dump-concatenation",
        cwe="CWE-1258",
        description="A continuous assignment concatenates internal state words onto a readout net.",
        path=RulePath(
            (
                call(
                    "Node",
                    "Assign",
                    filter=sub(
                        call(
                            "Children",
                            "AST",
                            filter=Filter(
                                "AND",
                                (
                                    Predicate("type", "eq", "Operator"),
                                    Predicate("value", "eq", "{}"),
                                ),
                            ),
                        ),
                        call("Exist"),
                    ),
                ),
                call("Exist"),
            )
        ),
        verdict="exists",
        report_at=0,
    ),
    Rule(
        rule_id="clocked-register-no-reset",
        cwe="CWE-1271",
        description=(
            "A clocked process updates registers with no asynchronous reset term and "
            "no guarding branch at all, so its state runs from power-up garbage."
        ),
        path=RulePath(
            (
                call(
                    "Node",
                    "Always",
                    filter=Filter(
                        "AND",
                        (
                            sub(
                                call("SensList", filter=cmp("value", "eq", "posedge")),
                                call("Exist"),
                            ),
                            sub(
                                call("SensList", filter=cmp("value", "eq", "negedge")),
                                call("Absent"),
                            ),
                            sub(
                                call(
                                    "Descendants",
                                    "CFG",
                                    filter=cmp("type", "eq", "IfStatement"),
                                ),
                                call("Absent"),
                            ),
                        ),
                    ),
                ),
                call("Exist"),
            )
        ),
        verdict="exists",
        report_at=0,
    ),
    Rule(
        rule_id="early-exit-compare-loop",
        cwe="CWE-1255",
        description="A comparison loop branches per element, leaking progress through power/time.",
        path=RulePath(
            (
                call(
                    "Node",
                    "ForStatement",
                    filter=sub(
                        call("Children", "CFG", filter=cmp("type", "eq", "IfStatement")),
                        call("Exist"),
                    ),
                ),
                call("Exist"),
            )
        ),
        verdict="exists",
        report_at=0,
    ),
    Rule(
        rule_id="combinational-key-mix",
        cwe="CWE-1300",
        description="A continuous assignment XORs operands straight onto a routed net.",
        path=RulePath(
            (
                call(
                    "Node",
                    "Assign",
                    filter=sub(
                        call(
                            "Descendants",
                            "AST",
                            filter=Filter(
                                "AND",
                                (
                                    Predicate("type", "eq", "Operator"),
                                    Predicate("value", "eq", "^"),
                                ),
                            ),
                        ),
                        call("Exist"),
                    ),
                ),
                call("Exist"),
            )
        ),
        verdict="exists",
        report_at=0,
    ),
    Rule(
        rule_id="fsm-missing-default",
        cwe="CWE-1245",
        description="A state machine decoded from a registered selector lacks a default arm.",
        path=RulePath(
            (
                call(
                    "Node",
                    "CaseStatement",
                    filter=Filter(
                        "AND",
                        (
                            sub(call("FsmStates"), call("Exist")),
                            Filter(
                                "NOT",
                                (
                                    sub(
                                        call(
                                            "FsmStates",
                                            filter=cmp("value", "eq", "default"),
                                        ),
                                        call("Exist"),
                                    ),
                                ),
                            ),
                        ),
                    ),
                ),
                call("Exist"),
            )
        ),
        verdict="exists",
        report_at=0,
    ),
]


def main() -> None:
    PACK_DIR.mkdir(parents=True, exist_ok=True)
    for rule in RULES:
        num = rule.cwe.split("-")[1]
        path = PACK_DIR / f"cwe{num}.json"
        path.write_bytes(serialize_rule(rule))
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
