"""Declarative rule schema: Functions (primitive calls), Filters, Paths.

Rules live as JSON (schema_version 1).  parse_rule checks structure only
(field shapes, known primitives, arity); whether a rule is *legal* against
the graph schema is the validator's job, so a structurally fine rule with
a bogus node-type parameter parses here and fails there.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from veripg.rules.catalog import primitive_spec

SCHEMA_VERSION = 1

VERDICTS = ("exists", "forall_absent")
FILTER_OPS = ("AND", "OR", "NOT", "CMP")


@dataclass(frozen=True)
class SchemaIssue:
    json_path: str
    message: str
    kind: str = "schema"  # schema | unknown_primitive | arity


class RuleSchemaError(Exception):
    def __init__(self, issues: list[SchemaIssue]):
        super().__init__("; ".join(f"{i.json_path}: {i.message}" for i in issues))
        self.issues = issues


class UnknownPrimitive(RuleSchemaError):
    def __init__(self, name: str, issues: list[SchemaIssue]):
        super().__init__(issues)
        self.name = name


class ArityMismatch(RuleSchemaError):
    def __init__(self, primitive: str, expected: int, got: int, issues: list[SchemaIssue]):
        super().__init__(issues)
        self.primitive = primitive
        self.expected = expected
        self.got = got


@dataclass(frozen=True)
class Predicate:
    attribute: str
    relation: str
    literal: object


@dataclass(frozen=True)
class Filter:
    op: str
    operands: tuple  # Filter | PrimitiveCall | Path | Predicate


@dataclass(frozen=True)
class PrimitiveCall:
    primitive: str
    params: tuple = ()
    # Any operand form works as a result filter: a boolean combinator, a
    # bare predicate, or a sub-call/sub-path evaluated per element.
    filter: object | None = None


@dataclass(frozen=True)
class Path:
    steps: tuple[PrimitiveCall, ...]


@dataclass(frozen=True)
class Rule:
    rule_id: str
    cwe: str
    description: str
    path: Path
    verdict: str = "exists"
    report_at: int | None = None
    schema_version: int = SCHEMA_VERSION


class _Collector:
    def __init__(self) -> None:
        self.issues: list[SchemaIssue] = []

    def add(self, path: str, message: str, kind: str = "schema") -> None:
        self.issues.append(SchemaIssue(path, message, kind))


def _require_keys(obj: dict, path: str, required: set[str], optional: set[str], col: _Collector) -> bool:
    ok = True
    for key in required:
        if key not in obj:
            col.add(path, f"missing required key {key!r}")
            ok = False
    for key in obj:
        if key not in required and key not in optional:
            col.add(f"{path}.{key}", "unknown key")
            ok = False
    return ok


def _parse_scalar_params(raw: object, path: str, col: _Collector) -> tuple | None:
    if not isinstance(raw, list):
        col.add(path, "params must be an array")
        return None
    out = []
    for i, v in enumerate(raw):
        if not isinstance(v, (str, int)) or isinstance(v, bool):
            col.add(f"{path}[{i}]", "parameter must be a string or integer")
            return None
        out.append(v)
    return tuple(out)


def _parse_predicate(obj: dict, path: str, col: _Collector) -> Predicate | None:
    if not _require_keys(obj, path, {"attribute", "relation", "literal"}, set(), col):
        return None
    attribute, relation, literal = obj["attribute"], obj["relation"], obj["literal"]
    if not isinstance(attribute, str) or not isinstance(relation, str):
        col.add(path, "predicate attribute/relation must be strings")
        return None
    if isinstance(literal, list):
        literal = tuple(literal)
    return Predicate(attribute, relation, literal)


def _parse_operand(obj: object, path: str, col: _Collector):
    if not isinstance(obj, dict):
        col.add(path, "filter operand must be an object")
        return None
    if "op" in obj:
        return _parse_filter(obj, path, col)
    if "primitive" in obj:
        return _parse_call(obj, path, col)
    if "path" in obj:
        if not _require_keys(obj, path, {"path"}, set(), col):
            return None
        return _parse_path(obj["path"], f"{path}.path", col)
    if "attribute" in obj:
        return _parse_predicate(obj, path, col)
    col.add(path, "operand is not a filter, call, path, or predicate")
    return None


def _parse_filter(obj: dict, path: str, col: _Collector) -> Filter | None:
    if not _require_keys(obj, path, {"op", "operands"}, set(), col):
        return None
    op = obj["op"]
    if op not in FILTER_OPS:
        col.add(f"{path}.op", f"unknown filter op {op!r}")
        return None
    raw = obj["operands"]
    if not isinstance(raw, list):
        col.add(f"{path}.operands", "operands must be an array")
        return None
    operands = []
    for i, o in enumerate(raw):
        parsed = _parse_operand(o, f"{path}.operands[{i}]", col)
        if parsed is None:
            return None
        operands.append(parsed)
    if op == "NOT" and len(operands) != 1:
        col.add(path, "NOT takes exactly one operand")
        return None
    if op in ("AND", "OR") and len(operands) < 2:
        col.add(path, f"{op} takes at least two operands")
        return None
    if op == "CMP" and (len(operands) != 1 or not isinstance(operands[0], Predicate)):
        col.add(path, "CMP takes exactly one predicate operand")
        return None
    return Filter(op, tuple(operands))


def _parse_call(obj: dict, path: str, col: _Collector) -> PrimitiveCall | None:
    if not _require_keys(obj, path, {"primitive"}, {"params", "filter"}, col):
        return None
    name = obj["primitive"]
    if not isinstance(name, str):
        col.add(f"{path}.primitive", "primitive name must be a string")
        return None
    spec = primitive_spec(name)
    if spec is None:
        col.add(f"{path}.primitive", f"unknown primitive {name!r}", kind="unknown_primitive")
        return None
    params = _parse_scalar_params(obj.get("params", []), f"{path}.params", col)
    if params is None:
        return None
    if len(params) != len(spec.param_schema):
        col.add(
            f"{path}.params",
            f"{name} expects {len(spec.param_schema)} parameter(s), got {len(params)}",
            kind="arity",
        )
        return None
    filt = None
    if "filter" in obj:
        filt = _parse_operand(obj["filter"], f"{path}.filter", col)
        if filt is None:
            return None
    return PrimitiveCall(name, params, filt)


def _parse_path(raw: object, path: str, col: _Collector) -> Path | None:
    if not isinstance(raw, list) or not raw:
        col.add(path, "path must be a non-empty array of primitive calls")
        return None
    steps = []
    for i, o in enumerate(raw):
        if not isinstance(o, dict):
            col.add(f"{path}[{i}]", "path step must be an object")
            return None
        call = _parse_call(o, f"{path}[{i}]", col)
        if call is None:
            return None
        steps.append(call)
    return Path(tuple(steps))


def parse_rule(data: bytes | str | dict) -> Rule:
    """Parse rule JSON; raises RuleSchemaError (with all collected issues)."""
    col = _Collector()
    if isinstance(data, (bytes, str)):
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as err:
            raise RuleSchemaError([SchemaIssue("$", f"invalid JSON: {err}")]) from None
    else:
        doc = data

    if not isinstance(doc, dict):
        raise RuleSchemaError([SchemaIssue("$", "rule document must be an object")])

    required = {"rule_id", "cwe", "description", "path", "verdict", "schema_version"}
    optional = {"report_at"}
    _require_keys(doc, "$", required, optional, col)

    if doc.get("schema_version") not in (None, SCHEMA_VERSION):
        col.add("$.schema_version", f"unsupported schema version {doc.get('schema_version')!r}")

    for key in ("rule_id", "cwe", "description"):
        if key in doc and not isinstance(doc[key], str):
            col.add(f"$.{key}", "must be a string")
    if "verdict" in doc and doc["verdict"] not in VERDICTS:
        col.add("$.verdict", f"verdict must be one of {list(VERDICTS)}")
    report_at = doc.get("report_at")
    if report_at is not None and (not isinstance(report_at, int) or isinstance(report_at, bool)):
        col.add("$.report_at", "report_at must be an integer step index")

    path = _parse_path(doc["path"], "$.path", col) if "path" in doc else None
    if path is not None and report_at is not None and not (0 <= report_at < len(path.steps)):
        col.add("$.report_at", f"step index {report_at} outside path of length {len(path.steps)}")

    if col.issues:
        unknown = [i for i in col.issues if i.kind == "unknown_primitive"]
        if unknown:
            raise UnknownPrimitive(unknown[0].message, col.issues)
        arity = [i for i in col.issues if i.kind == "arity"]
        if arity:
            raise ArityMismatch(arity[0].json_path, -1, -1, col.issues)
        raise RuleSchemaError(col.issues)

    assert path is not None
    return Rule(
        rule_id=doc["rule_id"],
        cwe=doc["cwe"],
        description=doc["description"],
        path=path,
        verdict=doc["verdict"],
        report_at=report_at,
    )


# -- serialization ------------------------------------------------------

def _predicate_to_dict(p: Predicate) -> dict:
    literal = list(p.literal) if isinstance(p.literal, tuple) else p.literal
    return {"attribute": p.attribute, "relation": p.relation, "literal": literal}


def _operand_to_dict(o) -> dict:
    if isinstance(o, Filter):
        return _filter_to_dict(o)
    if isinstance(o, PrimitiveCall):
        return _call_to_dict(o)
    if isinstance(o, Path):
        return {"path": [_call_to_dict(s) for s in o.steps]}
    if isinstance(o, Predicate):
        return _predicate_to_dict(o)
    raise TypeError(f"unexpected operand: {o!r}")


def _filter_to_dict(f: Filter) -> dict:
    return {"op": f.op, "operands": [_operand_to_dict(o) for o in f.operands]}


def _call_to_dict(c: PrimitiveCall) -> dict:
    out: dict = {"primitive": c.primitive, "params": list(c.params)}
    if c.filter is not None:
        out["filter"] = _operand_to_dict(c.filter)
    return out


def rule_to_dict(r: Rule) -> dict:
    out: dict = {
        "schema_version": r.schema_version,
        "rule_id": r.rule_id,
        "cwe": r.cwe,
        "description": r.description,
        "path": [_call_to_dict(s) for s in r.path.steps],
        "verdict": r.verdict,
    }
    if r.report_at is not None:
        out["report_at"] = r.report_at
    return out


def serialize_rule(r: Rule) -> bytes:
    """Canonical JSON; parse_rule(serialize_rule(r)) == r."""
    return (json.dumps(rule_to_dict(r), indent=2, sort_keys=True) + "\n").encode("utf-8")


def count_primitive_calls(r: Rule) -> int:
    """Number of primitive calls in a rule, filters included."""

    def in_operand(o: object | None) -> int:
        if o is None or isinstance(o, Predicate):
            return 0
        if isinstance(o, Filter):
            return sum(in_operand(x) for x in o.operands)
        if isinstance(o, PrimitiveCall):
            return 1 + in_operand(o.filter)
        assert isinstance(o, Path)
        return sum(1 + in_operand(s.filter) for s in o.steps)

    return sum(1 + in_operand(s.filter) for s in r.path.steps)
