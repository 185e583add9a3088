from veripg.rules.catalog import PrimitiveSpec, catalog, primitive_spec
from veripg.rules.executor import (
    EvalContext,
    ExecutorTypeFault,
    Finding,
    exec_filter,
    exec_path,
    exec_primitive,
    findings_to_dict,
    run_rule,
    run_rules,
)
from veripg.rules.model import (
    ArityMismatch,
    Filter,
    Path,
    Predicate,
    PrimitiveCall,
    Rule,
    RuleSchemaError,
    UnknownPrimitive,
    parse_rule,
    rule_to_dict,
    serialize_rule,
)
from veripg.rules.validator import (
    ILLEGAL_PARAMETER,
    ILLEGAL_RULE,
    SchemaFsm,
    ValidationReport,
    Violation,
    build_fsm,
    validate,
)

__all__ = [
    "ArityMismatch",
    "EvalContext",
    "ExecutorTypeFault",
    "Filter",
    "Finding",
    "ILLEGAL_PARAMETER",
    "ILLEGAL_RULE",
    "Path",
    "Predicate",
    "PrimitiveCall",
    "PrimitiveSpec",
    "Rule",
    "RuleSchemaError",
    "SchemaFsm",
    "UnknownPrimitive",
    "ValidationReport",
    "Violation",
    "build_fsm",
    "catalog",
    "exec_filter",
    "exec_path",
    "exec_primitive",
    "findings_to_dict",
    "parse_rule",
    "primitive_spec",
    "rule_to_dict",
    "run_rule",
    "run_rules",
    "serialize_rule",
    "validate",
]
