"""Rule validation against the graph schema's finite state machine.

States are node types plus `entry` and `boolean`; traversal primitives
drive the transitions.  Validation tracks every live state branch at
once, kills illegal branches immediately, and reports the two misuse
classes separately:

  IllegalRule      — a primitive applied where it cannot go (wrong state,
                     missing signal focus, anything after a boolean fold)
  IllegalParameter — wrong parameter count, type, or value

Each violation carries the primitives still legal from the surviving
states, which is the feedback the generation loop feeds back to the LLM.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from veripg.rules.catalog import (
    FORWARD_STEP_TABLES,
    NODE_TYPE_NAMES,
    PREDICATE_ATTRIBUTES,
    PREDICATE_RELATIONS,
    REVERSE_STEP_TABLES,
    PrimitiveSpec,
    check_param_values,
    primitive_spec,
)
from veripg.rules.model import Filter, Path, Predicate, PrimitiveCall, Rule

ILLEGAL_RULE = "IllegalRule"
ILLEGAL_PARAMETER = "IllegalParameter"

# Nesting-capable states (an if inside an if, and so on).
SELF_LOOP_STATES = frozenset({"IfStatement", "Block", "CaseStatement", "ForStatement"})


@dataclass(frozen=True)
class Violation:
    step: int
    kind: str
    message: str
    allowed_next: tuple[str, ...]


@dataclass
class ValidationReport:
    valid: bool
    violations: list[Violation] = field(default_factory=list)
    surviving_states: list[list[str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "violations": [
                {
                    "step": v.step,
                    "kind": v.kind,
                    "message": v.message,
                    "allowed_next": list(v.allowed_next),
                }
                for v in self.violations
            ],
        }


@dataclass(frozen=True)
class SchemaFsm:
    states: frozenset[str]
    transitions: frozenset[tuple[str, str, frozenset[str]]]
    self_loops: frozenset[str]
    catalog: tuple[PrimitiveSpec, ...]


def _input_states(spec: PrimitiveSpec, live: frozenset[str]) -> frozenset[str]:
    if spec.input_state == "entry":
        return live & {"entry"}
    if spec.input_state == "any":
        return live - {"entry", "boolean"}
    return live & spec.input_state


def _table_step(table_name: str, kind: str, states: frozenset[str]) -> frozenset[str]:
    tables = FORWARD_STEP_TABLES if table_name == "fwd" else REVERSE_STEP_TABLES
    table = tables[kind]
    out: set[str] = set()
    for s in states:
        out |= table.get(s, frozenset())
    return frozenset(out)


def _table_closure(kind: str, states: frozenset[str]) -> frozenset[str]:
    seen: set[str] = set()
    frontier = states
    while frontier:
        nxt = _table_step("fwd", kind, frontier) - seen
        seen |= nxt
        frontier = nxt
    return frozenset(seen)


def resolve_output(spec: PrimitiveSpec, applicable: frozenset[str], params: tuple) -> frozenset[str] | str:
    """Result states of one primitive application, parameter-aware."""
    name = spec.name
    if spec.output_state == "boolean":
        return "boolean"
    if name == "Node":
        return frozenset({params[0]})
    if name == "Children":
        return _table_step("fwd", params[0], applicable)
    if name == "Parents":
        return _table_step("rev", params[0], applicable)
    if name == "Descendants":
        return _table_closure(params[0], applicable)
    if name == "Branch":
        return _table_step("fwd", "CFG", applicable)
    if name == "AssignStatement":
        kind = params[0]
        if kind == "blocking":
            return frozenset({"BlockingSubstitution"})
        if kind == "nonblocking":
            return frozenset({"NonblockingSubstitution"})
        if kind == "continuous":
            return frozenset({"Assign"})
        return frozenset({"BlockingSubstitution", "NonblockingSubstitution", "Assign"})
    assert isinstance(spec.output_state, frozenset)
    return spec.output_state


def _union_output(spec: PrimitiveSpec, applicable: frozenset[str]) -> frozenset[str] | str:
    """Output over all legal parameter choices (for allowed_next and the
    static transition table)."""
    if spec.output_state == "boolean":
        return "boolean"
    if spec.name == "Node":
        return frozenset(NODE_TYPE_NAMES)
    if spec.name in ("Children", "Descendants", "Parents", "Branch"):
        out: set[str] = set()
        kinds = ("AST", "CFG", "DDG") if spec.name != "Branch" else ("CFG",)
        for kind in kinds:
            if spec.name == "Descendants":
                out |= _table_closure(kind, applicable)
            elif spec.name == "Parents":
                out |= _table_step("rev", kind, applicable)
            else:
                out |= _table_step("fwd", kind, applicable)
        return frozenset(out)
    assert isinstance(spec.output_state, frozenset)
    return spec.output_state


def build_fsm(specs: list[PrimitiveSpec]) -> SchemaFsm:
    """Derive the transition table mechanically from the catalog."""
    states = frozenset(NODE_TYPE_NAMES) | {"entry", "boolean"}
    transitions: set[tuple[str, str, frozenset[str]]] = set()
    for spec in specs:
        for s in states:
            if s == "boolean":
                continue  # terminal
            applicable = _input_states(spec, frozenset({s}))
            if not applicable:
                continue
            out = _union_output(spec, applicable)
            if out == "boolean":
                transitions.add((s, spec.name, frozenset({"boolean"})))
            elif out:
                transitions.add((s, spec.name, out))
    return SchemaFsm(
        states=states,
        transitions=frozenset(transitions),
        self_loops=SELF_LOOP_STATES,
        catalog=tuple(specs),
    )


def allowed_primitives(fsm: SchemaFsm, live: frozenset[str], focus: bool) -> tuple[str, ...]:
    names = []
    for spec in fsm.catalog:
        if spec.needs_focus and not focus:
            continue
        applicable = _input_states(spec, live)
        if not applicable:
            continue
        out = _union_output(spec, applicable)
        if out == "boolean" or out:
            names.append(spec.name)
    return tuple(names)


class _Halt(Exception):
    pass


class _Simulator:
    def __init__(self, fsm: SchemaFsm):
        self.fsm = fsm
        self.violations: list[Violation] = []

    def fail(self, step: int, kind: str, message: str, live: frozenset[str], focus: bool) -> None:
        self.violations.append(
            Violation(step, kind, message, allowed_primitives(self.fsm, live, focus))
        )
        raise _Halt()

    def apply(self, call: PrimitiveCall, live: frozenset[str], focus: bool, step: int) -> tuple:
        spec = primitive_spec(call.primitive)
        if spec is None:
            self.fail(step, ILLEGAL_RULE, f"unknown primitive {call.primitive!r}", live, focus)
        assert spec is not None

        problem = check_param_values(spec, call.params)
        if problem:
            self.fail(step, ILLEGAL_PARAMETER, problem, live, focus)

        if "boolean" in live:
            self.fail(step, ILLEGAL_RULE, "no primitive may follow a boolean result", live, focus)
        if spec.needs_focus and not focus:
            self.fail(
                step,
                ILLEGAL_RULE,
                f"{spec.name} requires a signal focus (apply Variable first)",
                live,
                focus,
            )
        applicable = _input_states(spec, live)
        if not applicable:
            self.fail(
                step,
                ILLEGAL_RULE,
                f"{spec.name} cannot be applied at state(s) {sorted(live)}",
                live,
                focus,
            )
        out = resolve_output(spec, applicable, call.params)
        if out != "boolean" and not out:
            self.fail(
                step,
                ILLEGAL_RULE,
                f"{spec.name}{list(call.params)!r} has no legal successor state from {sorted(applicable)}",
                live,
                focus,
            )

        focus_after = focus or spec.sets_focus
        if call.filter is not None:
            if out == "boolean":
                self.fail(step, ILLEGAL_RULE, "a filter cannot apply to a boolean result", live, focus)
            self.check_operand(call.filter, frozenset(out), focus_after, step)
        live_after = frozenset({"boolean"}) if out == "boolean" else frozenset(out)
        return live_after, focus_after

    def check_operand(self, operand, states: frozenset[str], focus: bool, step: int) -> None:
        if isinstance(operand, Predicate):
            if operand.attribute not in PREDICATE_ATTRIBUTES:
                self.fail(
                    step,
                    ILLEGAL_PARAMETER,
                    f"unknown predicate attribute {operand.attribute!r}",
                    states,
                    focus,
                )
            if operand.relation not in PREDICATE_RELATIONS:
                self.fail(
                    step,
                    ILLEGAL_PARAMETER,
                    f"unknown predicate relation {operand.relation!r}",
                    states,
                    focus,
                )
            if operand.relation == "in" and not isinstance(operand.literal, tuple):
                self.fail(
                    step,
                    ILLEGAL_PARAMETER,
                    "'in' predicate needs a list literal",
                    states,
                    focus,
                )
        elif isinstance(operand, PrimitiveCall):
            self.run_steps([operand], states, focus, step)
        elif isinstance(operand, Path):
            self.run_steps(list(operand.steps), states, focus, step)
        elif isinstance(operand, Filter):
            for o in operand.operands:
                self.check_operand(o, states, focus, step)

    def run_steps(
        self, steps: list[PrimitiveCall], live: frozenset[str], focus: bool, step_index: int
    ) -> frozenset[str]:
        for call in steps:
            live, focus = self.apply(call, live, focus, step_index)
        return live


def validate(rule: Rule, fsm: SchemaFsm) -> ValidationReport:
    """Simulate the rule path over the FSM; violations are data, not faults."""
    sim = _Simulator(fsm)
    surviving: list[list[str]] = []
    live: frozenset[str] = frozenset({"entry"})
    focus = False
    try:
        for i, call in enumerate(rule.path.steps):
            live, focus = sim.apply(call, live, focus, i)
            surviving.append(sorted(live))
    except _Halt:
        pass
    valid = not sim.violations and bool(live)
    return ValidationReport(valid=valid, violations=sim.violations, surviving_states=surviving)
