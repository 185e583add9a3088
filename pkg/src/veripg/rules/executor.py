"""Rule execution engine.

Three tiers: primitive execution (the entry point; resolves one traversal
step and applies its result filter), filter evaluation (boolean algebra
over node subsets, including nested calls and paths evaluated per
element), and path execution (left-to-right chaining with per-signal
iteration for Variable/CondVars-rooted rules).

An empty node set short-circuits: remaining node-set steps are skipped
and only a final boolean fold still runs, so irrelevant code prunes
cheaply.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from veripg import kernels
from veripg.frontend.nodes import NodeType
from veripg.graph.model import EdgeKind, VeriPG
from veripg.rules.catalog import SIGNAL_DECL_STATES, primitive_spec
from veripg.rules.model import Filter, Path, Predicate, PrimitiveCall, Rule


class ExecutorTypeFault(Exception):
    """A primitive met a state the validator should have ruled out."""


@dataclass
class EvalContext:
    graph: VeriPG
    current: frozenset[int] | bool | None  # None = entry state
    focus_signal: str | None = None
    trace: list[tuple[str, int, int, int]] = field(default_factory=list)


@dataclass
class PerSignalOutcome:
    signal: str
    final: frozenset[int] | bool
    history: list[frozenset[int]]


@dataclass
class PathResult:
    final: frozenset[int] | bool
    history: list[frozenset[int]]
    per_signal: list[PerSignalOutcome] | None
    trace: list[tuple[str, int, int, int]]


@dataclass
class Finding:
    rule_id: str
    cwe: str
    vulnerable: bool | None
    matched: list[tuple[int, int]]  # (node id, lineno)
    witness_signal: str | None
    stats: dict
    error: str | None = None


def _truthy(value: frozenset[int] | bool) -> bool:
    return bool(value) if isinstance(value, bool) else len(value) > 0


def _ids_array(ids: frozenset[int]) -> np.ndarray:
    return np.fromiter(sorted(ids), dtype=np.int64, count=len(ids))


def _kernel_step(g: VeriPG, kind: EdgeKind, ids: frozenset[int], reverse: bool = False) -> frozenset[int]:
    if not ids:
        return frozenset()
    indptr, indices = g.csr(kind, reverse)
    return frozenset(int(x) for x in kernels.step(indptr, indices, _ids_array(ids)))


def _kernel_closure(g: VeriPG, kind: EdgeKind, ids: frozenset[int]) -> frozenset[int]:
    if not ids:
        return frozenset()
    indptr, indices = g.csr(kind)
    return frozenset(int(x) for x in kernels.closure(indptr, indices, _ids_array(ids)))


def _ast_subtree(g: VeriPG, root: int) -> frozenset[int]:
    return _kernel_closure(g, EdgeKind.AST, frozenset({root})) | {root}


def _occurrences(g: VeriPG, ids: frozenset[int]) -> frozenset[int]:
    """Identifier and part-select occurrence nodes within `ids`."""
    return frozenset(
        nid
        for nid in ids
        if g.nodes[nid].node_type in (NodeType.Identifier, NodeType.PartSelect) and g.nodes[nid].name
    )


def _condition_root(g: VeriPG, nid: int) -> int | None:
    kids = g.ast_children(nid)
    return kids[0] if kids else None


# -- primitive semantics -------------------------------------------------

def _check_node_input(ctx: EvalContext, spec) -> frozenset[int]:
    if isinstance(ctx.current, bool):
        raise ExecutorTypeFault(f"{spec.name} applied after a boolean fold")
    if spec.input_state == "entry":
        if ctx.current is not None:
            raise ExecutorTypeFault(f"{spec.name} is an entry primitive")
        return frozenset()
    if ctx.current is None:
        raise ExecutorTypeFault(f"{spec.name} cannot start a path")
    if isinstance(spec.input_state, frozenset):
        bad = [n for n in ctx.current if ctx.graph.nodes[n].node_type.value not in spec.input_state]
        if bad:
            raise ExecutorTypeFault(
                f"{spec.name} applied to {ctx.graph.nodes[bad[0]].node_type.value} node {bad[0]}"
            )
    return ctx.current


def _assign_kind_matches(kind_param: str, def_kind: str) -> bool:
    return kind_param == "any" or kind_param == def_kind


def _compute(ctx: EvalContext, call: PrimitiveCall) -> frozenset[int] | bool:
    g = ctx.graph
    name = call.primitive
    spec = primitive_spec(name)
    if spec is None:
        raise ExecutorTypeFault(f"unknown primitive {name!r}")
    current = _check_node_input(ctx, spec)

    if name == "Node":
        return frozenset(g.type_index.get(call.params[0], []))

    if name == "Children":
        return _kernel_step(g, EdgeKind(call.params[0]), current)
    if name == "Parents":
        return _kernel_step(g, EdgeKind(call.params[0]), current, reverse=True)
    if name == "Descendants":
        return _kernel_closure(g, EdgeKind(call.params[0]), current)

    if name == "Branch":
        branchy = frozenset(
            n
            for n in current
            if g.nodes[n].node_type in (NodeType.IfStatement, NodeType.CaseStatement)
        )
        return _kernel_step(g, EdgeKind.CFG, branchy)

    if name == "CondVars":
        out: set[int] = set()
        for nid in sorted(current):
            root = _condition_root(g, nid)
            if root is not None:
                out |= _occurrences(g, _ast_subtree(g, root))
        return frozenset(out)

    if name == "Variable":
        out = set()
        for type_name in sorted(SIGNAL_DECL_STATES):
            out.update(g.type_index.get(type_name, []))
        return frozenset(out)

    if name == "LoadStatement":
        if ctx.focus_signal is None:
            raise ExecutorTypeFault("LoadStatement without a signal focus")
        rec = g.def_use.get(ctx.focus_signal)
        return frozenset(rec.uses) if rec else frozenset()

    if name == "AssignStatement":
        if ctx.focus_signal is None:
            raise ExecutorTypeFault("AssignStatement without a signal focus")
        rec = g.def_use.get(ctx.focus_signal)
        if rec is None:
            return frozenset()
        kind_param = call.params[0]
        out = set()
        for def_id, def_kind in rec.defs:
            if not _assign_kind_matches(kind_param, def_kind):
                continue
            reaches_current = any(
                g.has_edge(def_id, u, EdgeKind.DDG, dep_signal=ctx.focus_signal) for u in current
            )
            if not reaches_current:
                out.add(def_id)
        return frozenset(out)

    if name == "SensList":
        out = set()
        for nid in sorted(current):
            for child in g.ast_children(nid):
                if g.nodes[child].node_type == NodeType.SensList:
                    out.update(g.ast_children(child))
        return frozenset(out)

    if name == "FsmStates":
        reg_names = {g.nodes[n].name for n in g.type_index.get("RegDecl", [])}
        out = set()
        for nid in sorted(current):
            root = _condition_root(g, nid)
            if root is None:
                continue
            sel_names = {g.nodes[o].name for o in _occurrences(g, _ast_subtree(g, root))}
            if sel_names & reg_names:
                for succ in _kernel_step(g, EdgeKind.CFG, frozenset({nid})):
                    if g.nodes[succ].node_type == NodeType.CaseItem:
                        out.add(succ)
        return frozenset(out)

    if name == "Exist":
        return len(current) > 0
    if name == "Absent":
        return len(current) == 0
    if name == "Count":
        cmp, n = call.params
        size = len(current)
        return {
            "eq": size == n,
            "ne": size != n,
            "lt": size < n,
            "le": size <= n,
            "gt": size > n,
            "ge": size >= n,
        }[cmp]

    raise ExecutorTypeFault(f"unhandled primitive {name!r}")


def exec_primitive(ctx: EvalContext, call: PrimitiveCall) -> EvalContext:
    """Execute one traversal primitive and its result filter."""
    started = time.perf_counter_ns()
    in_size = len(ctx.current) if isinstance(ctx.current, frozenset) else 0
    result = _compute(ctx, call)
    if call.filter is not None:
        if isinstance(result, bool):
            raise ExecutorTypeFault("filter applied to a boolean result")
        result = _filter_subset(replace(ctx, current=result), call.filter)
    out_size = len(result) if isinstance(result, frozenset) else int(bool(result))
    micros = (time.perf_counter_ns() - started) // 1000
    ctx.trace.append((call.primitive, in_size, out_size, int(micros)))
    return replace(ctx, current=result)


# -- filters --------------------------------------------------------------

def _predicate_match(g: VeriPG, nid: int, p: Predicate) -> bool:
    node = g.nodes[nid]
    if p.attribute == "condition":
        labels = g.cfg_in_labels(nid)
        if p.relation == "eq":
            return p.literal in labels
        if p.relation == "neq":
            return p.literal not in labels
        if p.relation == "contains":
            return any(str(p.literal) in label for label in labels)
        return any(label in p.literal for label in labels)  # in

    attr: object
    if p.attribute == "type":
        attr = node.node_type.value
    elif p.attribute == "name":
        attr = node.name or ""
    elif p.attribute == "value":
        attr = node.value if node.value is not None else ""
    else:  # lineno
        attr = node.lineno

    if p.relation == "eq":
        return attr == p.literal
    if p.relation == "neq":
        return attr != p.literal
    if p.relation == "contains":
        return str(p.literal) in str(attr)
    return attr in p.literal  # in


def _subeval_truthy(ctx: EvalContext, nid: int, operand) -> bool:
    steps = [operand] if isinstance(operand, PrimitiveCall) else list(operand.steps)
    sub = EvalContext(ctx.graph, frozenset({nid}), ctx.focus_signal, ctx.trace)
    final, _history, _per_signal = _run_steps(sub, steps)
    return _truthy(final)


def _filter_subset(ctx: EvalContext, operand) -> frozenset[int]:
    assert isinstance(ctx.current, frozenset)
    if isinstance(operand, Predicate):
        return frozenset(n for n in ctx.current if _predicate_match(ctx.graph, n, operand))
    if isinstance(operand, (PrimitiveCall, Path)):
        return frozenset(n for n in ctx.current if _subeval_truthy(ctx, n, operand))
    assert isinstance(operand, Filter)
    if operand.op == "CMP":
        return _filter_subset(ctx, operand.operands[0])
    if operand.op == "NOT":
        return ctx.current - _filter_subset(ctx, operand.operands[0])
    subsets = [_filter_subset(ctx, o) for o in operand.operands]
    out = subsets[0]
    for s in subsets[1:]:
        out = (out & s) if operand.op == "AND" else (out | s)
    return out


def exec_filter(ctx: EvalContext, f: Filter) -> EvalContext:
    if not isinstance(ctx.current, frozenset):
        raise ExecutorTypeFault("filters prune node sets only")
    return replace(ctx, current=_filter_subset(ctx, f))


# -- paths ----------------------------------------------------------------

def _focused_elements(ctx: EvalContext, call: PrimitiveCall) -> dict[str, frozenset[int]]:
    """Result of a focus-producing primitive, grouped per signal name,
    with the step filter applied per element."""
    result = _compute(ctx, call)
    assert isinstance(result, frozenset)
    groups: dict[str, set[int]] = {}
    for nid in result:
        name = ctx.graph.nodes[nid].name
        if name:
            groups.setdefault(name, set()).add(nid)
    out: dict[str, frozenset[int]] = {}
    for name, ids in groups.items():
        kept = frozenset(ids)
        if call.filter is not None:
            sub = EvalContext(ctx.graph, kept, name, ctx.trace)
            kept = _filter_subset(sub, call.filter)
        if kept:
            out[name] = kept
    return out


def _final_boolean_step(steps: list[PrimitiveCall], start: int) -> PrimitiveCall | None:
    if not steps:
        return None
    last = steps[-1]
    spec = primitive_spec(last.primitive)
    if spec is not None and spec.output_state == "boolean":
        return last
    return None


def _run_steps(
    ctx: EvalContext, steps: list[PrimitiveCall]
) -> tuple[frozenset[int] | bool, list[frozenset[int]], list[PerSignalOutcome] | None]:
    history: list[frozenset[int]] = []
    i = 0
    while i < len(steps):
        call = steps[i]
        spec = primitive_spec(call.primitive)
        if spec is None:
            raise ExecutorTypeFault(f"unknown primitive {call.primitive!r}")

        if spec.sets_focus and ctx.focus_signal is None:
            started = time.perf_counter_ns()
            elements = _focused_elements(ctx, call)
            union_ids = frozenset().union(*elements.values()) if elements else frozenset()
            micros = (time.perf_counter_ns() - started) // 1000
            in_size = len(ctx.current) if isinstance(ctx.current, frozenset) else 0
            ctx.trace.append((call.primitive, in_size, len(union_ids), int(micros)))
            history.append(union_ids)

            rest = steps[i + 1 :]
            outcomes: list[PerSignalOutcome] = []
            finals: list[frozenset[int] | bool] = []
            for signal in sorted(elements):
                sub = EvalContext(ctx.graph, elements[signal], signal, ctx.trace)
                sub_final, sub_history, _nested = _run_steps(sub, rest)
                outcomes.append(
                    PerSignalOutcome(signal, sub_final, history[:-1] + [elements[signal]] + sub_history)
                )
                finals.append(sub_final)

            # Union combination across signals; verdicts re-examine outcomes.
            if rest and _final_boolean_step(rest, 0) is not None:
                combined: frozenset[int] | bool = any(_truthy(f) for f in finals)
            elif rest:
                sets = [f for f in finals if isinstance(f, frozenset)]
                combined = frozenset().union(*sets) if sets else frozenset()
            else:
                combined = union_ids
            for _ in rest:
                history.append(frozenset())
            return combined, history, outcomes

        # Empty-set short-circuit: jump to a final boolean fold if present.
        if isinstance(ctx.current, frozenset) and not ctx.current and i < len(steps) - 1:
            final_call = _final_boolean_step(steps, i)
            while len(history) < len(steps) - 1:
                history.append(frozenset())
            if final_call is not None:
                ctx = exec_primitive(ctx, final_call)
                history.append(frozenset())
                return ctx.current, history, None
            history.append(frozenset())
            return frozenset(), history, None

        ctx = exec_primitive(ctx, call)
        history.append(ctx.current if isinstance(ctx.current, frozenset) else frozenset())
        i += 1
    return ctx.current if ctx.current is not None else frozenset(), history, None


def exec_path(g: VeriPG, p: Path) -> PathResult:
    """Fold the path left to right from the entry state."""
    ctx = EvalContext(g, current=None)
    final, history, per_signal = _run_steps(ctx, list(p.steps))
    return PathResult(final=final, history=history, per_signal=per_signal, trace=ctx.trace)


# -- rules to findings -----------------------------------------------------

def default_report_index(p: Path) -> int:
    for i in range(len(p.steps) - 1, -1, -1):
        spec = primitive_spec(p.steps[i].primitive)
        if spec is not None and spec.output_state != "boolean":
            return i
    return 0


def _last_nonempty(history: list[frozenset[int]], upto: int) -> frozenset[int]:
    for i in range(min(upto, len(history) - 1), -1, -1):
        if history[i]:
            return history[i]
    return frozenset()


def run_rule(g: VeriPG, rule: Rule) -> Finding:
    result = exec_path(g, rule.path)
    report_at = rule.report_at if rule.report_at is not None else default_report_index(rule.path)

    witness: str | None = None
    contributing: list[tuple[str | None, list[frozenset[int]]]] = []
    if result.per_signal is not None:
        if rule.verdict == "exists":
            hits = [o for o in result.per_signal if _truthy(o.final)]
            vulnerable = bool(hits)
        else:  # forall_absent: some signal lacks the protective pattern
            hits = [o for o in result.per_signal if not _truthy(o.final)]
            vulnerable = bool(hits)
        if vulnerable:
            witness = hits[0].signal
            contributing = [(o.signal, o.history) for o in hits]
    else:
        truthy = _truthy(result.final)
        vulnerable = truthy if rule.verdict == "exists" else not truthy
        if vulnerable:
            contributing = [(None, result.history)]

    matched_ids: set[int] = set()
    if vulnerable:
        for _signal, history in contributing:
            ids = history[report_at] if report_at < len(history) else frozenset()
            if not ids:
                ids = _last_nonempty(history, report_at)
            matched_ids |= ids
        if not matched_ids:
            mods = g.type_index.get("ModuleDef", [])
            matched_ids = set(mods[:1])

    matched = sorted(((nid, g.nodes[nid].lineno) for nid in matched_ids), key=lambda t: (t[1], t[0]))
    stats = {
        "primitives": len(result.trace),
        "micros": int(sum(t[3] for t in result.trace)),
    }
    return Finding(
        rule_id=rule.rule_id,
        cwe=rule.cwe,
        vulnerable=vulnerable,
        matched=matched,
        witness_signal=witness,
        stats=stats,
    )


def run_rules(g: VeriPG, rules: list[Rule]) -> list[Finding]:
    """One finding per rule; a fault in one rule never hits its siblings."""
    findings = []
    for rule in sorted(rules, key=lambda r: r.rule_id):
        try:
            findings.append(run_rule(g, rule))
        except Exception as err:  # noqa: BLE001 - isolated into the finding
            findings.append(
                Finding(
                    rule_id=rule.rule_id,
                    cwe=rule.cwe,
                    vulnerable=None,
                    matched=[],
                    witness_signal=None,
                    stats={"primitives": 0, "micros": 0},
                    error=f"{type(err).__name__}: {err}",
                )
            )
    return findings


def findings_to_dict(design: str, findings: list[Finding], include_timing: bool = True) -> dict:
    return {
        "design": design,
        "findings": [
            {
                "rule_id": f.rule_id,
                "cwe": f.cwe,
                "vulnerable": f.vulnerable,
                "matched": [{"lineno": lineno} for _nid, lineno in f.matched],
                "witness_signal": f.witness_signal,
                "stats": {
                    "primitives": f.stats.get("primitives", 0),
                    "micros": f.stats.get("micros", 0) if include_timing else 0,
                },
                **({"error": f.error} if f.error else {}),
            }
            for f in findings
        ],
    }
