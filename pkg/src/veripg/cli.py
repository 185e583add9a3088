"""Command-line entry point.

Exit codes: 0 clean, 1 vulnerabilities found (or rule invalid / session
exhausted), 2 usage or parse error, 3 internal fault.
"""

from __future__ import annotations

import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from veripg.corpus.assemble import build_corpus
from veripg.corpus.score import MissingFindings, load_manifest, score
from veripg.frontend.parser import parse
from veripg.frontend.source import SourceFile
from veripg.graph.build import build_graphs
from veripg.graph.export import export_graph
from veripg.generator.descriptions import builtin_description
from veripg.generator.pipeline import (
    FormatError,
    extract_conditions,
    generate_rule,
    misuse_metrics,
    session_to_dict,
)
from veripg.generator.provider import ProviderConfig, ProviderError
from veripg.rules.catalog import catalog
from veripg.rules.executor import Finding, findings_to_dict, run_rules
from veripg.rules.model import Rule, RuleSchemaError, parse_rule, serialize_rule
from veripg.rules.packs import load_pack
from veripg.rules.validator import build_fsm, validate


def _fail(message: str, code: int = 2) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_rules(rules_dir: str | None) -> list[Rule]:
    if rules_dir is None:
        rules = load_pack()
    else:
        rules = []
        paths = sorted(Path(rules_dir).glob("*.json"))
        if not paths:
            _fail(f"no rule files in {rules_dir}")
        for p in paths:
            try:
                rules.append(parse_rule(p.read_bytes()))
            except RuleSchemaError as err:
                _fail(f"{p}: {err}")
    fsm = build_fsm(catalog())
    for rule in rules:
        report = validate(rule, fsm)
        if not report.valid:
            _fail(f"rule {rule.rule_id} is invalid: {report.to_dict()['violations']}")
    return rules


def _merge_findings(per_module: list[list[Finding]]) -> list[Finding]:
    """Design-level verdicts: a rule fires if it fires in any module."""
    merged: dict[str, Finding] = {}
    for findings in per_module:
        for f in findings:
            cur = merged.get(f.rule_id)
            if cur is None:
                merged[f.rule_id] = f
                continue
            combined = Finding(
                rule_id=f.rule_id,
                cwe=f.cwe,
                vulnerable=bool(cur.vulnerable) or bool(f.vulnerable),
                matched=sorted(set(cur.matched) | set(f.matched), key=lambda t: (t[1], t[0])),
                witness_signal=cur.witness_signal or f.witness_signal,
                stats={
                    "primitives": cur.stats["primitives"] + f.stats["primitives"],
                    "micros": cur.stats["micros"] + f.stats["micros"],
                },
                error=cur.error or f.error,
            )
            merged[f.rule_id] = combined
    return [merged[k] for k in sorted(merged)]


def _scan_design(path: str, rules: list[Rule]) -> tuple[str, list[Finding] | None, str | None]:
    try:
        src = SourceFile.from_path(path)
    except (OSError, UnicodeDecodeError) as err:
        return path, None, str(err)
    root, diags = parse(src)
    errors = [d for d in diags if d.severity == "error"]
    if not root.children:
        detail = errors[0].message if errors else "no modules found"
        return path, None, detail
    graphs = build_graphs(root)
    findings = _merge_findings([run_rules(g, rules) for g in graphs])
    return path, findings, None


@click.group()
def main() -> None:
    """RTL Verilog property-graph vulnerability scanner."""


@main.command()
@click.argument("paths", nargs=-1, required=True, type=click.Path())
@click.option("--rules", "rules_dir", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json")
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--output", type=click.Path(), default=None, help="Write the report here instead of stdout.")
def scan(paths: tuple[str, ...], rules_dir: str | None, fmt: str, jobs: int, output: str | None) -> None:
    """Scan Verilog files with the rule pack."""
    rules = _load_rules(rules_dir)
    ordered = sorted(paths)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda p: _scan_design(p, rules), ordered))
    else:
        results = [_scan_design(p, rules) for p in ordered]

    reports = []
    scanned = 0
    vulnerable = False
    for path, findings, problem in results:
        if findings is None:
            click.echo(f"error: {path}: {problem}", err=True)
            continue
        scanned += 1
        vulnerable = vulnerable or any(f.vulnerable for f in findings)
        reports.append(findings_to_dict(path, findings))

    if scanned == 0:
        _fail("nothing scanned")

    if fmt == "json":
        text = json.dumps(reports, indent=2, sort_keys=True) + "\n"
    else:
        lines = []
        for rep in reports:
            for f in rep["findings"]:
                if f["vulnerable"]:
                    linenos = ",".join(str(m["lineno"]) for m in f["matched"])
                    witness = f" signal={f['witness_signal']}" if f["witness_signal"] else ""
                    lines.append(f"{rep['design']}: {f['rule_id']} ({f['cwe']}) lines {linenos}{witness}")
        text = ("\n".join(lines) + "\n") if lines else "clean\n"

    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    sys.exit(1 if vulnerable else 0)


@main.command()
@click.argument("path", type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["json", "dot"]), default="json")
@click.option("--module", "module_index", type=int, default=0, show_default=True)
def graph(path: str, fmt: str, module_index: int) -> None:
    """Export the fused property graph of one module."""
    try:
        src = SourceFile.from_path(path)
    except (OSError, UnicodeDecodeError) as err:
        _fail(str(err))
    root, diags = parse(src)
    errors = [d.message for d in diags if d.severity == "error"]
    if not root.children:
        _fail(errors[0] if errors else f"{path}: no modules found")
    graphs = build_graphs(root)
    if module_index >= len(graphs):
        _fail(f"{path}: no module at index {module_index}")
    sys.stdout.buffer.write(export_graph(graphs[module_index], fmt))
    sys.exit(0)


@main.group()
def rule() -> None:
    """Rule tooling."""


@rule.command("validate")
@click.argument("rule_path", type=click.Path())
def rule_validate(rule_path: str) -> None:
    """Validate one rule file against the schema state machine."""
    try:
        data = Path(rule_path).read_bytes()
    except OSError as err:
        _fail(str(err))
    try:
        parsed = parse_rule(data)
    except RuleSchemaError as err:
        _fail(f"{rule_path}: {err}")
    report = validate(parsed, build_fsm(catalog()))
    click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    sys.exit(0 if report.valid else 1)


@main.command()
@click.option("--cwe", "cwe_id", required=True)
@click.option("--provider-config", type=click.Path(exists=True), default=None)
@click.option("--replay", "replay_path", type=click.Path(exists=True), default=None)
@click.option("--cap", type=int, default=50, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
@click.option("--session-log", type=click.Path(), default=None)
def generate(
    cwe_id: str,
    provider_config: str | None,
    replay_path: str | None,
    cap: int,
    out_path: str | None,
    session_log: str | None,
) -> None:
    """Generate a validated rule from a CWE description."""
    try:
        desc = builtin_description(cwe_id)
    except KeyError as err:
        _fail(str(err))
    try:
        if replay_path:
            config = ProviderConfig(mode="replay", transcript=replay_path)
        elif provider_config:
            config = ProviderConfig.from_file(provider_config)
        else:
            _fail("either --provider-config or --replay is required")
        provider = config.build()
    except ProviderError as err:
        _fail(str(err))

    fsm = build_fsm(catalog())
    try:
        conds = extract_conditions(desc, provider)
        session = generate_rule(conds, fsm, provider, cap=cap)
    except (ProviderError, FormatError) as err:
        _fail(str(err), code=3 if isinstance(err, ProviderError) and replay_path else 2)

    rates = misuse_metrics([session])
    log = session_to_dict(session)
    log["misuse_rates"] = {"illegal_rule": rates[0], "illegal_parameter": rates[1], "total": rates[2]}
    if session_log:
        Path(session_log).write_text(json.dumps(log, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    if session.outcome == "validated" and session.rule is not None:
        data = serialize_rule(session.rule)
        if out_path:
            Path(out_path).write_bytes(data)
        else:
            sys.stdout.buffer.write(data)
        sys.exit(0)
    click.echo(json.dumps(log, indent=2, sort_keys=True), err=True)
    sys.exit(1)


@main.command()
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--rules", "rules_dir", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json")
@click.option("--repeat", type=int, default=3, show_default=True, help="Timing repetitions per design.")
def bench(manifest_path: str, rules_dir: str | None, fmt: str, repeat: int) -> None:
    """Score the corpus and report per-design primitive/time stats."""
    entries = load_manifest(manifest_path)
    if not entries:
        _fail("manifest is empty")
    rules = _load_rules(rules_dir)

    findings_by_design: dict[str, list[Finding]] = {}
    design_stats = []
    for entry in entries:
        try:
            src = SourceFile.from_path(entry.path)
        except (OSError, UnicodeDecodeError) as err:
            _fail(f"{entry.path}: {err}")
        root, _diags = parse(src)
        if not root.children:
            _fail(f"{entry.path}: no modules found")
        graphs = build_graphs(root)

        best_micros = None
        findings: list[Finding] = []
        for _ in range(max(1, repeat)):
            per_module = [run_rules(g, rules) for g in graphs]
            findings = _merge_findings(per_module)
            micros = sum(f.stats["micros"] for f in findings)
            best_micros = micros if best_micros is None else min(best_micros, micros)
        findings_by_design[entry.path] = findings
        design_stats.append(
            {
                "path": entry.path,
                "label": entry.cwe,
                "loc": src.line_count,
                "primitives": sum(f.stats["primitives"] for f in findings),
                "micros": best_micros,
            }
        )

    try:
        report = score(entries, findings_by_design)
    except MissingFindings as err:
        _fail(str(err), code=3)

    times = [d["micros"] for d in design_stats]
    prims = [d["primitives"] for d in design_stats]
    locs = [d["loc"] for d in design_stats]
    correlations = {
        "time_vs_primitives": _pearson(times, prims),
        "time_vs_loc": _pearson(times, locs),
    }

    if fmt == "json":
        doc = {"score": report.to_dict(), "designs": design_stats, "correlation": correlations}
        click.echo(json.dumps(doc, indent=2, sort_keys=True))
    else:
        click.echo(report.format_table())
        click.echo(
            f"\ncorrelation(time, primitives) = {correlations['time_vs_primitives']:.4f}"
            f"\ncorrelation(time, loc)        = {correlations['time_vs_loc']:.4f}"
        )
    sys.exit(0)


def _pearson(xs: list, ys: list) -> float:
    n = len(xs)
    if n < 2:
        return 0.0
    mx = sum(xs) / n
    my = sum(ys) / n
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = sum((x - mx) ** 2 for x in xs)
    vy = sum((y - my) ** 2 for y in ys)
    if vx == 0 or vy == 0:
        return 0.0
    return cov / (vx**0.5 * vy**0.5)


@main.command()
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--seed", type=int, default=2024, show_default=True)
def corpus(out_dir: str, seed: int) -> None:
    """Build the evaluation corpus and its manifest."""
    manifest = build_corpus(out_dir, seed=seed)
    click.echo(str(manifest))
    sys.exit(0)


if __name__ == "__main__":
    main()
