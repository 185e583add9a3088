from __future__ import annotations

from pathlib import Path

import pytest

from veripg.corpus.assemble import build_corpus
from veripg.corpus.score import load_manifest
from veripg.frontend import SourceFile, parse
from veripg.graph.build import build_graph, build_graphs
from veripg.rules.catalog import catalog
from veripg.rules.packs import load_pack
from veripg.rules.validator import build_fsm

TESTS = Path(__file__).parent
COVERAGE_DIR = TESTS / "data" / "coverage"
GOLDEN_AST = TESTS / "golden" / "ast"
GOLDEN_GRAPH = TESTS / "golden" / "graph"
MISUSE_DIR = TESTS / "fixtures" / "misuse"
TRANSCRIPTS = TESTS / "fixtures" / "transcripts"


def parse_file(path: Path):
    return parse(SourceFile.from_path(path))


def parse_text(text: str, name: str = "<test>"):
    return parse(SourceFile(name, text))


def graph_of(text: str, module_index: int = 0):
    root, diags = parse_text(text)
    assert not [d for d in diags if d.severity == "error"], diags
    return build_graph(root, module_index)


@pytest.fixture(scope="session")
def coverage_files() -> list[Path]:
    files = sorted(COVERAGE_DIR.glob("*.v"))
    assert len(files) >= 12
    return files


@pytest.fixture(scope="session")
def coverage_graphs(coverage_files):
    graphs = []
    for f in coverage_files:
        root, diags = parse_file(f)
        assert not [d for d in diags if d.severity == "error"], (f, diags)
        graphs.extend((f.name, g) for g in build_graphs(root))
    return graphs


@pytest.fixture(scope="session")
def pack():
    return load_pack()


@pytest.fixture(scope="session")
def fsm():
    return build_fsm(catalog())


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("corpus")
    build_corpus(out, seed=2024)
    return out


@pytest.fixture(scope="session")
def corpus_entries(corpus_dir):
    return load_manifest(corpus_dir / "manifest.jsonl")


@pytest.fixture(scope="session")
def corpus_graphs(corpus_entries):
    out = []
    for e in corpus_entries:
        root, diags = parse_file(Path(e.path))
        assert not [d for d in diags if d.severity == "error"], (e.path, diags)
        out.append((e, build_graph(root)))
    return out
