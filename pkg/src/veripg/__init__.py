"""veripg: RTL Verilog property graphs with declarative CWE detection rules."""

from veripg.frontend import parse, SourceFile
from veripg.graph.build import build_graph, build_graphs
from veripg.graph.export import export_graph, import_graph
from veripg.rules.executor import run_rules
from veripg.rules.model import parse_rule, serialize_rule
from veripg.rules.packs import load_pack

__version__ = "0.1.0"

__all__ = [
    "SourceFile",
    "build_graph",
    "build_graphs",
    "export_graph",
    "import_graph",
    "load_pack",
    "parse",
    "parse_rule",
    "run_rules",
    "serialize_rule",
    "__version__",
]
