from veripg.graph.build import build_cfg, build_ddg, build_graph, build_graphs, extract_common_nodes, fuse
from veripg.graph.export import export_graph, graph_to_dict, import_graph
from veripg.graph.model import CfgFragment, DefUseRecord, Edge, EdgeKind, InconsistentInput, VeriPG

__all__ = [
    "CfgFragment",
    "DefUseRecord",
    "Edge",
    "EdgeKind",
    "InconsistentInput",
    "VeriPG",
    "build_cfg",
    "build_ddg",
    "build_graph",
    "build_graphs",
    "export_graph",
    "extract_common_nodes",
    "fuse",
    "graph_to_dict",
    "import_graph",
]
