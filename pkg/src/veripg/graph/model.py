"""Property-graph model: one fused graph per module.

Node ids are the parse-time pre-order ids, so id order equals source
order; that property is load-bearing for the data-dependency semantics
(program order) and for deterministic exports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from veripg.frontend.nodes import AstNode


class EdgeKind(str, Enum):
    AST = "AST"
    CFG = "CFG"
    DDG = "DDG"


@dataclass(frozen=True, order=True)
class Edge:
    src: int
    dst: int
    kind: EdgeKind
    condition: str | None = None
    dep_signal: str | None = None

    def __post_init__(self) -> None:
        if self.condition is not None and self.kind != EdgeKind.CFG:
            raise ValueError("condition is a CFG-only edge property")
        if (self.dep_signal is not None) != (self.kind == EdgeKind.DDG):
            raise ValueError("dep_signal is present iff the edge is DDG")


def edge_sort_key(e: Edge) -> tuple:
    return (e.src, e.dst, e.kind.value, e.condition or "", e.dep_signal or "")


@dataclass
class CfgFragment:
    owner: int  # Always or Assign node id
    entry: int
    exits: list[int]
    edges: list[Edge]

    def node_ids(self) -> set[int]:
        ids = {self.entry}
        for e in self.edges:
            ids.add(e.src)
            ids.add(e.dst)
        return ids


@dataclass
class DefUseRecord:
    signal: str
    defs: list[tuple[int, str]] = field(default_factory=list)  # (node id, assign kind)
    uses: list[int] = field(default_factory=list)


class InconsistentInput(Exception):
    pass


class VeriPG:
    """Fused AST/CFG/DDG property graph for one module.

    Immutable after construction; traversal helpers and CSR adjacency
    are cached so many rules can run concurrently against one graph.
    """

    def __init__(
        self,
        module_name: str,
        nodes: dict[int, AstNode],
        edges: list[Edge],
        common_nodes: set[int],
        def_use: dict[str, DefUseRecord],
    ):
        self.module_name = module_name
        self.nodes = dict(sorted(nodes.items()))
        self.edges = sorted(set(edges), key=edge_sort_key)
        self.common_nodes = frozenset(common_nodes)
        self.def_use = def_use

        self.type_index: dict[str, list[int]] = {}
        self.name_index: dict[str, list[int]] = {}
        for nid, node in self.nodes.items():
            self.type_index.setdefault(node.node_type.value, []).append(nid)
            if node.name:
                self.name_index.setdefault(node.name, []).append(nid)

        self._adj: dict[tuple[EdgeKind, bool], dict[int, list[int]]] = {}
        self._csr: dict[tuple[EdgeKind, bool], tuple[np.ndarray, np.ndarray]] = {}
        self._cfg_in_labels: dict[int, list[str]] | None = None
        self._edge_key_set = {
            (e.src, e.dst, e.kind, e.condition, e.dep_signal) for e in self.edges
        }

    # -- adjacency --

    def adjacency(self, kind: EdgeKind, reverse: bool = False) -> dict[int, list[int]]:
        key = (kind, reverse)
        if key not in self._adj:
            adj: dict[int, list[int]] = {}
            for e in self.edges:
                if e.kind != kind:
                    continue
                a, b = (e.dst, e.src) if reverse else (e.src, e.dst)
                adj.setdefault(a, []).append(b)
            for lst in adj.values():
                lst.sort()
            self._adj[key] = adj
        return self._adj[key]

    def csr(self, kind: EdgeKind, reverse: bool = False) -> tuple[np.ndarray, np.ndarray]:
        """CSR adjacency over [0, max_id]; rows for absent ids are empty."""
        key = (kind, reverse)
        if key not in self._csr:
            size = (max(self.nodes) + 2) if self.nodes else 1
            adj = self.adjacency(kind, reverse)
            indptr = np.zeros(size, dtype=np.int64)
            for a, lst in adj.items():
                indptr[a + 1] = len(lst)
            np.cumsum(indptr, out=indptr)
            indices = np.empty(int(indptr[-1]), dtype=np.int64)
            for a, lst in adj.items():
                start = int(indptr[a])
                indices[start : start + len(lst)] = lst
            self._csr[key] = (indptr, indices)
        return self._csr[key]

    def ast_children(self, nid: int) -> list[int]:
        """Kept-AST children of a node, in source order."""
        return self.adjacency(EdgeKind.AST).get(nid, [])

    def cfg_in_labels(self, nid: int) -> list[str]:
        if self._cfg_in_labels is None:
            labels: dict[int, list[str]] = {}
            for e in self.edges:
                if e.kind == EdgeKind.CFG and e.condition is not None:
                    labels.setdefault(e.dst, []).append(e.condition)
            for lst in labels.values():
                lst.sort()
            self._cfg_in_labels = labels
        return self._cfg_in_labels.get(nid, [])

    def has_edge(self, src: int, dst: int, kind: EdgeKind, condition=None, dep_signal=None) -> bool:
        return (src, dst, kind, condition, dep_signal) in self._edge_key_set

    # -- equality on the export-relevant content --

    def _projection(self) -> tuple:
        return (
            self.module_name,
            tuple(
                (nid, n.node_type.value, n.name, n.lineno, n.value)
                for nid, n in self.nodes.items()
            ),
            tuple(self.edges),
            tuple(sorted(self.common_nodes)),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VeriPG):
            return NotImplemented
        return self._projection() == other._projection()

    def __hash__(self) -> int:
        return hash(self._projection())

    def __repr__(self) -> str:
        return (
            f"VeriPG({self.module_name!r}, {len(self.nodes)} nodes, "
            f"{len(self.edges)} edges, {len(self.common_nodes)} common)"
        )
