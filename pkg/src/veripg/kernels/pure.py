"""Pure-Python traversal kernels over CSR adjacency.

Same contract as the compiled twin in `_ckernels.pyx`: inputs are int64
CSR arrays (indptr of length n+1, indices) plus a sorted frontier array;
outputs are sorted unique int64 arrays.
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure"


def step(indptr: np.ndarray, indices: np.ndarray, frontier: np.ndarray) -> np.ndarray:
    """One-step successors of `frontier`."""
    n = len(indptr) - 1
    seen = bytearray(n)
    hits = 0
    for v in frontier:
        for i in range(indptr[v], indptr[v + 1]):
            w = indices[i]
            if not seen[w]:
                seen[w] = 1
                hits += 1
    out = np.empty(hits, dtype=np.int64)
    k = 0
    for v in range(n):
        if seen[v]:
            out[k] = v
            k += 1
    return out


def closure(indptr: np.ndarray, indices: np.ndarray, frontier: np.ndarray) -> np.ndarray:
    """All nodes reachable from `frontier` via one or more edges."""
    n = len(indptr) - 1
    seen = bytearray(n)
    stack = list(frontier)
    while stack:
        v = stack.pop()
        for i in range(indptr[v], indptr[v + 1]):
            w = indices[i]
            if not seen[w]:
                seen[w] = 1
                stack.append(w)
    out = np.empty(sum(seen), dtype=np.int64)
    k = 0
    for v in range(n):
        if seen[v]:
            out[k] = v
            k += 1
    return out
