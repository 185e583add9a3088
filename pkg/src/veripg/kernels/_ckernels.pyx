# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled traversal kernels over CSR adjacency (see pure.py for the contract)."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


def step(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices, cnp.int64_t[::1] frontier):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef cnp.uint8_t[::1] seen = np.zeros(n, dtype=np.uint8)
    cdef Py_ssize_t fi, i, hits = 0
    cdef cnp.int64_t v, w
    for fi in range(frontier.shape[0]):
        v = frontier[fi]
        for i in range(indptr[v], indptr[v + 1]):
            w = indices[i]
            if not seen[w]:
                seen[w] = 1
                hits += 1
    out = np.empty(hits, dtype=np.int64)
    cdef cnp.int64_t[::1] ov = out
    cdef Py_ssize_t k = 0
    for i in range(n):
        if seen[i]:
            ov[k] = i
            k += 1
    return out


def closure(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices, cnp.int64_t[::1] frontier):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef cnp.uint8_t[::1] seen = np.zeros(n, dtype=np.uint8)
    cdef cnp.int64_t[::1] stack = np.empty(n + frontier.shape[0], dtype=np.int64)
    cdef Py_ssize_t top = 0, i, hits = 0
    cdef cnp.int64_t v, w
    for i in range(frontier.shape[0]):
        stack[top] = frontier[i]
        top += 1
    while top:
        top -= 1
        v = stack[top]
        for i in range(indptr[v], indptr[v + 1]):
            w = indices[i]
            if not seen[w]:
                seen[w] = 1
                hits += 1
                stack[top] = w
                top += 1
    out = np.empty(hits, dtype=np.int64)
    cdef cnp.int64_t[::1] ov = out
    cdef Py_ssize_t k = 0
    for i in range(n):
        if seen[i]:
            ov[k] = i
            k += 1
    return out
