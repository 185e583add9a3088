"""Traversal kernel backend selection.

The compiled Cython kernels are preferred; the pure-Python twin is used
when the extension is unavailable or when VERIPG_PURE=1 is set.  Both
expose the same step/closure contract over CSR adjacency arrays.
"""

from __future__ import annotations

import os

from veripg.kernels import pure

if os.environ.get("VERIPG_PURE") == "1":
    _impl = pure
else:
    try:
        from veripg.kernels import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = pure

BACKEND: str = _impl.BACKEND
step = _impl.step
closure = _impl.closure

__all__ = ["BACKEND", "step", "closure", "pure"]
